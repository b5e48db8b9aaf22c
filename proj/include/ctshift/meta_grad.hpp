#pragma once

#include "ctshift/task.hpp"
#include "ctshift/types.hpp"

#include <vector>

namespace ctshift {

enum class MetaGradKind {
  Reptile,  // phi - theta_k
  Fomaml,   // task gradient at theta_k
};

// Batch index Fomaml evaluates its gradient on: CurrentStep is the batch of
// the step just taken (index k-1 after k steps), NextStep is batch k.
enum class FomamlLossIndex { CurrentStep, NextStep };

// First-order meta-gradient at horizon k. Reptile depends only on
// (phi, theta_k); Fomaml evaluates the task gradient at theta_k.
Vector meta_grad(MetaGradKind kind, const Vector& phi, const Vector& theta_k, const Task& task,
                 long k, FomamlLossIndex fomaml_index = FomamlLossIndex::CurrentStep);

// Arithmetic mean over tasks, accumulated in ascending task-id order so the
// reduction is identical regardless of input permutation.
Vector average_meta_grad(MetaGradKind kind, const Vector& phi, const std::vector<Vector>& thetas,
                         const std::vector<Task>& tasks, long k,
                         FomamlLossIndex fomaml_index = FomamlLossIndex::CurrentStep);

}  // namespace ctshift
