#pragma once

#include "ctshift/task.hpp"
#include "ctshift/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ctshift {

enum class Activation { Relu, Softplus };

struct MlpSpec {
  std::vector<long> layer_sizes{8, 32, 32, 1};
  Activation activation = Activation::Softplus;
  long batch_size = 64;
  long dataset_size = 4096;
  std::uint64_t seed = 0;

  void validate() const;
  /// Sum of (in+1)*out over layers.
  long param_dim() const;
};

// Fully-connected regression net with hand-written backprop. The dataset is
// synthetic: inputs are standard normal, targets come from a fixed random
// teacher of the same architecture (Softplus activations, so ReLU and
// Softplus students of one seed share identical data). The minibatch at
// step i is a pure function of (seed, i).
//
// Parameter layout: for each layer, the weight matrix (out x in) in
// column-major order, then the bias (out).
class MlpTask {
 public:
  explicit MlpTask(MlpSpec spec);

  double loss(const Vector& theta, long step) const;
  Vector grad(const Vector& theta, long step) const;
  std::pair<double, Vector> loss_and_grad(const Vector& theta, long step) const;
  Index dim() const { return spec_.param_dim(); }

  const MlpSpec& spec() const { return spec_; }

  /// Scaled-Gaussian weights (std 1/sqrt(fan_in)), zero biases.
  Vector init_params(std::uint64_t param_seed) const;

 private:
  std::vector<long> batch_indices(long step) const;

  MlpSpec spec_;
  Matrix inputs_;   // in x N
  Matrix targets_;  // out x N
};

}  // namespace ctshift
