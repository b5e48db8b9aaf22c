#pragma once

#include "ctshift/inner_opt.hpp"
#include "ctshift/meta_grad.hpp"
#include "ctshift/task.hpp"
#include "ctshift/types.hpp"

#include <cstdint>
#include <vector>

namespace ctshift {

enum class TrainVariant {
  Baseline,           // K inner steps per task, then one meta-update; M rounds
  ContinualShifting,  // meta-update + trajectory shift after every inner step
  OursAccurate,       // same schedule, each theta_k recomputed by a fresh unroll
  NoShifting,         // ContinualShifting without the shift line
  RandomShifting,     // shift replaced by an equal-norm random direction per task
};

struct MetaConfig {
  double beta = 0.1;  // meta learning rate
  long K = 100;       // inner-trajectory length
  long M = 1;         // repetitions of the inner-optimization process
  long T = 1;         // task count; must match the task list
  MetaGradKind meta_grad = MetaGradKind::Reptile;
  FomamlLossIndex fomaml_index = FomamlLossIndex::CurrentStep;
  InnerOptConfig inner;
  TrainVariant variant = TrainVariant::ContinualShifting;
  std::uint64_t seed = 0;
  // Keep momentum/Adam buffers across repetitions instead of zeroing them
  // when task learners reset to the current phi.
  bool preserve_opt_state = false;
  bool record_theta = false;  // store per-task theta after every inner step
  int threads = 1;

  void validate() const;
};

struct MetaTrainRun {
  // phi after each meta-update; phi_history[0] is phi_0.
  std::vector<Vector> phi_history;
  // Cumulative inner-gradient steps at each phi_history entry.
  std::vector<long> inner_steps_history;
  // Task-average loss at each phi_history entry (batch index 0).
  std::vector<double> avg_loss_history;
  long inner_step_counter = 0;
  long meta_update_counter = 0;
  // [task][step] shifted trajectories, filled when record_theta is set.
  std::vector<std::vector<Vector>> theta_history;
  // Meta-updates Delta_k in order, one per meta-update.
  std::vector<Vector> delta_history;

  const Vector& final_phi() const { return phi_history.back(); }
};

MetaTrainRun train_baseline(const MetaConfig& cfg, const std::vector<Task>& tasks,
                            const Vector& phi0);
MetaTrainRun train_continual_shifting(const MetaConfig& cfg, const std::vector<Task>& tasks,
                                      const Vector& phi0);
MetaTrainRun train_ours_accurate(const MetaConfig& cfg, const std::vector<Task>& tasks,
                                 const Vector& phi0);
MetaTrainRun train_ablation(const MetaConfig& cfg, const std::vector<Task>& tasks,
                            const Vector& phi0);

/// Dispatch on cfg.variant.
MetaTrainRun train(const MetaConfig& cfg, const std::vector<Task>& tasks, const Vector& phi0);

}  // namespace ctshift
