#pragma once

#include "ctshift/task.hpp"
#include "ctshift/types.hpp"

#include <vector>

namespace ctshift {

enum class UpdateRule {
  Sgd,
  SgdMomentum,
  SgdWeightDecay,
  SgdMomentumWeightDecay,
  // Adam works with the same trajectory-shift rule, but the error growth
  // law checked by the error lab is not claimed for it.
  Adam,
};

struct InnerOptConfig {
  UpdateRule rule = UpdateRule::Sgd;
  double alpha = 0.01;  // inner learning rate
  double mu = 0.0;      // momentum, [0,1)
  double lambda = 0.0;  // weight decay coefficient on lambda*||theta||^2
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  bool nesterov = false;
  // L2 gradient cap applied before the update; 0 disables. Keeps steep
  // regions of quartic-style losses from blowing up the trajectory.
  double grad_clip = 0.0;
  // Step decay of alpha: alpha * decay_factor^(step / decay_every).
  // CLI convenience only; 0 disables.
  long decay_every = 0;
  double decay_factor = 1.0;

  bool uses_momentum() const {
    return rule == UpdateRule::SgdMomentum || rule == UpdateRule::SgdMomentumWeightDecay;
  }
  bool uses_weight_decay() const {
    return rule == UpdateRule::SgdWeightDecay || rule == UpdateRule::SgdMomentumWeightDecay;
  }
  bool is_adam() const { return rule == UpdateRule::Adam; }

  void validate() const;
};

struct InnerOptState {
  Vector theta;
  Vector momentum;  // size 0 unless the rule uses momentum
  Vector adam_m, adam_v;
  long step_count = 0;  // steps taken in this trajectory; also the batch index
  long adam_t = 0;      // bias-correction timestep; survives trajectory resets
};

/// theta = phi, step_count = 0, buffers zeroed.
InnerOptState init_state(const InnerOptConfig& cfg, const Vector& phi);

// One inner-gradient step; the gradient is evaluated at the current theta
// with batch index step_count, then step_count increments.
void step(InnerOptState& state, const InnerOptConfig& cfg, const Task& task);

// Trajectory shift: theta += delta. Buffers and step_count stay untouched;
// they encode gradient history, which the shift does not alter.
void shift(InnerOptState& state, const Vector& delta);

/// [theta_0 = phi, theta_1, ..., theta_k] by repeated step.
std::vector<Vector> unroll(const InnerOptConfig& cfg, const Vector& phi, const Task& task, long k);

}  // namespace ctshift
