#include "ctshift/inner_opt.hpp"

#include <cmath>

namespace ctshift {

void InnerOptConfig::validate() const {
  require(alpha > 0.0 && std::isfinite(alpha), "inner config: alpha must be > 0");
  require(mu >= 0.0 && mu < 1.0, "inner config: mu must be in [0,1)");
  require(lambda >= 0.0, "inner config: lambda must be >= 0");
  require(uses_momentum() || mu == 0.0, "inner config: mu set but rule has no momentum");
  require(uses_weight_decay() || lambda == 0.0,
          "inner config: lambda set but rule has no weight decay");
  require(grad_clip >= 0.0, "inner config: grad_clip must be >= 0");
  if (is_adam()) {
    require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "inner config: adam_beta1 must be in [0,1)");
    require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "inner config: adam_beta2 must be in [0,1)");
    require(adam_eps > 0.0, "inner config: adam_eps must be > 0");
  }
  require(decay_every >= 0, "inner config: decay_every must be >= 0");
  require(decay_factor > 0.0, "inner config: decay_factor must be > 0");
}

InnerOptState init_state(const InnerOptConfig& cfg, const Vector& phi) {
  cfg.validate();
  InnerOptState s;
  s.theta = phi;
  s.step_count = 0;
  if (cfg.uses_momentum()) s.momentum = Vector::Zero(phi.size());
  if (cfg.is_adam()) {
    s.adam_m = Vector::Zero(phi.size());
    s.adam_v = Vector::Zero(phi.size());
  }
  return s;
}

void step(InnerOptState& state, const InnerOptConfig& cfg, const Task& task) {
  require(state.theta.size() == task.dim(), "step: state/task dimension mismatch");
  Vector g = task.grad(state.theta, state.step_count);

  if (cfg.grad_clip > 0.0) {
    double norm = g.norm();
    if (norm > cfg.grad_clip) g *= cfg.grad_clip / norm;
  }
  if (cfg.uses_weight_decay()) g += 2.0 * cfg.lambda * state.theta;

  double alpha = cfg.alpha;
  if (cfg.decay_every > 0) {
    alpha *= std::pow(cfg.decay_factor, static_cast<double>(state.step_count / cfg.decay_every));
  }

  if (cfg.is_adam()) {
    long t = ++state.adam_t;
    state.adam_m = cfg.adam_beta1 * state.adam_m + (1.0 - cfg.adam_beta1) * g;
    state.adam_v = cfg.adam_beta2 * state.adam_v + (1.0 - cfg.adam_beta2) * g.cwiseProduct(g);
    double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(t));
    double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(t));
    Vector m_hat = state.adam_m / bc1;
    Vector v_hat = state.adam_v / bc2;
    state.theta -= alpha * (m_hat.array() / (v_hat.array().sqrt() + cfg.adam_eps)).matrix();
  } else if (cfg.uses_momentum()) {
    state.momentum = cfg.mu * state.momentum + g;
    if (cfg.nesterov) {
      state.theta -= alpha * (g + cfg.mu * state.momentum);
    } else {
      state.theta -= alpha * state.momentum;
    }
  } else {
    state.theta -= alpha * g;
  }

  state.step_count += 1;
  check_finite(state.theta, "step: task " + std::to_string(task.id()) + " parameters after step " +
                                std::to_string(state.step_count));
}

void shift(InnerOptState& state, const Vector& delta) {
  check_same_dim(state.theta, delta, "shift");
  state.theta += delta;
}

std::vector<Vector> unroll(const InnerOptConfig& cfg, const Vector& phi, const Task& task, long k) {
  require(k >= 0, "unroll: k must be >= 0");
  std::vector<Vector> trajectory;
  trajectory.reserve(static_cast<std::size_t>(k) + 1);
  InnerOptState s = init_state(cfg, phi);
  trajectory.push_back(s.theta);
  for (long i = 0; i < k; ++i) {
    step(s, cfg, task);
    trajectory.push_back(s.theta);
  }
  return trajectory;
}

}  // namespace ctshift
