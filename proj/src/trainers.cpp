#include "ctshift/trainers.hpp"

#include "ctshift/parallel.hpp"
#include "ctshift/rng.hpp"

#include <cmath>
#include <set>

namespace ctshift {

namespace {

double avg_loss_at(const std::vector<Task>& tasks, const Vector& phi) {
  double sum = 0.0;
  for (const Task& t : tasks) sum += t.loss(phi, 0);
  return sum / static_cast<double>(tasks.size());
}

void check_tasks(const MetaConfig& cfg, const std::vector<Task>& tasks, const Vector& phi0) {
  require(static_cast<long>(tasks.size()) == cfg.T,
          "train: cfg.T does not match the task list size");
  std::set<int> ids;
  for (const Task& t : tasks) {
    require(t.dim() == phi0.size(), "train: task dimension does not match phi0");
    require(ids.insert(t.id()).second, "train: duplicate task id");
  }
}

struct RunRecorder {
  MetaTrainRun run;
  const std::vector<Task>& tasks;

  explicit RunRecorder(const MetaConfig& cfg, const std::vector<Task>& tasks_, const Vector& phi0)
      : tasks(tasks_) {
    if (cfg.record_theta) run.theta_history.resize(tasks.size());
    record_phi(phi0);
  }

  void record_phi(const Vector& phi) {
    run.phi_history.push_back(phi);
    run.inner_steps_history.push_back(run.inner_step_counter);
    run.avg_loss_history.push_back(avg_loss_at(tasks, phi));
  }

  void record_update(const Vector& phi, const Vector& delta) {
    run.meta_update_counter += 1;
    run.delta_history.push_back(delta);
    record_phi(phi);
  }
};

}  // namespace

void MetaConfig::validate() const {
  require(beta >= 0.0 && std::isfinite(beta), "meta config: beta must be finite and >= 0");
  require(K >= 1, "meta config: K must be >= 1");
  require(M >= 1, "meta config: M must be >= 1");
  require(T >= 1, "meta config: T must be >= 1");
  inner.validate();
}

MetaTrainRun train_baseline(const MetaConfig& cfg, const std::vector<Task>& tasks,
                            const Vector& phi0) {
  cfg.validate();
  require(cfg.variant == TrainVariant::Baseline, "train_baseline: variant must be Baseline");
  check_tasks(cfg, tasks, phi0);

  const std::size_t T = tasks.size();
  Vector phi = phi0;
  RunRecorder rec(cfg, tasks, phi0);

  std::vector<InnerOptState> states(T);
  std::vector<Vector> thetas(T);
  for (long m = 0; m < cfg.M; ++m) {
    parallel_for(T, cfg.threads, [&](std::size_t t) {
      if (cfg.preserve_opt_state && m > 0) {
        states[t].theta = phi;
        states[t].step_count = 0;
      } else {
        states[t] = init_state(cfg.inner, phi);
      }
      for (long k = 0; k < cfg.K; ++k) {
        step(states[t], cfg.inner, tasks[t]);
        if (cfg.record_theta) rec.run.theta_history[t].push_back(states[t].theta);
      }
      thetas[t] = states[t].theta;
    });
    rec.run.inner_step_counter += static_cast<long>(T) * cfg.K;

    Vector delta = -cfg.beta * average_meta_grad(cfg.meta_grad, phi, thetas, tasks, cfg.K,
                                                 cfg.fomaml_index);
    phi += delta;
    rec.record_update(phi, delta);
  }
  return std::move(rec.run);
}

namespace {

// Shared driver for ContinualShifting / NoShifting / RandomShifting: the
// meta-update schedule is identical, only the shift line differs.
MetaTrainRun run_interleaved(const MetaConfig& cfg, const std::vector<Task>& tasks,
                             const Vector& phi0) {
  const std::size_t T = tasks.size();
  Vector phi = phi0;
  RunRecorder rec(cfg, tasks, phi0);

  Rng rng(cfg.seed);
  std::vector<RngStream> shift_streams;
  if (cfg.variant == TrainVariant::RandomShifting) {
    shift_streams.reserve(T);
    for (const Task& t : tasks) {
      shift_streams.push_back(rng.stream(RngPurpose::RandomShift, static_cast<std::uint64_t>(t.id())));
    }
  }

  std::vector<InnerOptState> states(T);
  std::vector<Vector> thetas(T);
  for (long m = 0; m < cfg.M; ++m) {
    for (std::size_t t = 0; t < T; ++t) {
      if (cfg.preserve_opt_state && m > 0) {
        states[t].theta = phi;
        states[t].step_count = 0;
      } else {
        states[t] = init_state(cfg.inner, phi);
      }
    }
    for (long k = 1; k <= cfg.K; ++k) {
      parallel_for(T, cfg.threads, [&](std::size_t t) {
        step(states[t], cfg.inner, tasks[t]);
        thetas[t] = states[t].theta;
      });
      rec.run.inner_step_counter += static_cast<long>(T);

      Vector delta =
          -cfg.beta * average_meta_grad(cfg.meta_grad, phi, thetas, tasks, k, cfg.fomaml_index);
      phi += delta;

      switch (cfg.variant) {
        case TrainVariant::ContinualShifting:
          for (std::size_t t = 0; t < T; ++t) shift(states[t], delta);
          break;
        case TrainVariant::NoShifting:
          break;
        case TrainVariant::RandomShifting: {
          double norm = delta.norm();
          for (std::size_t t = 0; t < T; ++t) {
            Vector direction = shift_streams[t].unit_vector(delta.size());
            shift(states[t], Vector(norm * direction));
          }
          break;
        }
        default:
          throw UsageError("run_interleaved: unsupported variant");
      }

      if (cfg.record_theta) {
        for (std::size_t t = 0; t < T; ++t) rec.run.theta_history[t].push_back(states[t].theta);
      }
      rec.record_update(phi, delta);
    }
  }
  return std::move(rec.run);
}

}  // namespace

MetaTrainRun train_continual_shifting(const MetaConfig& cfg, const std::vector<Task>& tasks,
                                      const Vector& phi0) {
  cfg.validate();
  require(cfg.variant == TrainVariant::ContinualShifting,
          "train_continual_shifting: variant must be ContinualShifting");
  check_tasks(cfg, tasks, phi0);
  return run_interleaved(cfg, tasks, phi0);
}

MetaTrainRun train_ablation(const MetaConfig& cfg, const std::vector<Task>& tasks,
                            const Vector& phi0) {
  cfg.validate();
  require(cfg.variant == TrainVariant::NoShifting || cfg.variant == TrainVariant::RandomShifting,
          "train_ablation: variant must be NoShifting or RandomShifting");
  check_tasks(cfg, tasks, phi0);
  return run_interleaved(cfg, tasks, phi0);
}

MetaTrainRun train_ours_accurate(const MetaConfig& cfg, const std::vector<Task>& tasks,
                                 const Vector& phi0) {
  cfg.validate();
  require(cfg.variant == TrainVariant::OursAccurate,
          "train_ours_accurate: variant must be OursAccurate");
  check_tasks(cfg, tasks, phi0);

  const std::size_t T = tasks.size();
  Vector phi = phi0;
  RunRecorder rec(cfg, tasks, phi0);

  std::vector<Vector> thetas(T);
  for (long m = 0; m < cfg.M; ++m) {
    for (long k = 1; k <= cfg.K; ++k) {
      // theta_k is exact: a fresh k-step unroll from the current phi.
      parallel_for(T, cfg.threads,
                   [&](std::size_t t) { thetas[t] = unroll(cfg.inner, phi, tasks[t], k).back(); });
      rec.run.inner_step_counter += static_cast<long>(T) * k;

      Vector delta =
          -cfg.beta * average_meta_grad(cfg.meta_grad, phi, thetas, tasks, k, cfg.fomaml_index);
      phi += delta;
      if (cfg.record_theta) {
        for (std::size_t t = 0; t < T; ++t) rec.run.theta_history[t].push_back(thetas[t]);
      }
      rec.record_update(phi, delta);
    }
  }
  return std::move(rec.run);
}

MetaTrainRun train(const MetaConfig& cfg, const std::vector<Task>& tasks, const Vector& phi0) {
  switch (cfg.variant) {
    case TrainVariant::Baseline:
      return train_baseline(cfg, tasks, phi0);
    case TrainVariant::ContinualShifting:
      return train_continual_shifting(cfg, tasks, phi0);
    case TrainVariant::OursAccurate:
      return train_ours_accurate(cfg, tasks, phi0);
    case TrainVariant::NoShifting:
    case TrainVariant::RandomShifting:
      return train_ablation(cfg, tasks, phi0);
  }
  throw UsageError("train: unknown variant");
}

}  // namespace ctshift
