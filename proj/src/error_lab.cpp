#include "ctshift/error_lab.hpp"

#include "ctshift/parallel.hpp"
#include "ctshift/trainers.hpp"

#include <algorithm>
#include <cmath>

namespace ctshift {

void ErrorProbeConfig::validate() const {
  inner.validate();
  require(beta >= 0.0 && std::isfinite(beta), "error probe: beta must be finite and >= 0");
  require(k >= 2, "error probe: k must be >= 2");
  require(n_repeats >= 1, "error probe: n_repeats must be >= 1");
}

std::vector<Vector> sample_deltas(Index dim, long k, double beta, RngStream& rng) {
  require(k >= 2, "sample_deltas: k must be >= 2");
  require(beta >= 0.0, "sample_deltas: beta must be >= 0");
  std::vector<Vector> deltas;
  deltas.reserve(static_cast<std::size_t>(k - 1));
  for (long i = 0; i < k - 1; ++i) {
    deltas.push_back(beta == 0.0 ? Vector(Vector::Zero(dim))
                                 : Vector(beta * rng.unit_vector(dim)));
  }
  return deltas;
}

double measure_epsilon_with_deltas(const InnerOptConfig& inner, const Task& task,
                                   const Vector& phi, const std::vector<Vector>& deltas) {
  const long k = static_cast<long>(deltas.size()) + 1;
  require(k >= 2, "measure_epsilon: need at least one delta (k >= 2)");

  // Term A: exact unroll from the fully shifted initialization.
  Vector shifted_phi = phi;
  for (const Vector& d : deltas) shifted_phi += d;
  InnerOptState exact = init_state(inner, shifted_phi);
  for (long i = 0; i < k; ++i) step(exact, inner, task);

  // Term B: interleave one inner step with one shift per delta.
  InnerOptState interleaved = init_state(inner, phi);
  for (long i = 1; i <= k; ++i) {
    step(interleaved, inner, task);
    if (i <= k - 1) shift(interleaved, deltas[static_cast<std::size_t>(i - 1)]);
  }

  return (exact.theta - interleaved.theta).norm();
}

namespace {

std::vector<Vector> deltas_from_trainer(const ErrorProbeConfig& cfg, const Task& task,
                                        const Vector& phi, std::uint64_t run_seed) {
  // A single-task shifted run of length k-1 yields Delta_1..Delta_{k-1}.
  MetaConfig mc;
  mc.beta = cfg.beta;
  mc.K = cfg.k - 1;
  mc.M = 1;
  mc.T = 1;
  mc.inner = cfg.inner;
  mc.variant = TrainVariant::ContinualShifting;
  mc.seed = run_seed;
  MetaTrainRun run = train_continual_shifting(mc, {task}, phi);
  return run.delta_history;
}

}  // namespace

double measure_epsilon(const ErrorProbeConfig& cfg, const Task& task, const Vector& phi,
                       long repeat) {
  cfg.validate();
  require(phi.size() == task.dim(), "measure_epsilon: phi/task dimension mismatch");
  std::vector<Vector> deltas;
  if (cfg.delta_mode == DeltaMode::RandomUnit) {
    RngStream rng = Rng(cfg.seed).stream(RngPurpose::MetaGradDirection,
                                         static_cast<std::uint64_t>(repeat));
    deltas = sample_deltas(task.dim(), cfg.k, cfg.beta, rng);
  } else {
    deltas = deltas_from_trainer(cfg, task, phi,
                                 splitmix64(cfg.seed ^ static_cast<std::uint64_t>(repeat)));
  }
  return measure_epsilon_with_deltas(cfg.inner, task, phi, deltas);
}

double theoretical_bound(double alpha, double beta, double h, long k, double mu, double lambda) {
  require(alpha >= 0.0 && beta >= 0.0 && h >= 0.0 && lambda >= 0.0,
          "theoretical_bound: arguments must be >= 0");
  require(k >= 0, "theoretical_bound: k must be >= 0");
  require(mu >= 0.0 && mu < 1.0, "theoretical_bound: mu must be in [0,1)");
  double dk = static_cast<double>(k);
  return beta * alpha * (h + 2.0 * lambda) * dk * dk / (1.0 - mu) + beta * beta * dk;
}

void SweepConfig::validate() const {
  inner.validate();
  require(alpha > 0.0, "sweep: alpha must be > 0");
  require(beta >= 0.0, "sweep: beta must be >= 0");
  require(k >= 2, "sweep: k must be >= 2");
  require(n_repeats >= 1, "sweep: n_repeats must be >= 1");
  if (axis != SweepAxis::Activation) {
    require(!values.empty(), "sweep: swept axis needs at least one value");
    if (axis == SweepAxis::K) {
      for (double v : values) {
        require(v >= 2.0 && v == std::floor(v), "sweep: k values must be integers >= 2");
      }
    } else {
      for (double v : values) require(v > 0.0, "sweep: swept values must be > 0");
    }
  }
}

ErrorSweepResult sweep(const SweepConfig& cfg, const SweepTaskSet& task_set, int threads) {
  cfg.validate();
  require(!task_set.tasks.empty(), "sweep: task set must be non-empty");
  require(static_cast<bool>(task_set.phi_sampler), "sweep: phi sampler required");

  struct Cell {
    double alpha, beta;
    long k;
    std::size_t value_index;
  };
  std::vector<Cell> cells;
  if (cfg.axis == SweepAxis::Activation) {
    cells.push_back({cfg.alpha, cfg.beta, cfg.k, 0});
  } else {
    for (std::size_t i = 0; i < cfg.values.size(); ++i) {
      Cell c{cfg.alpha, cfg.beta, cfg.k, i};
      if (cfg.axis == SweepAxis::Alpha) c.alpha = cfg.values[i];
      if (cfg.axis == SweepAxis::Beta) c.beta = cfg.values[i];
      if (cfg.axis == SweepAxis::K) c.k = static_cast<long>(cfg.values[i]);
      cells.push_back(c);
    }
  }

  const std::size_t n_tasks = task_set.tasks.size();
  const std::size_t n_repeats = static_cast<std::size_t>(cfg.n_repeats);
  // log10||eps|| samples indexed [cell][task][repeat].
  std::vector<double> samples(cells.size() * n_tasks * n_repeats, 0.0);

  parallel_for(cells.size() * n_repeats, threads, [&](std::size_t job) {
    std::size_t cell_idx = job / n_repeats;
    std::size_t repeat = job % n_repeats;
    const Cell& cell = cells[cell_idx];

    Vector phi = task_set.phi_sampler(static_cast<std::uint64_t>(repeat));
    // Deltas keyed by (cell, repeat) only: matched labels share them.
    RngStream delta_rng = Rng(cfg.seed).stream(RngPurpose::MetaGradDirection,
                                               static_cast<std::uint64_t>(cell_idx),
                                               static_cast<std::uint64_t>(repeat));
    std::vector<Vector> deltas = sample_deltas(phi.size(), cell.k, cell.beta, delta_rng);

    InnerOptConfig inner = cfg.inner;
    inner.alpha = cell.alpha;
    for (std::size_t t = 0; t < n_tasks; ++t) {
      double eps = measure_epsilon_with_deltas(inner, task_set.tasks[t].second, phi, deltas);
      samples[(cell_idx * n_tasks + t) * n_repeats + repeat] =
          std::log10(std::max(eps, kEpsilonFloor));
    }
  });

  ErrorSweepResult result;
  result.axis = cfg.axis;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t t = 0; t < n_tasks; ++t) {
      const double* begin = &samples[(c * n_tasks + t) * n_repeats];
      double mean = 0.0;
      for (std::size_t r = 0; r < n_repeats; ++r) mean += begin[r];
      mean /= static_cast<double>(n_repeats);
      double var = 0.0;
      for (std::size_t r = 0; r < n_repeats; ++r) {
        var += (begin[r] - mean) * (begin[r] - mean);
      }
      double half_width = 0.0;
      if (n_repeats > 1) {
        double sd = std::sqrt(var / static_cast<double>(n_repeats - 1));
        half_width = 1.96 * sd / std::sqrt(static_cast<double>(n_repeats));
      }

      SweepRow row;
      row.alpha = cells[c].alpha;
      row.beta = cells[c].beta;
      row.k = cells[c].k;
      row.label = task_set.tasks[t].first;
      row.mean_log10_eps = mean;
      row.ci_half_width = half_width;
      row.n_repeats = cfg.n_repeats;
      if (task_set.hessian_norm) {
        row.bound = theoretical_bound(row.alpha, row.beta, *task_set.hessian_norm, row.k,
                                      cfg.inner.mu, cfg.inner.lambda);
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace ctshift
