#pragma once

#include "ctshift/inner_opt.hpp"
#include "ctshift/rng.hpp"
#include "ctshift/task.hpp"
#include "ctshift/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ctshift {

// ||eps|| values below this are reported as the floor when taking log10,
// so exactly-zero errors (linear tasks) stay plottable.
inline constexpr double kEpsilonFloor = 1e-15;

enum class DeltaMode {
  RandomUnit,   // direction x/||x||, x ~ N(0,I); norm exactly beta
  FromTrainer,  // the Delta_k sequence of an actual single-task shifted run
};

struct ErrorProbeConfig {
  InnerOptConfig inner;  // inner.alpha is the probe's alpha
  double beta = 0.01;
  long k = 16;
  DeltaMode delta_mode = DeltaMode::RandomUnit;
  long n_repeats = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// k-1 vectors, each of norm exactly beta (zero vectors when beta == 0).
std::vector<Vector> sample_deltas(Index dim, long k, double beta, RngStream& rng);

// ||A - B||_2 where A is the exact k-step unroll from phi + sum(deltas) and
// B interleaves one inner step with one shift per delta. Both sides see the
// same batch sequence and the same deltas.
double measure_epsilon_with_deltas(const InnerOptConfig& inner, const Task& task,
                                   const Vector& phi, const std::vector<Vector>& deltas);

/// One measurement; the delta sequence comes from (cfg.seed, repeat).
double measure_epsilon(const ErrorProbeConfig& cfg, const Task& task, const Vector& phi,
                       long repeat = 0);

// Bound shape beta*alpha*(h+2*lambda)*k^2/(1-mu) + beta^2*k with unit
// constant; reduces to the vanilla-SGD form when mu = lambda = 0.
double theoretical_bound(double alpha, double beta, double h, long k, double mu = 0.0,
                         double lambda = 0.0);

enum class SweepAxis { Alpha, Beta, K, Activation };

struct SweepRow {
  double alpha;
  double beta;
  long k;
  std::string label;
  double mean_log10_eps;
  double ci_half_width;  // 1.96 * sd / sqrt(n) over repeats of log10||eps||
  long n_repeats;
  std::optional<double> bound;
};

struct ErrorSweepResult {
  SweepAxis axis;
  std::vector<SweepRow> rows;
};

// The tasks a sweep runs over. Labels become CSV rows; at a matched cell
// every label sees the same phi and the same delta sequence.
struct SweepTaskSet {
  std::vector<std::pair<std::string, Task>> tasks;
  std::function<Vector(std::uint64_t)> phi_sampler;  // fresh phi per repeat
  std::optional<double> hessian_norm;  // enables the bound column
};

struct SweepConfig {
  SweepAxis axis = SweepAxis::K;
  std::vector<double> values;  // swept axis values (ignored for Activation)
  double alpha = 0.01;
  double beta = 0.01;
  long k = 16;
  InnerOptConfig inner;  // rule/mu/lambda template; alpha set per cell
  long n_repeats = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

ErrorSweepResult sweep(const SweepConfig& cfg, const SweepTaskSet& task_set, int threads = 1);

}  // namespace ctshift
