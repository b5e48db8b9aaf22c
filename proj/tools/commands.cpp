#include "commands.hpp"

#include "ctshift/csv.hpp"
#include "ctshift/error_lab.hpp"
#include "ctshift/mlp.hpp"
#include "ctshift/parallel.hpp"
#include "ctshift/rng.hpp"
#include "ctshift/synthetic.hpp"
#include "ctshift/trainers.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>

namespace ctshift::cli {

namespace {

using nlohmann::ordered_json;

// ---- schema ----------------------------------------------------------------

const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema{
      {"run", {"seed", "out", "threads"}},
      {"tasks",
       {"kind", "n_tasks", "circle_center", "circle_radius", "dim", "hessian_norm",
        "layer_sizes", "activation", "batch_size", "dataset_size"}},
      {"inner",
       {"rule", "alpha", "mu", "lambda", "nesterov", "grad_clip", "adam_beta1", "adam_beta2",
        "adam_eps", "decay_every", "decay_factor"}},
      {"meta",
       {"variant", "meta_grad", "beta", "K", "M", "phi0", "phi0_seed", "preserve_opt_state",
        "record_theta"}},
      {"map", {"x_min", "x_max", "y_min", "y_max", "nx", "ny", "eval_steps"}},
      {"sweep", {"axis", "values", "alpha", "beta", "k", "repeats"}},
      {"landscape",
       {"x_min", "x_max", "y_min", "y_max", "nx", "ny", "K", "M", "variant",
        "cluster_threshold"}},
  };
  return schema;
}

// ---- resolved run context ---------------------------------------------------

struct RunContext {
  ConfigDoc doc;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  int threads = 1;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
};

RunContext load_context(const std::filesystem::path& config_path, const GlobalFlags& flags) {
  RunContext ctx;
  ctx.doc = ConfigDoc::parse_file(config_path);
  ctx.doc.check_known(config_schema());
  ctx.seed = flags.seed ? *flags.seed
                        : static_cast<std::uint64_t>(ctx.doc.get_integer_or("run", "seed", 0));
  ctx.out_dir = flags.out ? *flags.out : ctx.doc.get_string_or("run", "out", "out");
  ctx.threads = flags.threads ? *flags.threads
                              : static_cast<int>(ctx.doc.get_integer_or("run", "threads", 1));
  require(ctx.threads >= 1, "run: threads must be >= 1");
  std::filesystem::create_directories(ctx.out_dir);
  return ctx;
}

ordered_json config_echo(const ConfigDoc& doc) {
  ordered_json echo = ordered_json::object();
  for (const auto& [section, keys] : doc.sections()) {
    ordered_json sec = ordered_json::object();
    for (const auto& [key, value] : keys) {
      switch (value.type) {
        case ConfigValue::Type::Bool: sec[key] = value.boolean; break;
        case ConfigValue::Type::Number: sec[key] = value.number; break;
        case ConfigValue::Type::String: sec[key] = value.str; break;
        case ConfigValue::Type::NumberList: sec[key] = value.numbers; break;
        case ConfigValue::Type::StringList: sec[key] = value.strings; break;
      }
    }
    echo[section] = std::move(sec);
  }
  return echo;
}

void write_manifest(const RunContext& ctx, const std::string& command,
                    const ordered_json& counters, const std::vector<std::string>& outputs) {
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.started)
                    .count();
  ordered_json manifest;
  manifest["command"] = command;
  manifest["version"] = "0.1.0";
  manifest["seed"] = ctx.seed;
  manifest["config"] = config_echo(ctx.doc);
  manifest["counters"] = counters;
  manifest["outputs"] = outputs;
  // Execution block holds the only run-dependent fields; everything above is
  // a pure function of (config, seed).
  manifest["execution"] = {{"threads", ctx.threads}, {"wall_time_s", wall}};

  std::ofstream out(ctx.out_dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << "\n";
}

// ---- building blocks from config -------------------------------------------

InnerOptConfig read_inner(const ConfigDoc& doc) {
  InnerOptConfig inner;
  std::string rule = doc.get_string_or("inner", "rule", "sgd");
  if (rule == "sgd") inner.rule = UpdateRule::Sgd;
  else if (rule == "sgd_momentum") inner.rule = UpdateRule::SgdMomentum;
  else if (rule == "sgd_weight_decay") inner.rule = UpdateRule::SgdWeightDecay;
  else if (rule == "sgd_momentum_weight_decay") inner.rule = UpdateRule::SgdMomentumWeightDecay;
  else if (rule == "adam") inner.rule = UpdateRule::Adam;
  else throw UsageError("inner: unknown rule '" + rule + "'");
  inner.alpha = doc.get_number_or("inner", "alpha", 0.01);
  inner.mu = doc.get_number_or("inner", "mu", 0.0);
  inner.lambda = doc.get_number_or("inner", "lambda", 0.0);
  inner.nesterov = doc.get_bool_or("inner", "nesterov", false);
  inner.grad_clip = doc.get_number_or("inner", "grad_clip", 0.0);
  inner.adam_beta1 = doc.get_number_or("inner", "adam_beta1", 0.9);
  inner.adam_beta2 = doc.get_number_or("inner", "adam_beta2", 0.999);
  inner.adam_eps = doc.get_number_or("inner", "adam_eps", 1e-8);
  inner.decay_every = doc.get_integer_or("inner", "decay_every", 0);
  inner.decay_factor = doc.get_number_or("inner", "decay_factor", 1.0);
  inner.validate();
  return inner;
}

struct TaskSetup {
  std::string kind;
  std::vector<Task> tasks;
  Index dim = 0;
  std::optional<double> hessian_norm;       // quadratic only
  std::optional<MlpTask> relu_twin;         // mlp only: same data, relu student
  std::optional<MlpTask> softplus_twin;     // mlp only: same data, softplus student
};

TaskSetup read_tasks(const ConfigDoc& doc, std::uint64_t seed) {
  TaskSetup setup;
  setup.kind = doc.get_string_or("tasks", "kind", "analytic2d");
  long n_tasks = doc.get_integer_or("tasks", "n_tasks", 8);
  Rng rng(seed);

  if (setup.kind == "analytic2d") {
    TaskFamilyConfig fam;
    fam.n_tasks = n_tasks;
    auto center = doc.get_numbers_or("tasks", "circle_center", {5.0, 5.0});
    require(center.size() == 2, "tasks: circle_center must have two entries");
    fam.circle_center = {center[0], center[1]};
    fam.circle_radius = doc.get_number_or("tasks", "circle_radius", 4.0);
    fam.seed = seed;
    setup.tasks = make_tasks(fam);
    setup.dim = 2;
  } else if (setup.kind == "linear") {
    long dim = doc.get_integer_or("tasks", "dim", 8);
    require(dim >= 1, "tasks: dim must be >= 1");
    for (long i = 0; i < n_tasks; ++i) {
      RngStream s = rng.stream(RngPurpose::TaskGeneration, static_cast<std::uint64_t>(i));
      setup.tasks.emplace_back(static_cast<int>(i), LinearTask{s.gaussian(dim)});
    }
    setup.dim = dim;
  } else if (setup.kind == "quadratic") {
    long dim = doc.get_integer_or("tasks", "dim", 8);
    double h_norm = doc.get_number_or("tasks", "hessian_norm", 1.0);
    require(dim >= 1, "tasks: dim must be >= 1");
    require(h_norm > 0.0, "tasks: hessian_norm must be > 0");
    for (long i = 0; i < n_tasks; ++i) {
      RngStream s = rng.stream(RngPurpose::TaskGeneration, static_cast<std::uint64_t>(i));
      Matrix a(dim, dim);
      for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) a(r, c) = s.normal();
      Matrix h = a.transpose() * a;
      Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
      h *= h_norm / es.eigenvalues().cwiseAbs().maxCoeff();
      setup.tasks.emplace_back(static_cast<int>(i), QuadraticTask(h, s.gaussian(dim)));
    }
    setup.dim = dim;
    setup.hessian_norm = h_norm;
  } else if (setup.kind == "mlp") {
    MlpSpec spec;
    auto sizes = doc.get_numbers_or("tasks", "layer_sizes", {8, 32, 32, 1});
    spec.layer_sizes.clear();
    for (double s : sizes) spec.layer_sizes.push_back(static_cast<long>(s));
    std::string act = doc.get_string_or("tasks", "activation", "softplus");
    if (act == "relu") spec.activation = Activation::Relu;
    else if (act == "softplus") spec.activation = Activation::Softplus;
    else throw UsageError("tasks: unknown activation '" + act + "'");
    spec.batch_size = doc.get_integer_or("tasks", "batch_size", 64);
    spec.dataset_size = doc.get_integer_or("tasks", "dataset_size", 4096);
    for (long i = 0; i < n_tasks; ++i) {
      MlpSpec task_spec = spec;
      task_spec.seed = rng.stream(RngPurpose::TaskGeneration,
                                  static_cast<std::uint64_t>(i)).next_u64();
      setup.tasks.emplace_back(static_cast<int>(i), MlpTask(task_spec));
    }
    setup.dim = spec.param_dim();
    MlpSpec twin = spec;
    twin.seed = seed;
    twin.activation = Activation::Relu;
    setup.relu_twin = MlpTask(twin);
    twin.activation = Activation::Softplus;
    setup.softplus_twin = MlpTask(twin);
  } else {
    throw UsageError("tasks: unknown kind '" + setup.kind + "'");
  }
  return setup;
}

MetaConfig read_meta(const ConfigDoc& doc, const TaskSetup& setup, std::uint64_t seed,
                     int threads) {
  MetaConfig cfg;
  std::string variant = doc.get_string_or("meta", "variant", "continual_shifting");
  if (variant == "baseline") cfg.variant = TrainVariant::Baseline;
  else if (variant == "continual_shifting") cfg.variant = TrainVariant::ContinualShifting;
  else if (variant == "ours_accurate") cfg.variant = TrainVariant::OursAccurate;
  else if (variant == "no_shifting") cfg.variant = TrainVariant::NoShifting;
  else if (variant == "random_shifting") cfg.variant = TrainVariant::RandomShifting;
  else throw UsageError("meta: unknown variant '" + variant + "'");

  std::string mg = doc.get_string_or("meta", "meta_grad", "reptile");
  if (mg == "reptile") cfg.meta_grad = MetaGradKind::Reptile;
  else if (mg == "fomaml") cfg.meta_grad = MetaGradKind::Fomaml;
  else throw UsageError("meta: unknown meta_grad '" + mg + "'");

  cfg.beta = doc.get_number_or("meta", "beta", 0.1);
  cfg.K = doc.get_integer_or("meta", "K", 100);
  cfg.M = doc.get_integer_or("meta", "M", 1);
  cfg.T = static_cast<long>(setup.tasks.size());
  cfg.inner = read_inner(doc);
  cfg.seed = seed;
  cfg.preserve_opt_state = doc.get_bool_or("meta", "preserve_opt_state", false);
  cfg.record_theta = doc.get_bool_or("meta", "record_theta", false);
  cfg.threads = threads;
  return cfg;
}

Vector read_phi0(const ConfigDoc& doc, const TaskSetup& setup, std::uint64_t seed) {
  if (doc.has("meta", "phi0")) {
    auto values = doc.get_numbers("meta", "phi0");
    require(static_cast<Index>(values.size()) == setup.dim,
            "meta: phi0 length does not match the task dimension");
    Vector phi(setup.dim);
    for (Index i = 0; i < setup.dim; ++i) phi[i] = values[static_cast<std::size_t>(i)];
    return phi;
  }
  std::uint64_t phi_seed = static_cast<std::uint64_t>(
      doc.get_integer_or("meta", "phi0_seed", static_cast<long>(seed)));
  if (setup.kind == "mlp") return setup.softplus_twin->init_params(phi_seed);
  return Rng(phi_seed).stream(RngPurpose::ParamInit).gaussian(setup.dim);
}

std::string fmt_long(long v) { return std::to_string(v); }

// ---- commands ----------------------------------------------------------------

int run_train(const RunContext& ctx) {
  TaskSetup setup = read_tasks(ctx.doc, ctx.seed);
  MetaConfig cfg = read_meta(ctx.doc, setup, ctx.seed, ctx.threads);
  Vector phi0 = read_phi0(ctx.doc, setup, ctx.seed);

  MetaTrainRun run = train(cfg, setup.tasks, phi0);

  std::vector<std::string> header{"meta_step", "cumulative_inner_steps"};
  for (Index i = 0; i < phi0.size(); ++i) header.push_back("phi_" + std::to_string(i));
  header.push_back("task_avg_loss");
  CsvWriter csv(ctx.out_dir / "trajectory.csv", header);
  for (std::size_t row = 0; row < run.phi_history.size(); ++row) {
    std::vector<std::string> cells{fmt_long(static_cast<long>(row)),
                                   fmt_long(run.inner_steps_history[row])};
    for (Index i = 0; i < phi0.size(); ++i) cells.push_back(format_double(run.phi_history[row][i]));
    cells.push_back(format_double(run.avg_loss_history[row]));
    csv.write_row(cells);
  }
  csv.close();

  write_manifest(ctx, "train",
                 {{"meta_updates", run.meta_update_counter},
                  {"inner_steps", run.inner_step_counter}},
                 {"trajectory.csv"});
  return 0;
}

int run_quality_map(const RunContext& ctx) {
  TaskSetup setup = read_tasks(ctx.doc, ctx.seed);
  require(setup.kind == "analytic2d", "quality-map requires tasks.kind = analytic2d");
  InnerOptConfig inner = read_inner(ctx.doc);

  GridSpec grid;
  grid.x_min = ctx.doc.get_number_or("map", "x_min", -10.0);
  grid.x_max = ctx.doc.get_number_or("map", "x_max", 20.0);
  grid.y_min = ctx.doc.get_number_or("map", "y_min", -10.0);
  grid.y_max = ctx.doc.get_number_or("map", "y_max", 20.0);
  grid.nx = ctx.doc.get_integer_or("map", "nx", 151);
  grid.ny = ctx.doc.get_integer_or("map", "ny", 151);
  long eval_steps = ctx.doc.get_integer_or("map", "eval_steps", 100);

  QualityMap map = quality_map(setup.tasks, grid, inner, eval_steps, ctx.threads);

  // Header names the bounds and resolution of each axis.
  auto axis_header = [](const char* name, double lo, double hi, long n) {
    return std::string(name) + "[" + format_double(lo) + ":" + format_double(hi) + ":" +
           std::to_string(n) + "]";
  };
  CsvWriter csv(ctx.out_dir / "quality_map.csv",
                {axis_header("x", grid.x_min, grid.x_max, grid.nx),
                 axis_header("y", grid.y_min, grid.y_max, grid.ny), "value"});
  for (long iy = 0; iy < grid.ny; ++iy) {
    for (long ix = 0; ix < grid.nx; ++ix) {
      Eigen::Vector2d p = grid.point(ix, iy);
      csv.write_row({format_double(p.x()), format_double(p.y()),
                     format_double(map.values[static_cast<std::size_t>(iy * grid.nx + ix)])});
    }
  }
  csv.close();

  write_manifest(ctx, "quality-map",
                 {{"cells", grid.cells()},
                  {"inner_steps",
                   grid.cells() * static_cast<long>(setup.tasks.size()) * eval_steps}},
                 {"quality_map.csv"});
  return 0;
}

int run_error_sweep(const RunContext& ctx) {
  TaskSetup setup = read_tasks(ctx.doc, ctx.seed);

  SweepConfig cfg;
  std::string axis = ctx.doc.get_string("sweep", "axis");
  if (axis == "alpha") cfg.axis = SweepAxis::Alpha;
  else if (axis == "beta") cfg.axis = SweepAxis::Beta;
  else if (axis == "k") cfg.axis = SweepAxis::K;
  else if (axis == "activation") cfg.axis = SweepAxis::Activation;
  else throw UsageError("sweep: unknown axis '" + axis + "'");

  cfg.values = ctx.doc.get_numbers_or("sweep", "values", {});
  std::sort(cfg.values.begin(), cfg.values.end());
  cfg.alpha = ctx.doc.get_number_or("sweep", "alpha", 0.01);
  cfg.beta = ctx.doc.get_number_or("sweep", "beta", 0.01);
  cfg.k = ctx.doc.get_integer_or("sweep", "k", 64);
  cfg.n_repeats = ctx.doc.get_integer_or("sweep", "repeats", 10);
  cfg.inner = read_inner(ctx.doc);
  cfg.seed = ctx.seed;

  SweepTaskSet task_set;
  if (setup.kind == "mlp") {
    // Matched students: same data and deltas, only the activation differs.
    task_set.tasks.emplace_back("relu", Task(0, *setup.relu_twin));
    task_set.tasks.emplace_back("softplus", Task(1, *setup.softplus_twin));
    MlpTask sampler_model = *setup.softplus_twin;
    std::uint64_t seed = ctx.seed;
    task_set.phi_sampler = [sampler_model, seed](std::uint64_t r) {
      return sampler_model.init_params(splitmix64(seed) + r);
    };
  } else if (setup.kind == "quadratic" || setup.kind == "linear") {
    require(!setup.tasks.empty(), "sweep: need at least one task");
    task_set.tasks.emplace_back(setup.kind, setup.tasks[0]);
    if (setup.kind == "quadratic") task_set.hessian_norm = setup.hessian_norm;
    Index dim = setup.dim;
    std::uint64_t seed = ctx.seed;
    task_set.phi_sampler = [dim, seed](std::uint64_t r) {
      return Rng(splitmix64(seed) + r).stream(RngPurpose::ProbePoint).gaussian(dim);
    };
  } else {
    throw UsageError("error-sweep requires tasks.kind in {mlp, quadratic, linear}");
  }

  ErrorSweepResult result = sweep(cfg, task_set, ctx.threads);

  CsvWriter csv(ctx.out_dir / "error_sweep.csv",
                {"axis", "alpha", "beta", "k", "label", "mean_log10_eps", "ci_half_width",
                 "n_repeats", "bound"});
  for (const SweepRow& row : result.rows) {
    csv.write_row({axis, format_double(row.alpha), format_double(row.beta), fmt_long(row.k),
                   row.label, format_double(row.mean_log10_eps),
                   format_double(row.ci_half_width), fmt_long(row.n_repeats),
                   row.bound ? format_double(*row.bound) : ""});
  }
  csv.close();

  write_manifest(ctx, "error-sweep",
                 {{"rows", result.rows.size()},
                  {"measurements", result.rows.size() * static_cast<std::size_t>(cfg.n_repeats)}},
                 {"error_sweep.csv"});
  return 0;
}

int run_landscape(const RunContext& ctx) {
  TaskSetup setup = read_tasks(ctx.doc, ctx.seed);
  require(setup.kind == "analytic2d", "landscape requires tasks.kind = analytic2d");

  GridSpec grid;
  grid.x_min = ctx.doc.get_number_or("landscape", "x_min", -10.0);
  grid.x_max = ctx.doc.get_number_or("landscape", "x_max", 20.0);
  grid.y_min = ctx.doc.get_number_or("landscape", "y_min", -10.0);
  grid.y_max = ctx.doc.get_number_or("landscape", "y_max", 20.0);
  grid.nx = ctx.doc.get_integer_or("landscape", "nx", 9);
  grid.ny = ctx.doc.get_integer_or("landscape", "ny", 9);
  grid.validate();
  double threshold = ctx.doc.get_number_or("landscape", "cluster_threshold", 0.5);
  require(threshold > 0.0, "landscape: cluster_threshold must be > 0");

  MetaConfig cfg = read_meta(ctx.doc, setup, ctx.seed, 1);
  cfg.K = ctx.doc.get_integer_or("landscape", "K", 5);
  cfg.M = ctx.doc.get_integer_or("landscape", "M", 100);
  std::string variant = ctx.doc.get_string_or("landscape", "variant", "baseline");
  if (variant == "baseline") cfg.variant = TrainVariant::Baseline;
  else if (variant == "continual_shifting") cfg.variant = TrainVariant::ContinualShifting;
  else if (variant == "ours_accurate") cfg.variant = TrainVariant::OursAccurate;
  else throw UsageError("landscape: unknown variant '" + variant + "'");

  const long n_starts = grid.cells();
  std::vector<Vector> finals(static_cast<std::size_t>(n_starts));
  std::vector<long> updates(static_cast<std::size_t>(n_starts), 0);
  std::vector<long> inner_steps(static_cast<std::size_t>(n_starts), 0);
  parallel_for(static_cast<std::size_t>(n_starts), ctx.threads, [&](std::size_t cell) {
    long iy = static_cast<long>(cell) / grid.nx;
    long ix = static_cast<long>(cell) % grid.nx;
    MetaTrainRun run = train(cfg, setup.tasks, Vector(grid.point(ix, iy)));
    finals[cell] = run.final_phi();
    updates[cell] = run.meta_update_counter;
    inner_steps[cell] = run.inner_step_counter;
  });
  long total_inner = std::accumulate(inner_steps.begin(), inner_steps.end(), 0L);

  // Single-linkage clustering of endpoints; attractor ids in order of first
  // appearance (row-major), so the labeling is deterministic.
  std::vector<long> parent(static_cast<std::size_t>(n_starts));
  std::iota(parent.begin(), parent.end(), 0L);
  std::function<long(long)> find = [&](long x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (long i = 0; i < n_starts; ++i) {
    for (long j = i + 1; j < n_starts; ++j) {
      if ((finals[static_cast<std::size_t>(i)] - finals[static_cast<std::size_t>(j)]).norm() <=
          threshold) {
        parent[static_cast<std::size_t>(find(j))] = find(i);
      }
    }
  }
  std::map<long, long> attractor_ids;
  std::vector<long> labels(static_cast<std::size_t>(n_starts));
  for (long i = 0; i < n_starts; ++i) {
    long root = find(i);
    auto [it, inserted] = attractor_ids.emplace(root, static_cast<long>(attractor_ids.size()));
    labels[static_cast<std::size_t>(i)] = it->second;
  }

  CsvWriter csv(ctx.out_dir / "landscape.csv",
                {"start_x", "start_y", "final_phi_0", "final_phi_1", "meta_updates",
                 "attractor_id"});
  for (long iy = 0; iy < grid.ny; ++iy) {
    for (long ix = 0; ix < grid.nx; ++ix) {
      std::size_t cell = static_cast<std::size_t>(iy * grid.nx + ix);
      Eigen::Vector2d p = grid.point(ix, iy);
      csv.write_row({format_double(p.x()), format_double(p.y()),
                     format_double(finals[cell][0]), format_double(finals[cell][1]),
                     fmt_long(updates[cell]), fmt_long(labels[cell])});
    }
  }
  csv.close();

  write_manifest(ctx, "landscape",
                 {{"starts", n_starts},
                  {"attractors", attractor_ids.size()},
                  {"inner_steps", total_inner}},
                 {"landscape.csv"});
  return 0;
}

int dispatch(int (*fn)(const RunContext&), const std::filesystem::path& config_path,
             const GlobalFlags& flags) {
  try {
    RunContext ctx = load_context(config_path, flags);
    return fn(ctx);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int cmd_train(const std::filesystem::path& config_path, const GlobalFlags& flags) {
  return dispatch(run_train, config_path, flags);
}
int cmd_quality_map(const std::filesystem::path& config_path, const GlobalFlags& flags) {
  return dispatch(run_quality_map, config_path, flags);
}
int cmd_error_sweep(const std::filesystem::path& config_path, const GlobalFlags& flags) {
  return dispatch(run_error_sweep, config_path, flags);
}
int cmd_landscape(const std::filesystem::path& config_path, const GlobalFlags& flags) {
  return dispatch(run_landscape, config_path, flags);
}

void print_config_reference() {
  std::cout << R"(Configuration reference. Format: [section] with key = value lines;
values are numbers, booleans (true/false), strings (bare or "quoted"),
or lists ([1, 2, 3]). '#' starts a comment. Unknown keys are rejected.

[run]
  seed = 0                  # master seed; --seed flag shadows it
  out = out                 # output directory; --out flag shadows it
  threads = 1               # worker threads; --threads flag shadows it

[tasks]
  kind = analytic2d         # analytic2d | linear | quadratic | mlp
  n_tasks = 8
  # analytic2d:
  circle_center = [5.0, 5.0]
  circle_radius = 4.0
  # linear / quadratic:
  dim = 8
  hessian_norm = 1.0        # quadratic only: spectral norm of H
  # mlp:
  layer_sizes = [8, 32, 32, 1]
  activation = softplus     # relu | softplus
  batch_size = 64
  dataset_size = 4096

[inner]
  rule = sgd                # sgd | sgd_momentum | sgd_weight_decay |
                            # sgd_momentum_weight_decay | adam
  alpha = 0.01
  mu = 0.0                  # momentum rules only
  lambda = 0.0              # weight-decay rules only
  nesterov = false
  grad_clip = 0.0           # L2 gradient cap; 0 disables
  adam_beta1 = 0.9
  adam_beta2 = 0.999
  adam_eps = 1e-8
  decay_every = 0           # step-decay hook; 0 disables
  decay_factor = 1.0

[meta]                      # train command
  variant = continual_shifting  # baseline | continual_shifting |
                                # ours_accurate | no_shifting | random_shifting
  meta_grad = reptile       # reptile | fomaml
  beta = 0.1
  K = 100
  M = 1
  phi0 = [-5.0, 5.0]        # explicit start (analytic2d)
  phi0_seed = 0             # seeded start (other kinds); defaults to seed
  preserve_opt_state = false
  record_theta = false

[map]                       # quality-map command (analytic2d only)
  x_min = -10.0
  x_max = 20.0
  y_min = -10.0
  y_max = 20.0
  nx = 151
  ny = 151
  eval_steps = 100

[sweep]                     # error-sweep command (mlp, quadratic, linear)
  axis = k                  # alpha | beta | k | activation
  values = [8, 16, 32, 64, 128, 256]
  alpha = 0.01              # defaults for the axes not swept
  beta = 0.01
  k = 64
  repeats = 10

[landscape]                 # landscape command (analytic2d only)
  x_min = -10.0
  x_max = 20.0
  y_min = -10.0
  y_max = 20.0
  nx = 9
  ny = 9
  K = 5
  M = 100
  variant = baseline        # baseline | continual_shifting | ours_accurate
  cluster_threshold = 0.5

Outputs: each command writes its CSV plus manifest.json into the output
directory. CSV floats carry 17 significant digits; with a fixed config and
seed the CSVs are byte-identical across reruns and thread counts. In
manifest.json only the "execution" block (threads, wall time) varies.
Error-sweep rows floor ||eps|| at 1e-15 before taking log10.

Exit codes: 0 success, 2 config/usage error (with line and column for parse
errors), 3 numeric error (non-finite values, with context).
)";
}

}  // namespace ctshift::cli
