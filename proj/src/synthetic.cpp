#include "ctshift/synthetic.hpp"

#include "ctshift/parallel.hpp"
#include "ctshift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ctshift {

namespace {

inline double residual1(double x, double y) { return x * x - 10.0 * x + y + 9.0; }
inline double residual2(double x, double y) { return x + y * y - 10.0 * y + 13.0; }

Eigen::Matrix2d rotation(double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

// Newton on the residual system from a fixed starting point.
Eigen::Vector2d newton_root(Eigen::Vector2d p) {
  for (int it = 0; it < 100; ++it) {
    double r1 = residual1(p.x(), p.y());
    double r2 = residual2(p.x(), p.y());
    Eigen::Matrix2d jac;
    jac << 2.0 * p.x() - 10.0, 1.0, 1.0, 2.0 * p.y() - 10.0;
    Eigen::Vector2d step = jac.partialPivLu().solve(Eigen::Vector2d(r1, r2));
    p -= step;
    if (step.norm() < 1e-15) break;
  }
  return p;
}

}  // namespace

double template_value(double x, double y) {
  double r1 = residual1(x, y);
  double r2 = residual2(x, y);
  return (r1 * r1 + r2 * r2) / 3.0;
}

Eigen::Vector2d template_gradient(double x, double y) {
  double r1 = residual1(x, y);
  double r2 = residual2(x, y);
  double gx = (2.0 * r1 * (2.0 * x - 10.0) + 2.0 * r2) / 3.0;
  double gy = (2.0 * r1 + 2.0 * r2 * (2.0 * y - 10.0)) / 3.0;
  return {gx, gy};
}

const std::array<Eigen::Vector2d, 4>& template_minima() {
  static const std::array<Eigen::Vector2d, 4> minima = [] {
    // Coarse-grid scan over [0,10]^2, Newton from the best cells, dedupe.
    std::vector<Eigen::Vector2d> roots;
    for (double x0 = 0.0; x0 <= 10.0; x0 += 0.5) {
      for (double y0 = 0.0; y0 <= 10.0; y0 += 0.5) {
        Eigen::Vector2d root = newton_root({x0, y0});
        if (!root.allFinite()) continue;  // diverged Newton run
        if (template_value(root.x(), root.y()) > 1e-18) continue;
        bool fresh = std::none_of(roots.begin(), roots.end(), [&](const Eigen::Vector2d& r) {
          return (r - root).norm() < 1e-6;
        });
        if (fresh) roots.push_back(root);
      }
    }
    if (roots.size() != 4) throw NumericError("template_minima: expected 4 roots");
    std::sort(roots.begin(), roots.end(),
              [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() < b.x(); });
    return std::array<Eigen::Vector2d, 4>{roots[0], roots[1], roots[2], roots[3]};
  }();
  return minima;
}

Eigen::Vector2d template_anchor() {
  static const Eigen::Vector2d anchor = [] {
    const auto& m = template_minima();
    return Eigen::Vector2d((m[0] + m[1] + m[2] + m[3]) / 4.0);
  }();
  return anchor;
}

double Analytic2DTask::loss(const Vector& p, long) const {
  require(p.size() == 2, "Analytic2DTask: parameter dimension must be 2");
  Eigen::Vector2d q = rotation(-angle) * (Eigen::Vector2d(p[0], p[1]) - center) + template_anchor();
  return template_value(q.x(), q.y());
}

Vector Analytic2DTask::grad(const Vector& p, long) const {
  require(p.size() == 2, "Analytic2DTask: parameter dimension must be 2");
  Eigen::Vector2d q = rotation(-angle) * (Eigen::Vector2d(p[0], p[1]) - center) + template_anchor();
  // d/dp f(A(p-center)+anchor) = A^T grad_f, with A = R(-angle).
  Eigen::Vector2d g = rotation(-angle).transpose() * template_gradient(q.x(), q.y());
  return Vector(g);
}

void TaskFamilyConfig::validate() const {
  require(n_tasks >= 1, "task family: n_tasks must be >= 1");
  require(circle_radius > 0.0, "task family: circle_radius must be > 0");
}

std::vector<Analytic2DTask> make_task_family(const TaskFamilyConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::vector<Analytic2DTask> family;
  family.reserve(static_cast<std::size_t>(cfg.n_tasks));
  for (long i = 0; i < cfg.n_tasks; ++i) {
    double spacing = 2.0 * std::numbers::pi * static_cast<double>(i) /
                     static_cast<double>(cfg.n_tasks);
    Eigen::Vector2d center = cfg.circle_center + cfg.circle_radius *
                                                     Eigen::Vector2d(std::cos(spacing),
                                                                     std::sin(spacing));
    RngStream stream = rng.stream(RngPurpose::TaskRotation, static_cast<std::uint64_t>(i));
    double angle = stream.uniform(0.0, 2.0 * std::numbers::pi);
    family.push_back({center, angle});
  }
  return family;
}

std::vector<Task> make_tasks(const TaskFamilyConfig& cfg) {
  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(cfg.n_tasks));
  int id = 0;
  for (const Analytic2DTask& task : make_task_family(cfg)) tasks.emplace_back(id++, task);
  return tasks;
}

void GridSpec::validate() const {
  require(nx >= 1 && ny >= 1, "grid: resolution must be >= 1");
  require(x_max >= x_min && y_max >= y_min, "grid: bounds must be ordered");
}

Eigen::Vector2d GridSpec::point(long ix, long iy) const {
  double x = (nx == 1) ? x_min : x_min + (x_max - x_min) * static_cast<double>(ix) /
                                            static_cast<double>(nx - 1);
  double y = (ny == 1) ? y_min : y_min + (y_max - y_min) * static_cast<double>(iy) /
                                            static_cast<double>(ny - 1);
  return {x, y};
}

double initialization_quality(const Vector& phi, const std::vector<Task>& tasks,
                              const InnerOptConfig& inner, long n_eval_steps) {
  require(n_eval_steps >= 1, "initialization_quality: n_eval_steps must be >= 1");
  require(!tasks.empty(), "initialization_quality: task list must be non-empty");
  double sum = 0.0;
  for (const Task& task : tasks) {
    InnerOptState s = init_state(inner, phi);
    for (long i = 0; i < n_eval_steps; ++i) step(s, inner, task);
    sum += task.loss(s.theta, s.step_count);
  }
  return sum / static_cast<double>(tasks.size());
}

QualityMap quality_map(const std::vector<Task>& tasks, const GridSpec& grid,
                       const InnerOptConfig& inner, long n_eval_steps, int threads) {
  grid.validate();
  QualityMap map;
  map.grid = grid;
  map.values.assign(static_cast<std::size_t>(grid.cells()), 0.0);
  parallel_for(static_cast<std::size_t>(grid.cells()), threads, [&](std::size_t cell) {
    long iy = static_cast<long>(cell) / grid.nx;
    long ix = static_cast<long>(cell) % grid.nx;
    Eigen::Vector2d p = grid.point(ix, iy);
    map.values[cell] = initialization_quality(Vector(p), tasks, inner, n_eval_steps);
  });
  return map;
}

}  // namespace ctshift
