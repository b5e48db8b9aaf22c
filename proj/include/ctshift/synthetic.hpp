#pragma once

#include "ctshift/inner_opt.hpp"
#include "ctshift/task.hpp"
#include "ctshift/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ctshift {

// Template landscape f(x,y) = ((x^2-10x+y+9)^2 + (x+y^2-10y+13)^2)/3.
// Nonnegative, with four global minima where both residuals vanish.
double template_value(double x, double y);
Eigen::Vector2d template_gradient(double x, double y);

/// The four zeros of the residual system, Newton-refined, sorted by x.
const std::array<Eigen::Vector2d, 4>& template_minima();

/// Centroid of the four minima; the point that make_tasks maps onto each
/// task center.
Eigen::Vector2d template_anchor();

// One task: the template translated so its anchor sits at `center`, then
// rotated by `angle` about the center.
struct Analytic2DTask {
  Eigen::Vector2d center;
  double angle = 0.0;

  double loss(const Vector& p, long) const;
  Vector grad(const Vector& p, long) const;
  Index dim() const { return 2; }
};

struct TaskFamilyConfig {
  long n_tasks = 8;
  Eigen::Vector2d circle_center{5.0, 5.0};
  double circle_radius = 4.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Task centers equally spaced on the circle (angle 2*pi*i/n from the x
// axis); rotation angles drawn uniformly from [0, 2pi) per task.
std::vector<Analytic2DTask> make_task_family(const TaskFamilyConfig& cfg);
std::vector<Task> make_tasks(const TaskFamilyConfig& cfg);

struct GridSpec {
  double x_min = -10.0, x_max = 20.0;
  double y_min = -10.0, y_max = 20.0;
  long nx = 151, ny = 151;

  void validate() const;
  long cells() const { return nx * ny; }
  // Row-major: flat index = iy*nx + ix; x varies fastest.
  Eigen::Vector2d point(long ix, long iy) const;
};

struct QualityMap {
  GridSpec grid;
  std::vector<double> values;  // row-major, grid.cells() entries
};

/// Task-average loss at the endpoint of an n_eval_steps unroll from phi.
double initialization_quality(const Vector& phi, const std::vector<Task>& tasks,
                              const InnerOptConfig& inner, long n_eval_steps);

/// initialization_quality over every grid point. Cells are independent.
QualityMap quality_map(const std::vector<Task>& tasks, const GridSpec& grid,
                       const InnerOptConfig& inner, long n_eval_steps, int threads = 1);

}  // namespace ctshift
