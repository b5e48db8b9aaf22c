#include "ctshift/meta_grad.hpp"

#include <algorithm>
#include <numeric>

namespace ctshift {

Vector meta_grad(MetaGradKind kind, const Vector& phi, const Vector& theta_k, const Task& task,
                 long k, FomamlLossIndex fomaml_index) {
  check_same_dim(phi, theta_k, "meta_grad");
  switch (kind) {
    case MetaGradKind::Reptile:
      return phi - theta_k;
    case MetaGradKind::Fomaml: {
      long batch = (fomaml_index == FomamlLossIndex::CurrentStep) ? std::max<long>(k - 1, 0) : k;
      return task.grad(theta_k, batch);
    }
  }
  throw UsageError("meta_grad: unknown kind");
}

Vector average_meta_grad(MetaGradKind kind, const Vector& phi, const std::vector<Vector>& thetas,
                         const std::vector<Task>& tasks, long k, FomamlLossIndex fomaml_index) {
  require(!tasks.empty(), "average_meta_grad: task list must be non-empty");
  require(thetas.size() == tasks.size(), "average_meta_grad: thetas/tasks size mismatch");

  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return tasks[a].id() < tasks[b].id(); });

  Vector sum = Vector::Zero(phi.size());
  for (std::size_t idx : order) {
    sum += meta_grad(kind, phi, thetas[idx], tasks[idx], k, fomaml_index);
  }
  return sum / static_cast<double>(tasks.size());
}

}  // namespace ctshift
