#include "ctshift/task.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ctshift {

double Task::loss(const Vector& theta, long step) const {
  double v = impl_->loss(theta, step);
  if (!std::isfinite(v)) {
    throw NumericError("task " + std::to_string(id_) + ": non-finite loss at step " +
                       std::to_string(step));
  }
  return v;
}

Vector Task::grad(const Vector& theta, long step) const {
  Vector g = impl_->grad(theta, step);
  grad_evals_->fetch_add(1, std::memory_order_relaxed);
  check_finite(g, "task " + std::to_string(id_) + ": gradient at step " + std::to_string(step));
  return g;
}

Vector LinearTask::grad(const Vector&, long) const { return gradient; }

QuadraticTask::QuadraticTask(Matrix h, Vector c) : hessian(std::move(h)), center(std::move(c)) {
  require(hessian.rows() == hessian.cols(), "QuadraticTask: H must be square");
  require(hessian.rows() == center.size(), "QuadraticTask: H and center dimensions differ");
  require(hessian.isApprox(hessian.transpose()), "QuadraticTask: H must be symmetric");
}

double QuadraticTask::loss(const Vector& theta, long) const {
  Vector d = theta - center;
  return 0.5 * d.dot(hessian * d);
}

Vector QuadraticTask::grad(const Vector& theta, long) const { return hessian * (theta - center); }

double QuadraticTask::hessian_norm() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hessian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Vector finite_diff_grad(const Task& task, const Vector& theta, double h, long step) {
  require(h > 0.0, "finite_diff_grad: h must be > 0");
  Vector g(theta.size());
  Vector probe = theta;
  for (Index i = 0; i < theta.size(); ++i) {
    double hi = h * std::max(1.0, std::abs(theta[i]));
    probe[i] = theta[i] + hi;
    double up = task.loss(probe, step);
    probe[i] = theta[i] - hi;
    double down = task.loss(probe, step);
    probe[i] = theta[i];
    g[i] = (up - down) / (2.0 * hi);
  }
  return g;
}

}  // namespace ctshift
