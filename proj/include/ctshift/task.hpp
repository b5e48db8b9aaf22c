#pragma once

#include "ctshift/types.hpp"

#include <atomic>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ctshift {

// A task is a differentiable loss. loss/grad are pure functions of
// (parameters, step index); the step index selects the minibatch for
// stochastic tasks and is ignored by deterministic ones. grad() is the
// exact analytic gradient of loss() at the same step index.
class Task {
 public:
  template <class Impl>
  Task(int id, Impl impl)
      : id_(id),
        impl_(std::make_shared<const Model<Impl>>(std::move(impl))),
        grad_evals_(std::make_shared<std::atomic<long>>(0)) {}

  int id() const { return id_; }
  Index dim() const { return impl_->dim(); }

  double loss(const Vector& theta, long step = 0) const;
  Vector grad(const Vector& theta, long step = 0) const;

  /// Total grad() calls through this task (shared across copies).
  long grad_evals() const { return grad_evals_->load(); }
  void reset_grad_evals() const { grad_evals_->store(0); }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual double loss(const Vector&, long step) const = 0;
    virtual Vector grad(const Vector&, long step) const = 0;
    virtual Index dim() const = 0;
  };

  template <class Impl>
  struct Model final : Concept {
    explicit Model(Impl impl) : impl(std::move(impl)) {}
    double loss(const Vector& theta, long step) const override { return impl.loss(theta, step); }
    Vector grad(const Vector& theta, long step) const override { return impl.grad(theta, step); }
    Index dim() const override { return impl.dim(); }
    Impl impl;
  };

  int id_;
  std::shared_ptr<const Concept> impl_;
  std::shared_ptr<std::atomic<long>> grad_evals_;
};

/// Loss g.theta + offset; the gradient is the constant g.
struct LinearTask {
  Vector gradient;
  double offset = 0.0;

  double loss(const Vector& theta, long) const { return gradient.dot(theta) + offset; }
  Vector grad(const Vector& theta, long) const;
  Index dim() const { return gradient.size(); }
};

/// Loss 0.5 (theta-c)^T H (theta-c) with symmetric PSD H; grad = H (theta-c).
struct QuadraticTask {
  Matrix hessian;
  Vector center;

  QuadraticTask(Matrix h, Vector c);

  double loss(const Vector& theta, long) const;
  Vector grad(const Vector& theta, long) const;
  Index dim() const { return hessian.rows(); }

  /// Spectral norm of H (largest eigenvalue; H is PSD).
  double hessian_norm() const;
};

// Central differences, step h*max(1,|theta_i|) per coordinate; h balances
// truncation against cancellation at 64-bit.
Vector finite_diff_grad(const Task& task, const Vector& theta, double h = 1e-6, long step = 0);

}  // namespace ctshift
