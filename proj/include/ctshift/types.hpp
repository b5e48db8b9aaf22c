#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ctshift {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Caller misuse: bad dimensions, invalid configuration, malformed inputs.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Computation produced NaN/Inf; the message carries where.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

/// Throws NumericError naming the first non-finite entry.
void check_finite(const Vector& v, const std::string& context);

void check_same_dim(const Vector& a, const Vector& b, const std::string& context);

/// a*x + y elementwise. Dimensions must match; the result must be finite.
Vector axpy(double a, const Vector& x, const Vector& y);

/// Euclidean norm.
double l2_norm(const Vector& x);

}  // namespace ctshift
