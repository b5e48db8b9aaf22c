#include "ctshift/types.hpp"

#include <cmath>

namespace ctshift {

void check_finite(const Vector& v, const std::string& context) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw NumericError(context + ": non-finite value at index " + std::to_string(i));
    }
  }
}

void check_same_dim(const Vector& a, const Vector& b, const std::string& context) {
  if (a.size() != b.size()) {
    throw UsageError(context + ": dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
}

Vector axpy(double a, const Vector& x, const Vector& y) {
  check_same_dim(x, y, "axpy");
  require(std::isfinite(a), "axpy: scale factor must be finite");
  Vector r = a * x + y;
  check_finite(r, "axpy");
  return r;
}

double l2_norm(const Vector& x) {
  check_finite(x, "l2_norm");
  return x.norm();
}

}  // namespace ctshift
