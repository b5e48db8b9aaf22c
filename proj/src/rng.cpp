#include "ctshift/rng.hpp"

#include <cmath>
#include <numbers>

namespace ctshift {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double RngStream::normal() {
  // u1 in (0,1] so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector RngStream::gaussian(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Vector RngStream::unit_vector(Index n) {
  require(n >= 1, "unit_vector: dimension must be >= 1");
  Vector v = gaussian(n);
  double norm = v.norm();
  while (norm == 0.0) {
    v = gaussian(n);
    norm = v.norm();
  }
  return v / norm;
}

RngStream Rng::stream(RngPurpose purpose, std::uint64_t id, std::uint64_t subid) const {
  std::uint64_t s = splitmix64(seed_);
  s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
  s = splitmix64(s ^ id);
  s = splitmix64(s ^ subid);
  return RngStream(s);
}

}  // namespace ctshift
