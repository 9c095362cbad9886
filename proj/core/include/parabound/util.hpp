#ifndef PARABOUND_UTIL_HPP
#define PARABOUND_UTIL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

namespace parabound {

using Point = std::array<double, 3>;

/// Kahan compensated accumulator. Bound formulas and quadrature sums mix
/// terms spanning many orders of magnitude; plain summation loses digits.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double sqr(double x) { return x * x; }

/// pow with the 0^0 = 1 convention used throughout the bound formulas
/// (a vanishing datum with vanishing exponent contributes a neutral factor).
inline double pow0(double base, double expo) {
  if (base == 0.0 && expo == 0.0) return 1.0;
  return std::pow(base, expo);
}

/// exp that saturates to +inf instead of raising FE_OVERFLOW surprises;
/// callers flag the overflow in reports.
inline double exp_guarded(double x) {
  if (x > 709.0) return std::numeric_limits<double>::infinity();
  return std::exp(x);
}

inline bool nearly_equal(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Deterministic 64-bit mix used to derive per-case seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace parabound

#endif
