// Scalar primitives: lattice integer/fractional parts, signed power
// conventions, and the circular metric on a period interval.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracstable {

/// Raised when an evaluation lands exactly on an active logarithmic
/// singularity (u = 0 with a nonzero log coefficient).
struct singular_point_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct SplitParts {
  long long n;  // lattice index
  double r;     // remainder in [0, a)
};

/// Splits x as x = n*a + r with n integer and r in [0, a).
/// The pair is computed once so that int_part and frac_part are always
/// mutually consistent at lattice boundaries.
inline SplitParts split_mod(double x, double a) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(x))
    throw std::domain_error("split_mod: requires finite x and a > 0");
  double ratio = x / a;
  if (std::fabs(ratio) >= 4.6e18)
    throw std::domain_error("split_mod: |x/a| exceeds integer range");
  double nf = std::floor(ratio);
  double r = x - nf * a;
  while (r < 0.0) {
    nf -= 1.0;
    r = x - nf * a;
  }
  while (r >= a) {
    nf += 1.0;
    r = x - nf * a;
  }
  return {static_cast<long long>(nf), r};
}

/// max{n : n*a <= x}, floor semantics for negative x.
inline long long int_part(double x, double a) { return split_mod(x, a).n; }

/// x - a*int_part(x, a), always in [0, a).
inline double frac_part(double x, double a) { return split_mod(x, a).r; }

enum class Side { plus, minus };

/// u_+^kappa / u_-^kappa with the kappa = 0 indicator convention
/// (plus side open at 0, minus side closed) and the value 0 at u = 0
/// for kappa != 0.
inline double signed_power(double u, double kappa, Side side) {
  if (!std::isfinite(u)) throw std::domain_error("signed_power: non-finite u");
  if (kappa == 0.0) {
    if (side == Side::plus) return u > 0.0 ? 1.0 : 0.0;
    return u <= 0.0 ? 1.0 : 0.0;
  }
  if (side == Side::plus) return u > 0.0 ? std::pow(u, kappa) : 0.0;
  return u < 0.0 ? std::pow(-u, kappa) : 0.0;
}

/// b1^n for b1 in {-1, +1} and integer n.
inline double sign_pow(int b1, long long n) {
  if (b1 == 1) return 1.0;
  return (n % 2 == 0) ? 1.0 : -1.0;
}

/// Distance on [0, q) with endpoints identified.
inline double circular_distance(double x, double y, double q) {
  double d = std::fabs(x - y);
  d = std::fmod(d, q);
  return std::min(d, q - d);
}

/// Neumaier-compensated accumulator; summation order still matters, so
/// callers feed pieces in a deterministic order.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace fracstable
