#pragma once

#include <cmath>

#include "kgyro/errors.hpp"

namespace kgyro {

/// Canonical problem parameters: field intensities a > b > 0 and the axial
/// gyrostatic momentum lambda.  p, r are the derived combinations used
/// throughout the complexified equations.
class Params {
 public:
  Params(double a, double b, double lambda) : a_(a), b_(b), lambda_(lambda) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("Params: require a > 0 and b > 0");
    if (!(a > b)) throw Error("Params: require a > b (irreducible case)");
    p_ = std::sqrt(a * a + b * b);
    r_ = std::sqrt(a * a - b * b);
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double lambda() const { return lambda_; }
  double p() const { return p_; }
  double r() const { return r_; }

  double p2() const { return p_ * p_; }
  double r2() const { return r_ * r_; }
  double r4() const { return r2() * r2(); }
  /// p^4 - r^4 = 4 a^2 b^2
  double p4_minus_r4() const { return 4.0 * a_ * a_ * b_ * b_; }

 private:
  double a_, b_, lambda_;
  double p_, r_;
};

}  // namespace kgyro
