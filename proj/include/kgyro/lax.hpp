#pragma once

#include <Eigen/Dense>
#include <array>

#include "kgyro/params.hpp"
#include "kgyro/phase.hpp"

namespace kgyro {

using Mat4c = Eigen::Matrix4cd;

struct LaxPair {
  Mat4c L, M;
};

/// The Lax pair at spectral parameter kappa.  Throws ZeroKappa for kappa = 0.
LaxPair lax_matrices(const ComplexState& c, const Params& params,
                     Complex kappa);

/// d/d(it) of L along the flow.  L is linear in the coordinates, so the
/// derivative is L rebuilt from the field values with the constant (lambda
/// and kappa) terms removed.
Mat4c lax_derivative(const ComplexState& c, const Params& params,
                     Complex kappa);

/// Max-abs entry of L' - [L, M].
double lax_residual(const ComplexState& c, const Params& params,
                    Complex kappa);

/// Coefficients of det(mu I - A) in descending powers (mu^4 ... mu^0),
/// computed by the Faddeev-LeVerrier recursion.
std::array<Complex, 5> char_poly(const Mat4c& A);

/// The spectral-curve coefficients predicted from the integral values at
/// s = 2 kappa^2:  mu^4 + c2 mu^2 + c0 with
///   c2 = 4 [p^2/s - (2h + lambda^2) + 2s],
///   c0 = 4 [r^4/s^2 + (2/s)(4g - 2 p^2 h - p^2 lambda^2)
///            + 4(k + 2 lambda^2 h) - 8 lambda^2 s].
std::array<double, 5> spectral_coeffs(const IntegralTriple& I, double kappa,
                                      const Params& params);

/// Max-abs mismatch between char_poly(L) and the predicted curve at the
/// integral values of c.
double spectral_residual(const ComplexState& c, const Params& params,
                         Complex kappa);

}  // namespace kgyro
