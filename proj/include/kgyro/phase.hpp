#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "kgyro/params.hpp"

namespace kgyro {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using CVec9 = Eigen::Matrix<Complex, 9, 1>;

/// Real phase point (omega, alpha, beta) in R^9.
struct PhaseState {
  Vec3 omega = Vec3::Zero();
  Vec3 alpha = Vec3::Zero();
  Vec3 beta = Vec3::Zero();

  Vec9 as_vector() const;
  static PhaseState from_vector(const Vec9& v);
};

/// The nine complex coordinates (w1,w2,w3,x1,x2,y1,y2,z1,z2).
struct ComplexState {
  Complex w1{}, w2{}, w3{};
  Complex x1{}, x2{};
  Complex y1{}, y2{};
  Complex z1{}, z2{};

  CVec9 as_vector() const;
  static ComplexState from_vector(const CVec9& v);

  /// Max deviation from the image-of-real criterion
  /// (x2=conj x1, y2=conj y1, z2=conj z1, w2=conj w1, w3 real).
  double realness_defect() const;
};

struct IntegralTriple {
  double g = 0.0, k = 0.0, h = 0.0;
};

ComplexState complexify(const PhaseState& s);

/// Inverse of complexify.  Throws NotRealImage if the realness defect
/// exceeds tol.
PhaseState realify(const ComplexState& c, double tol = 1e-9);

/// (|alpha|^2 - a^2, |beta|^2 - b^2, alpha . beta)
Vec3 casimir_residuals(const PhaseState& s, const Params& params);

bool on_orbit(const PhaseState& s, const Params& params, double tol = 1e-8);

/// First integrals from the real formulas.  Throws OffOrbit when the Casimir
/// residuals exceed orbit_tol.
IntegralTriple integrals(const PhaseState& s, const Params& params,
                         double orbit_tol = 1e-8);

/// Same integrals evaluated without the orbit check (used by oracles).
IntegralTriple integrals_unchecked(const PhaseState& s, const Params& params);

/// H, K, G from the complexified formulas; agrees with the real ones on the
/// orbit, differs off it.
std::array<Complex, 3> integrals_complex(const ComplexState& c,
                                         const Params& params);

/// Residuals of the complexified orbit constraints:
/// (z1^2+x1 y2-r^2, z2^2+x2 y1-r^2, x1 x2+y1 y2+2 z1 z2-2 p^2).
std::array<Complex, 3> orbit_constraints(const ComplexState& c,
                                         const Params& params);

/// Analytic gradients of (H, K, G) of integrals_complex with respect to the
/// nine complex coordinates, in the order (w1,w2,w3,x1,x2,y1,y2,z1,z2).
struct ComplexGradients {
  CVec9 dH, dK, dG;
};
ComplexGradients integral_gradients(const ComplexState& c, const Params& params);

}  // namespace kgyro
