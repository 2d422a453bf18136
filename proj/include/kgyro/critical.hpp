#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "kgyro/params.hpp"
#include "kgyro/phase.hpp"

namespace kgyro {

using Mat63c = Eigen::Matrix<Complex, 6, 3>;

/// The seven coordinates that remain free once (y1, y2) are eliminated by a
/// closure relation.
struct SevenCoords {
  Complex w1{}, w2{}, w3{};
  Complex x1{}, x2{};
  Complex z1{}, z2{};
};

/// Residuals of the defining equations of the three critical strata.
std::array<Complex, 4> residual_L(const ComplexState& c);
std::array<Complex, 2> residual_N(const ComplexState& c, const Params& params);
std::array<Complex, 2> residual_O(const ComplexState& c, const Params& params);

/// Point of the first stratum: planar fields rotated by phi about e3 and a
/// vertical angular velocity.  `positive` selects the orientation of beta.
PhaseState stratum_L_point(double phi, double omega3, bool positive,
                           const Params& params);

/// Solve the defining equations of the second stratum for (y1, y2) given the
/// remaining seven coordinates.  Throws DegenerateDenominator when the
/// eliminant coefficient vanishes.
ComplexState close_N(const SevenCoords& s, const Params& params);

/// Same for the third stratum (solves R1 = R2 = 0 for y1, y2).
ComplexState close_O(const SevenCoords& s, const Params& params);

/// Random real-image point of the second/third stratum: a conjugate-symmetric
/// seed is closed by close_N/close_O and Newton-projected onto the orbit.
/// Deterministic for a fixed seed.  Throws BranchFailure when no seed
/// converges within the attempt budget.
ComplexState sample_N(const Params& params, std::uint64_t seed,
                      int max_attempts = 200);
ComplexState sample_O(const Params& params, std::uint64_t seed,
                      int max_attempts = 200);

/// Partial integrals of the third stratum and its companion.
Complex U1(const ComplexState& c, const Params& params);
/// Analytic gradient of U1 in the nine complex coordinates.
CVec9 U1_gradient(const ComplexState& c, const Params& params);
/// U2 = w1 w2 dU1/dt evaluated along the flow.
Complex U2(const ComplexState& c, const Params& params);

/// The stratum parameter s on the second stratum.
Complex S_N(const ComplexState& c, const Params& params);
/// The stratum parameter s on the third stratum.
Complex S_O(const ComplexState& c, const Params& params);

/// T as a function of the state and s on each stratum.
Complex T_N(const ComplexState& c, const Params& params);
Complex T_O(const ComplexState& c, const Params& params);

struct STPair {
  Complex S{}, T{};
};

/// (S, T) from the generic linear elimination, valid on both strata away from
/// the degeneracy Delta = 0 (throws SingularDelta there).
STPair lagrange_ST(const ComplexState& c, const Params& params);

/// Closed-form value of the bracket {U1, U2} as a function of s and h.
Complex bracket_U_closed(const ComplexState& c, const Params& params);

/// Closed-form value of the bracket {F1, F2} up to a unit phase (the square
/// roots carry a branch ambiguity; compare |.| and the fourth power of the
/// phase against the numerical bracket).
Complex bracket_F_closed(const ComplexState& c, const Params& params);

/// 6x3 matrix of the tangent fields applied to (G, K, H); its rank is the
/// rank of the momentum map at the point.
Mat63c rank_matrix(const ComplexState& c, const Params& params);

/// Numerical rank of rank_matrix by SVD with a relative threshold.
int momentum_rank(const ComplexState& c, const Params& params,
                  double tol = 1e-7);

}  // namespace kgyro
