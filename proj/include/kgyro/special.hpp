#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kgyro/params.hpp"
#include "kgyro/phase.hpp"

namespace kgyro {

/// The four equilibria alpha = +-a e1, beta = +-b e2, omega = 0, ordered
/// (+,+), (+,-), (-,+), (-,-).
std::array<PhaseState, 4> equilibria(const Params& params);

enum class PendulumFamily { P1, P2, P3 };

/// A point of the pendulum family at angle phi, rate phi_dot.  `positive`
/// selects the sign branch of the family.  Families P1/P2 are admissible only
/// for lambda = 0.
PhaseState pendulum_state(PendulumFamily family, double phi, double phi_dot,
                          bool positive, const Params& params);

/// Root of a polynomial with a residual-based multiplicity flag.
struct PolyRoot {
  double value = 0.0;
  int multiplicity = 1;
};

/// Coefficients of the degree-5 constraint polynomial in u (descending order).
std::array<double, 6> rank1_quintic_coeffs(double sigma, const Params& params);

/// All real roots of the quintic for the given sigma; companion-matrix
/// eigenvalues polished by Newton.  Empty list when no real root exists.
std::vector<PolyRoot> rank1_solve_u(double sigma, const Params& params);

struct Rank1Data {
  double sigma = 0.0;
  double u = 0.0;
  double w = 0.0;
  Complex q{};
};

/// Q(w) of the branch equation q^4 - 2 Q q^2 + 1 = 0.
double rank1_Q(double w, double sigma, double u, const Params& params);

/// The turning-point quadratics (P_+(w), P_-(w)).
std::pair<double, double> rank1_polys(const Rank1Data& d, const Params& params,
                                      double w);

/// w-intervals (within [w_min, w_max]) on which the family produces real
/// motions: w > 0, P_+ P_- <= 0 and |Q(w)| <= 1.
std::vector<std::pair<double, double>> rank1_windows(double sigma, double u,
                                                     const Params& params,
                                                     double w_min = 1e-6,
                                                     double w_max = 50.0,
                                                     int scan_points = 8000);

/// Completes (sigma, u, w) with the branch value q.  Both roots q^2 of the
/// quadratic are tried; the branch with the smaller orbit-constraint residual
/// wins, ties broken by |q| <= 1.  Throws BranchFailure when neither root
/// satisfies the branch equation.
Rank1Data rank1_data(double sigma, double u, double w, const Params& params,
                     double tol = 1e-8);

/// The critical point of rank 1 determined by d.
ComplexState rank1_point(const Rank1Data& d, const Params& params);

/// Scans sigma over a fixed two-sided logarithmic grid, solves the quintic
/// for each sigma and returns up to `count` admissible Rank1Data whose
/// real-motion window is nonempty (w at the window midpoint) and whose
/// constructed point is a real image on the orbit.
std::vector<Rank1Data> rank1_admissible(const Params& params, int count);

/// Right-hand side of (dw/dt)^2 for the rank-1 family:
/// -(lambda^2 / 4 sigma^2) P_+(w) P_-(w).
double rank1_wdot_squared(const Rank1Data& d, const Params& params, double w);

}  // namespace kgyro
