#pragma once

#include <functional>
#include <vector>

#include "kgyro/phase.hpp"

namespace kgyro {

/// Right-hand side of the canonical real equations of motion.
Vec9 field_real(const PhaseState& s, const Params& params);

/// Right-hand side of the complexified system (derivative with respect to it;
/// the real-time derivative of complexify(s) equals i * field_complex).
CVec9 field_complex(const ComplexState& c, const Params& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<IntegralTriple> drift;  // deviation from the t=0 integral values

  double max_drift() const;
  double max_casimir_residual(const Params& params) const;
};

struct IntegrateOptions {
  double tol = 1e-10;        // local error tolerance (abs and rel)
  double h_init = 1e-3;
  double h_min = 1e-12;
  double h_max = 1.0;
  bool project_orbit = false;  // optional Casimir projection for long runs
  std::size_t max_steps = 50'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of the canonical equations.
/// Throws OffOrbit for an off-orbit start and StepFailure when the step
/// controller stalls.
Trajectory integrate(const PhaseState& s0, double t_end, const Params& params,
                     const IntegrateOptions& opt = {});

/// Generic adaptive RK step loop used by the oracles (scalar pendulum, etc).
Eigen::VectorXd integrate_ode(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    Eigen::VectorXd y0, double t0, double t1, double tol);

using ScalarField = std::function<double(const PhaseState&)>;
using ComplexField = std::function<Complex(const PhaseState&)>;

struct BracketOptions {
  double h_fd_scale = 1e-6;  // central-difference step: h = scale*(1+|coord|)
};

/// Numerical Lie-Poisson bracket {f,g} assembled from the structure constants
/// with M = I omega + lambda e3 as the momentum coordinates.
double bracket_oracle(const ScalarField& f, const ScalarField& g,
                      const PhaseState& s, const Params& params,
                      const BracketOptions& opt = {});

/// Same bracket extended bilinearly to complex-valued functions.
Complex bracket_oracle_complex(const ComplexField& f, const ComplexField& g,
                               const PhaseState& s, const Params& params,
                               const BracketOptions& opt = {});

}  // namespace kgyro
