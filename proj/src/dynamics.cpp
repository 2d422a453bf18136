#include "kgyro/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace kgyro {

Vec9 field_real(const PhaseState& s, const Params& params) {
  const double lam = params.lambda();
  const Vec3& om = s.omega;
  const Vec3& al = s.alpha;
  const Vec3& be = s.beta;
  Vec9 f;
  f[0] = 0.5 * (om[1] * (om[2] - lam) + be[2]);
  f[1] = 0.5 * (-om[0] * (om[2] - lam) - al[2]);
  f[2] = al[1] - be[0];
  f.segment<3>(3) = al.cross(om);
  f.segment<3>(6) = be.cross(om);
  return f;
}

CVec9 field_complex(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  CVec9 f;
  f[0] = 0.5 * (-c.w1 * (c.w3 - lam) - c.z1);
  f[1] = 0.5 * (c.w2 * (c.w3 - lam) + c.z2);
  f[2] = 0.5 * (c.y2 - c.y1);
  f[3] = -c.x1 * c.w3 + c.z1 * c.w1;
  f[4] = c.x2 * c.w3 - c.z2 * c.w2;
  f[5] = -c.y1 * c.w3 + c.z2 * c.w1;
  f[6] = c.y2 * c.w3 - c.z1 * c.w2;
  f[7] = 0.5 * (c.x1 * c.w2 - c.y2 * c.w1);
  f[8] = 0.5 * (-c.x2 * c.w1 + c.y1 * c.w2);
  return f;
}

double Trajectory::max_drift() const {
  double m = 0.0;
  for (const auto& d : drift) {
    m = std::max({m, std::abs(d.g), std::abs(d.k), std::abs(d.h)});
  }
  return m;
}

double Trajectory::max_casimir_residual(const Params& params) const {
  double m = 0.0;
  for (const auto& s : states)
    m = std::max(m, casimir_residuals(s, params).cwiseAbs().maxCoeff());
  return m;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <typename Vec, typename Rhs>
struct Dopri5 {
  Rhs f;
  double tol;
  double alpha_prev = 1.0;  // PI controller memory

  // One attempted step; returns (accepted, new h suggestion) and updates y,t.
  bool step(double& t, Vec& y, double& h) {
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
    const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 =
        f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                     a64 * k4 + a65 * k5));
    const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(t + h, y5);
    const Vec err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double errnorm = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double q = std::abs(err[i]) / sc;
      errnorm += q * q;
    }
    errnorm = std::sqrt(errnorm / static_cast<double>(y.size()));

    // PI step-size control (beta = 0.04).
    const double safety = 0.9, kP = 0.7 / 5.0, kI = 0.08;
    double fac;
    if (errnorm == 0.0) {
      fac = 5.0;
    } else {
      fac = safety * std::pow(errnorm, -kP) * std::pow(alpha_prev, kI);
      fac = std::clamp(fac, 0.2, 5.0);
    }
    if (errnorm <= 1.0) {
      t += h;
      y = y5;
      alpha_prev = std::max(errnorm, 1e-4);
      h *= fac;
      return true;
    }
    h *= fac;
    return false;
  }
};

void project_casimirs(PhaseState& s, const Params& params) {
  // Gram-Schmidt back onto |alpha|=a, |beta|=b, alpha.beta=0.
  s.alpha *= params.a() / s.alpha.norm();
  s.beta -= (s.alpha.dot(s.beta) / s.alpha.squaredNorm()) * s.alpha;
  s.beta *= params.b() / s.beta.norm();
}

}  // namespace

Trajectory integrate(const PhaseState& s0, double t_end, const Params& params,
                     const IntegrateOptions& opt) {
  if (!on_orbit(s0, params, 1e-6))
    throw OffOrbit("integrate: initial state off orbit");

  const IntegralTriple i0 = integrals_unchecked(s0, params);
  Trajectory traj;
  auto record = [&](double t, const PhaseState& s) {
    traj.times.push_back(t);
    traj.states.push_back(s);
    const IntegralTriple it = integrals_unchecked(s, params);
    traj.drift.push_back({it.g - i0.g, it.k - i0.k, it.h - i0.h});
  };
  record(0.0, s0);

  Dopri5<Vec9, std::function<Vec9(double, const Vec9&)>> stepper{
      [&](double, const Vec9& y) {
        return field_real(PhaseState::from_vector(y), params);
      },
      opt.tol};

  double t = 0.0;
  double h = std::min(opt.h_init, t_end);
  Vec9 y = s0.as_vector();
  std::size_t steps = 0;
  while (t < t_end) {
    h = std::min(h, t_end - t);
    if (h < opt.h_min)
      throw StepFailure("integrate: step size underflow");
    if (++steps > opt.max_steps)
      throw StepFailure("integrate: step budget exhausted");
    if (stepper.step(t, y, h)) {
      PhaseState s = PhaseState::from_vector(y);
      if (opt.project_orbit) {
        project_casimirs(s, params);
        y = s.as_vector();
      }
      record(t, s);
    }
  }
  return traj;
}

Eigen::VectorXd integrate_ode(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    Eigen::VectorXd y0, double t0, double t1, double tol) {
  Dopri5<Eigen::VectorXd, std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>>
      stepper{f, tol};
  double t = t0, h = std::min(1e-3, t1 - t0);
  std::size_t steps = 0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < 1e-13 || ++steps > 20'000'000)
      throw StepFailure("integrate_ode: controller stalled");
    stepper.step(t, y0, h);
  }
  return y0;
}

namespace {

// Gradient of f with respect to (M, alpha, beta) by central differences.
// omega = I^{-1} (M - lambda e3) with I = diag(2,2,1).
template <typename Scalar, typename F>
void mab_gradient(const F& f, const PhaseState& s, const Params& params,
                  double h_scale, Scalar gM[3], Scalar ga[3], Scalar gb[3]) {
  const Vec3 M(2.0 * s.omega[0], 2.0 * s.omega[1],
               s.omega[2] + params.lambda());
  auto eval = [&](const Vec3& Mv, const Vec3& al, const Vec3& be) {
    PhaseState q;
    q.omega = Vec3(0.5 * Mv[0], 0.5 * Mv[1], Mv[2] - params.lambda());
    q.alpha = al;
    q.beta = be;
    return f(q);
  };
  for (int i = 0; i < 3; ++i) {
    const double hM = h_scale * (1.0 + std::abs(M[i]));
    const double ha = h_scale * (1.0 + std::abs(s.alpha[i]));
    const double hb = h_scale * (1.0 + std::abs(s.beta[i]));
    Vec3 e = Vec3::Zero();
    e[i] = hM;
    gM[i] = (eval(M + e, s.alpha, s.beta) - eval(M - e, s.alpha, s.beta)) /
            (2.0 * hM);
    e[i] = ha;
    ga[i] =(eval(M, s.alpha + e, s.beta) - eval(M, s.alpha - e, s.beta)) /
            (2.0 * ha);
    e[i] = hb;
    gb[i] = (eval(M, s.alpha, s.beta + e) - eval(M, s.alpha, s.beta - e)) /
            (2.0 * hb);
  }
}

template <typename Scalar>
Scalar assemble_bracket(const PhaseState& s, const Params& params,
                        const Scalar gMa[3], const Scalar gaa[3],
                        const Scalar gba[3], const Scalar gMb[3],
                        const Scalar gab[3], const Scalar gbb[3]) {
  const Vec3 M(2.0 * s.omega[0], 2.0 * s.omega[1],
               s.omega[2] + params.lambda());
  auto cross_i = [](const Scalar u[3], const Scalar v[3], int i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    return u[j] * v[k] - u[k] * v[j];
  };
  Scalar out{};
  for (int i = 0; i < 3; ++i) {
    out += M[i] * cross_i(gMa, gMb, i);
    out += s.alpha[i] * (cross_i(gMa, gab, i) - cross_i(gMb, gaa, i));
    out += s.beta[i] * (cross_i(gMa, gbb, i) - cross_i(gMb, gba, i));
  }
  return out;
}

}  // namespace

double bracket_oracle(const ScalarField& f, const ScalarField& g,
                      const PhaseState& s, const Params& params,
                      const BracketOptions& opt) {
  double gMa[3], gaa[3], gba[3], gMb[3], gab[3], gbb[3];
  mab_gradient<double>(f, s, params, opt.h_fd_scale, gMa, gaa, gba);
  mab_gradient<double>(g, s, params, opt.h_fd_scale, gMb, gab, gbb);
  return assemble_bracket<double>(s, params, gMa, gaa, gba, gMb, gab, gbb);
}

Complex bracket_oracle_complex(const ComplexField& f, const ComplexField& g,
                               const PhaseState& s, const Params& params,
                               const BracketOptions& opt) {
  Complex gMa[3], gaa[3], gba[3], gMb[3], gab[3], gbb[3];
  mab_gradient<Complex>(f, s, params, opt.h_fd_scale, gMa, gaa, gba);
  mab_gradient<Complex>(g, s, params, opt.h_fd_scale, gMb, gab, gbb);
  return assemble_bracket<Complex>(s, params, gMa, gaa, gba, gMb, gab, gbb);
}

}  // namespace kgyro
