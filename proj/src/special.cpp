#include "kgyro/special.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include <limits>

namespace kgyro {

std::array<PhaseState, 4> equilibria(const Params& params) {
  std::array<PhaseState, 4> out;
  int idx = 0;
  for (double e1 : {1.0, -1.0})
    for (double e2 : {1.0, -1.0}) {
      PhaseState s;
      s.alpha = Vec3(e1 * params.a(), 0.0, 0.0);
      s.beta = Vec3(0.0, e2 * params.b(), 0.0);
      out[idx++] = s;
    }
  return out;
}

PhaseState pendulum_state(PendulumFamily family, double phi, double phi_dot,
                          bool positive, const Params& params) {
  const double a = params.a(), b = params.b();
  const double sgn = positive ? 1.0 : -1.0;
  if (family != PendulumFamily::P3 && params.lambda() != 0.0)
    throw InadmissibleFamily(
        "pendulum_state: P1/P2 require zero gyrostatic momentum");
  PhaseState s;
  switch (family) {
    case PendulumFamily::P1:
      s.omega = Vec3(phi_dot, 0.0, 0.0);
      s.alpha = sgn * a * Vec3::UnitX();
      s.beta = b * Vec3(0.0, std::cos(phi), -std::sin(phi));
      break;
    case PendulumFamily::P2:
      s.omega = Vec3(0.0, phi_dot, 0.0);
      s.beta = sgn * b * Vec3::UnitY();
      s.alpha = a * Vec3(std::cos(phi), 0.0, std::sin(phi));
      break;
    case PendulumFamily::P3:
      s.omega = Vec3(0.0, 0.0, phi_dot);
      s.alpha = a * Vec3(std::cos(phi), -std::sin(phi), 0.0);
      s.beta = sgn * b * Vec3(std::sin(phi), std::cos(phi), 0.0);
      break;
  }
  return s;
}

std::array<double, 6> rank1_quintic_coeffs(double sigma, const Params& params) {
  const double L2 = params.lambda() * params.lambda();
  const double L4 = L2 * L2, L6 = L4 * L2, L8 = L4 * L4;
  const double A = L2 + sigma;
  const double r4 = params.r4(), r8 = r4 * r4;
  const double p2 = params.p2();
  return {L2 * A * A,
          A * (2.0 * p2 * L4 - A * A * A * sigma) * sigma,
          r4 * L6 * sigma * sigma,
          2.0 * r4 * L4 * std::pow(sigma, 4) * A * A,
          0.0,
          -r8 * L8 * std::pow(sigma, 6)};
}

namespace {

double poly_eval(const std::array<double, 6>& c, double u) {
  double v = 0.0;
  for (double ci : c) v = v * u + ci;
  return v;
}

double poly_deriv(const std::array<double, 6>& c, double u) {
  double v = 0.0;
  for (int i = 0; i < 5; ++i) v = v * u + (5 - i) * c[static_cast<size_t>(i)];
  return v;
}

}  // namespace

std::vector<PolyRoot> rank1_solve_u(double sigma, const Params& params) {
  if (sigma == 0.0) throw Error("rank1_solve_u: sigma must be nonzero");
  if (params.lambda() == 0.0)
    throw Error("rank1_solve_u: lambda must be nonzero");
  const auto c = rank1_quintic_coeffs(sigma, params);

  Eigen::Matrix<double, 5, 5> companion = Eigen::Matrix<double, 5, 5>::Zero();
  for (int i = 0; i < 4; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < 5; ++i)
    companion(i, 4) = -c[static_cast<size_t>(5 - i)] / c[0];
  const auto eigs = companion.eigenvalues();

  double scale = 0.0;
  for (double ci : c) scale = std::max(scale, std::abs(ci));

  std::vector<PolyRoot> roots;
  for (int i = 0; i < 5; ++i) {
    Complex z = eigs[i];
    if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z))) continue;
    double u = z.real();
    for (int it = 0; it < 50; ++it) {  // Newton polish
      const double f = poly_eval(c, u), df = poly_deriv(c, u);
      if (df == 0.0) break;
      const double du = f / df;
      u -= du;
      if (std::abs(du) < 1e-16 * (1.0 + std::abs(u))) break;
    }
    const double res = std::abs(poly_eval(c, u)) /
                       (scale * std::max(1.0, std::pow(std::abs(u), 5)));
    if (res > 1e-9) continue;
    bool dup = false;
    for (auto& r : roots) {
      if (std::abs(r.value - u) < 1e-8 * (1.0 + std::abs(u))) {
        r.multiplicity += 1;
        dup = true;
        break;
      }
    }
    if (!dup) roots.push_back({u, 1});
  }
  std::sort(roots.begin(), roots.end(),
            [](const PolyRoot& x, const PolyRoot& y) { return x.value < y.value; });
  return roots;
}

double rank1_Q(double w, double sigma, double u, const Params& params) {
  const double L2 = params.lambda() * params.lambda();
  const double A = L2 + sigma;
  const double r2 = params.r2(), r4 = params.r4();
  return (sigma * u * u * u +
          A * (L2 * w * w + sigma * sigma * (2.0 * w - sigma)) * u * u +
          r4 * L2 * L2 * std::pow(sigma, 4)) /
         (2.0 * r2 * L2 * sigma * sigma * A * u * w);
}

std::pair<double, double> rank1_polys(const Rank1Data& d, const Params& params,
                                      double w) {
  const double L2 = params.lambda() * params.lambda();
  const double A = L2 + d.sigma;
  const double r2 = params.r2(), r4 = params.r4();
  const double sig = d.sigma, u = d.u;
  const double c0 =
      sig * (u * u * u - A * sig * sig * u * u + r4 * L2 * L2 * sig * sig * sig) /
      (A * L2 * u * u);
  const double pp = w * w + 2.0 * sig * sig * (u + r2 * L2) / (L2 * u) * w + c0;
  const double pm = w * w + 2.0 * sig * sig * (u - r2 * L2) / (L2 * u) * w + c0;
  return {pp, pm};
}

std::vector<std::pair<double, double>> rank1_windows(double sigma, double u,
                                                     const Params& params,
                                                     double w_min, double w_max,
                                                     int scan_points) {
  Rank1Data d;
  d.sigma = sigma;
  d.u = u;
  auto admissible = [&](double w) {
    const auto [pp, pm] = rank1_polys(d, params, w);
    return pp * pm <= 0.0 && std::abs(rank1_Q(w, sigma, u, params)) <= 1.0;
  };
  std::vector<std::pair<double, double>> out;
  bool in = false;
  double lo = 0.0, prev = w_min;
  for (int i = 0; i <= scan_points; ++i) {
    const double w =
        w_min * std::pow(w_max / w_min, static_cast<double>(i) / scan_points);
    const bool ok = admissible(w);
    if (ok && !in) {
      lo = w;
      in = true;
    } else if (!ok && in) {
      out.emplace_back(lo, prev);
      in = false;
    }
    prev = w;
  }
  if (in) out.emplace_back(lo, prev);
  return out;
}

namespace {

ComplexState build_point(double sigma, double u, double w, Complex q,
                         const Params& params) {
  const double lam = params.lambda();
  const double L2 = lam * lam;
  const double A = L2 + sigma;
  const double r2 = params.r2(), r4 = params.r4();
  const Complex q2 = q * q;
  const Complex sw = std::sqrt(Complex(w));
  ComplexState c;
  c.w1 = q * sw;
  c.w2 = sw / q;
  c.w3 = (lam / sigma) * w;
  c.x1 = (r2 * L2 * sigma * sigma - A * u * q2 * w) / (sigma * u);
  c.x2 = (r2 * L2 * sigma * sigma - A * u * w / q2) / (sigma * u);
  const double ycommon =
      sigma * (1.0 + sigma / L2 - r4 * L2 * sigma / (u * u));
  c.y1 = ycommon + (r2 * L2 / u) * q2 * w;
  c.y2 = ycommon + (r2 * L2 / u) * w / q2;
  c.z1 = -(r2 * lam * sigma / u) * sw / q + (A / lam) * q * sw;
  c.z2 = -(r2 * lam * sigma / u) * q * sw + (A / lam) * sw / q;
  return c;
}

}  // namespace

Rank1Data rank1_data(double sigma, double u, double w, const Params& params,
                     double tol) {
  if (sigma == 0.0 || params.lambda() == 0.0)
    throw Error("rank1_data: sigma and lambda must be nonzero");
  const double Q = rank1_Q(w, sigma, u, params);
  const Complex disc = std::sqrt(Complex(Q * Q - 1.0));
  const Complex q2a = Q + disc, q2b = Q - disc;

  Rank1Data best;
  double best_res = std::numeric_limits<double>::infinity();
  for (const Complex& q2 : {q2a, q2b}) {
    if (std::abs(q2) == 0.0) continue;
    const Complex q = std::sqrt(q2);
    const Complex branch_res = q2 * q2 - 2.0 * Q * q2 + 1.0;
    if (std::abs(branch_res) > tol * (1.0 + std::abs(q2 * q2))) continue;
    const ComplexState c = build_point(sigma, u, w, q, params);
    double res = 0.0;
    for (const Complex& e : orbit_constraints(c, params))
      res = std::max(res, std::abs(e));
    const bool better =
        res < best_res * (1.0 - 1e-12) ||
        (std::abs(res - best_res) <= 1e-12 * (1.0 + res) && std::abs(q) <= 1.0);
    if (better) {
      best_res = res;
      best = {sigma, u, w, q};
    }
  }
  if (!std::isfinite(best_res))
    throw BranchFailure("rank1_data: no q branch satisfies the quartic");
  return best;
}

ComplexState rank1_point(const Rank1Data& d, const Params& params) {
  return build_point(d.sigma, d.u, d.w, d.q, params);
}

std::vector<Rank1Data> rank1_admissible(const Params& params, int count) {
  std::vector<Rank1Data> out;
  const int nsig = 60;
  for (double sign : {1.0, -1.0}) {
    for (int i = 0; i < nsig && static_cast<int>(out.size()) < count; ++i) {
      const double sigma =
          sign * 0.05 * std::pow(3.0 / 0.05, static_cast<double>(i) / (nsig - 1));
      std::vector<PolyRoot> roots;
      try {
        roots = rank1_solve_u(sigma, params);
      } catch (const Error&) {
        continue;
      }
      for (const auto& root : roots) {
        if (std::abs(root.value) < 1e-10) continue;
        const auto windows =
            rank1_windows(sigma, root.value, params, 1e-4, 10.0, 4000);
        for (const auto& [lo, hi] : windows) {
          const double w = 0.5 * (lo + hi);
          try {
            Rank1Data d = rank1_data(sigma, root.value, w, params);
            const ComplexState c = rank1_point(d, params);
            double orb = 0.0;
            for (const Complex& e : orbit_constraints(c, params))
              orb = std::max(orb, std::abs(e));
            if (c.realness_defect() < 1e-8 && orb < 1e-8) {
              out.push_back(d);
              break;  // one point per (sigma, u)
            }
          } catch (const Error&) {
          }
        }
        if (static_cast<int>(out.size()) >= count) break;
      }
    }
  }
  return out;
}

double rank1_wdot_squared(const Rank1Data& d, const Params& params, double w) {
  const double L2 = params.lambda() * params.lambda();
  const auto [pp, pm] = rank1_polys(d, params, w);
  return -(L2 / (4.0 * d.sigma * d.sigma)) * pp * pm;
}

}  // namespace kgyro
