#include "kgyro/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <random>

#include "kgyro/bifurcation.hpp"
#include "kgyro/critical.hpp"
#include "kgyro/dynamics.hpp"
#include "kgyro/errors.hpp"
#include "kgyro/lax.hpp"
#include "kgyro/phase.hpp"
#include "kgyro/sampling.hpp"
#include "kgyro/special.hpp"

namespace kgyro {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Shared {
  std::vector<ComplexState> n_points, o_points;
  std::vector<Rank1Data> rank1;
};

Shared make_shared_points(const Params& params, std::uint64_t seed) {
  Shared sh;
  for (int i = 0; i < 20; ++i) {
    sh.n_points.push_back(sample_N(params, seed + 1000 + i));
    sh.o_points.push_back(sample_O(params, seed + 2000 + i));
  }
  sh.rank1 = rank1_admissible(params, 10);
  return sh;
}

CriterionResult c1_conservation(const Params& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  double worst = 0.0;
  IntegrateOptions opt;
  opt.tol = 1e-12;
  for (int i = 0; i < 20; ++i) {
    const PhaseState s0 = random_on_orbit(params, rng);
    const Trajectory tr = integrate(s0, 100.0, params, opt);
    worst = std::max(
        {worst, tr.max_drift(), tr.max_casimir_residual(params)});
  }
  return {1, "conservation", worst < 1e-9, worst, 1e-9,
          "max integral/Casimir drift, 20 states, t=100, tol=1e-12"};
}

CriterionResult c2_dual_integrals(const Params& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PhaseState s = random_on_orbit(params, rng);
    const IntegralTriple re = integrals_unchecked(s, params);
    const auto cx = integrals_complex(complexify(s), params);
    worst = std::max({worst,
                      std::abs(cx[0] - re.h) / (1.0 + std::abs(re.h)),
                      std::abs(cx[1] - re.k) / (1.0 + std::abs(re.k)),
                      std::abs(cx[2] - re.g) / (1.0 + std::abs(re.g))});
  }
  return {2, "dual_form_integrals", worst < 1e-11, worst, 1e-11,
          "real vs complex integral forms, 1000 on-orbit states"};
}

std::vector<Complex> sorted_eigs(const Mat4c& L) {
  Eigen::ComplexEigenSolver<Mat4c> es(L);
  std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

CriterionResult c3_lax(const Params& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ComplexState c = complexify(random_on_orbit(params, rng));
    const double mod = 0.1 * std::pow(100.0, unif(rng));
    const double ph = 2.0 * M_PI * unif(rng);
    const Complex kap = mod * Complex(std::cos(ph), std::sin(ph));
    const LaxPair P = lax_matrices(c, params, kap);
    const Mat4c R =
        lax_derivative(c, params, kap) - (P.L * P.M - P.M * P.L);
    worst = std::max(worst, R.norm());
  }

  // Isospectrality along a trajectory.
  IntegrateOptions opt;
  opt.tol = 1e-12;
  const PhaseState s0 = random_on_orbit(params, rng);
  const Trajectory tr = integrate(s0, 10.0, params, opt);
  const Complex kap(0.7, 0.0);
  const auto e0 =
      sorted_eigs(lax_matrices(complexify(s0), params, kap).L);
  double drift = 0.0;
  for (std::size_t i = 0; i < tr.states.size(); i += 20) {
    const auto e =
        sorted_eigs(lax_matrices(complexify(tr.states[i]), params, kap).L);
    for (int j = 0; j < 4; ++j)
      drift = std::max(drift, std::abs(e[static_cast<size_t>(j)] -
                                       e0[static_cast<size_t>(j)]));
  }
  const bool pass = worst < 1e-10 && drift < 1e-8;
  return {3, "lax_exactness", pass, worst, 1e-10,
          "Frobenius residual of L'-[L,M]; eigenvalue drift " + fmt17(drift) +
              " (bound 1e-8)"};
}

CriterionResult c4_spectral(const Params& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0, worst_odd = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ComplexState c = complexify(random_on_orbit(params, rng));
    const double mod = 0.1 * std::pow(100.0, unif(rng));
    const double ph = 2.0 * M_PI * unif(rng);
    const Complex kap = mod * Complex(std::cos(ph), std::sin(ph));
    worst = std::max(worst, spectral_residual(c, params, kap));
    const auto cp = char_poly(lax_matrices(c, params, kap).L);
    worst_odd = std::max({worst_odd, std::abs(cp[1]), std::abs(cp[3])});
  }
  const bool pass = worst < 1e-9 && worst_odd < 1e-11;
  return {4, "spectral_identity", pass, worst, 1e-9,
          "char-poly vs curve coefficients; odd-power max " + fmt17(worst_odd) +
              " (bound 1e-11)"};
}

CriterionResult c5_ranks(const Params& params, std::uint64_t seed,
                         const Shared& sh) {
  std::mt19937_64 rng(seed + 5);
  int wrong = 0, total = 0;
  auto expect = [&](const ComplexState& c, int want) {
    ++total;
    if (momentum_rank(c, params) != want) ++wrong;
  };
  for (const PhaseState& eq : equilibria(params)) expect(complexify(eq), 0);
  expect(complexify(pendulum_state(PendulumFamily::P3, 0.8, 0.9, true, params)),
         1);
  expect(
      complexify(pendulum_state(PendulumFamily::P3, 2.0, -0.4, false, params)),
      1);
  for (const Rank1Data& d : sh.rank1) expect(rank1_point(d, params), 1);
  for (const ComplexState& c : sh.n_points) expect(c, 2);
  for (const ComplexState& c : sh.o_points) expect(c, 2);
  for (int i = 0; i < 20; ++i)
    expect(complexify(random_on_orbit(params, rng)), 3);
  return {5, "stratum_ranks", wrong == 0, static_cast<double>(wrong), 0.0,
          "misclassified momentum-map ranks out of " + std::to_string(total)};
}

CriterionResult c6_inclusion(const Params& params, std::uint64_t seed,
                             const Shared& sh) {
  (void)seed;
  double worst_line = 0.0, worst_surface = 0.0;
  // First stratum -> the straight lines (positive branch maps to Gamma-).
  for (int i = 0; i < 10; ++i) {
    const double phi = 0.37 + 0.51 * i;
    const double om3 = -1.3 + 0.29 * i;
    for (bool pos : {true, false}) {
      const PhaseState s = stratum_L_point(phi, om3, pos, params);
      const IntegralTriple I = integrals_unchecked(s, params);
      const auto [gp, gm] = gamma_lines(I.h, params);
      const GammaPoint& target = pos ? gm : gp;
      worst_line = std::max({worst_line, std::abs(I.k - target.k),
                             std::abs(I.g - target.g)});
    }
  }
  for (const ComplexState& c : sh.n_points) {
    const auto I = integrals_complex(c, params);
    const Complex s = S_N(c, params);
    const CurvePoint cp = gamma1(s.real(), I[0].real(), params);
    worst_surface = std::max({worst_surface, std::abs(I[1].real() - cp.k),
                              std::abs(I[2].real() - cp.g), std::abs(s.imag())});
  }
  for (const ComplexState& c : sh.o_points) {
    const auto I = integrals_complex(c, params);
    const Complex s = S_O(c, params);
    const CurvePoint cp = gamma2(s.real(), I[0].real(), params);
    worst_surface = std::max({worst_surface, std::abs(I[1].real() - cp.k),
                              std::abs(I[2].real() - cp.g), std::abs(s.imag())});
  }
  const bool pass = worst_line < 1e-10 && worst_surface < 1e-8;
  return {6, "critical_value_inclusion", pass, worst_surface, 1e-8,
          "surface residuals; line residual " + fmt17(worst_line) +
              " (bound 1e-10)"};
}

CriterionResult c7_brackets(const Params& params, std::uint64_t seed,
                            const Shared& sh) {
  (void)seed;
  double worst = 0.0;
  for (const ComplexState& c : sh.o_points) {
    const PhaseState s = realify(c);
    const ComplexField f1 = [&](const PhaseState& q) {
      return U1(complexify(q), params);
    };
    const ComplexField f2 = [&](const PhaseState& q) {
      return U2(complexify(q), params);
    };
    const Complex numeric = bracket_oracle_complex(f1, f2, s, params);
    const Complex closed = bracket_U_closed(c, params);
    worst = std::max(worst, std::abs(numeric - closed) / std::abs(closed));
  }
  for (const ComplexState& c : sh.n_points) {
    const PhaseState s = realify(c);
    const ComplexField f1 = [&](const PhaseState& q) {
      return residual_N(complexify(q), params)[0];
    };
    const ComplexField f2 = [&](const PhaseState& q) {
      return residual_N(complexify(q), params)[1];
    };
    const Complex numeric = bracket_oracle_complex(f1, f2, s, params);
    const Complex closed = bracket_F_closed(c, params);
    // The closed form carries square roots whose branch the statement leaves
    // open; compare up to a fourth root of unity.
    double best = std::numeric_limits<double>::infinity();
    for (const Complex ph : {Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                             Complex(0, -1)})
      best = std::min(best,
                      std::abs(numeric - ph * closed) / std::abs(closed));
    worst = std::max(worst, best);
  }
  return {7, "bracket_closed_forms", worst < 1e-6, worst, 1e-6,
          "relative error, 20 points per bracket"};
}

CriterionResult c8_rank1_family(const Params& params, std::uint64_t seed) {
  (void)seed;
  const auto family = rank1_admissible(params, 10);
  double worst_res = 0.0, worst_dw = 0.0;
  int used = 0;
  for (const Rank1Data& d : family) {
    const ComplexState c = rank1_point(d, params);
    for (const Complex& v : residual_N(c, params))
      worst_res = std::max(worst_res, std::abs(v));
    for (const Complex& v : residual_O(c, params))
      worst_res = std::max(worst_res, std::abs(v));
    // dw/dt along a real trajectory against the turning-point polynomial.
    const PhaseState s0 = realify(c, 1e-7);
    IntegrateOptions opt;
    opt.tol = 1e-11;
    const Trajectory tr = integrate(s0, 1.0, params, opt);
    for (const PhaseState& s : tr.states) {
      const double w = s.omega[0] * s.omega[0] + s.omega[1] * s.omega[1];
      const Vec9 f = field_real(s, params);
      const double dwdt = 2.0 * (s.omega[0] * f[0] + s.omega[1] * f[1]);
      const double rhs = rank1_wdot_squared(d, params, w);
      worst_dw = std::max(worst_dw, std::abs(dwdt * dwdt - rhs) /
                                        (1.0 + dwdt * dwdt));
    }
    ++used;
  }
  const bool pass = used >= 10 && worst_res < 1e-8 && worst_dw < 1e-7;
  return {8, "rank1_family", pass, std::max(worst_res, worst_dw), 1e-7,
          std::to_string(used) + " admissible pairs; stratum residual " +
              fmt17(worst_res) + " (bound 1e-8)"};
}

CriterionResult c9_degeneration(const Params& params, std::uint64_t seed) {
  (void)seed;
  const Params p0(params.a(), params.b(), 0.0);
  double worst_sq = 0.0;
  for (double h : {-1.0, 0.7, 2.0}) {
    for (double sign : {1.0, -1.0}) {
      for (int i = 0; i < 100; ++i) {
        const double s = sign * 1e-2 * std::pow(5000.0, i / 99.0);
        const CurvePoint c = gamma1(s, h, p0);
        const double lhs = p0.p2() * h - 2.0 * c.g;
        const double resid = std::abs(lhs * lhs - p0.r4() * c.k) /
                             (1.0 + lhs * lhs);
        worst_sq = std::max(worst_sq, resid);
      }
    }
  }
  // Exact h-tilde shift covariance at dyadic lambda.
  const Params p_shift(params.a(), params.b(), 0.5);
  double worst_shift = 0.0;
  const double h = 2.25;          // h-tilde = 2.125, both exactly dyadic
  const double h0 = h - 0.125;    // lambda = 0 problem at the same h-tilde
  for (double sign : {1.0, -1.0})
    for (int i = 0; i < 50; ++i) {
      const double s = sign * 1e-2 * std::pow(5000.0, i / 49.0);
      const CurvePoint x = gamma2(s, h, p_shift);
      const CurvePoint y = gamma2(s, h0, p0);
      worst_shift = std::max({worst_shift, std::abs(x.g - y.g),
                              std::abs(x.k - y.k), std::abs(x.dg_ds - y.dg_ds),
                              std::abs(x.dk_ds - y.dk_ds)});
    }
  const auto [ap, am] = gamma_lines(h, p_shift);
  const auto [bp, bm] = gamma_lines(h0, p0);
  worst_shift = std::max({worst_shift, std::abs(ap.g - bp.g),
                          std::abs(ap.k - bp.k), std::abs(am.g - bm.g),
                          std::abs(am.k - bm.k)});
  const bool pass = worst_sq < 1e-10 && worst_shift == 0.0;
  return {9, "degeneration_limits", pass, worst_sq, 1e-10,
          "lambda=0 cylinder identity; shift covariance deviation " +
              fmt17(worst_shift) + " (must be 0)"};
}

std::vector<CriterionResult> run_1to9(const Params& params,
                                      std::uint64_t seed) {
  const Shared sh = make_shared_points(params, seed);
  std::vector<CriterionResult> r;
  r.push_back(c1_conservation(params, seed));
  r.push_back(c2_dual_integrals(params, seed));
  r.push_back(c3_lax(params, seed));
  r.push_back(c4_spectral(params, seed));
  r.push_back(c5_ranks(params, seed, sh));
  r.push_back(c6_inclusion(params, seed, sh));
  r.push_back(c7_brackets(params, seed, sh));
  r.push_back(c8_rank1_family(params, seed));
  r.push_back(c9_degeneration(params, seed));
  return r;
}

}  // namespace

std::string report_csv(const std::vector<CriterionResult>& results) {
  std::string out = "id,name,passed,metric,bound\n";
  for (const auto& r : results) {
    out += std::to_string(r.id) + ',' + r.name + ',' +
           (r.passed ? "1" : "0") + ',' + fmt17(r.metric) + ',' +
           fmt17(r.bound) + '\n';
  }
  return out;
}

std::vector<CriterionResult> run_acceptance(const Params& params,
                                            const VerifyOptions& opt) {
  std::vector<CriterionResult> r = run_1to9(params, opt.seed);
  const std::vector<CriterionResult> again = run_1to9(params, opt.seed);
  const bool identical = report_csv(r) == report_csv(again);
  r.push_back({10, "determinism", identical, identical ? 0.0 : 1.0, 0.0,
               "byte-identical reports from two runs at the same seed"});
  return r;
}

}  // namespace kgyro
