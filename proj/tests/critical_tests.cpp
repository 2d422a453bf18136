#include <doctest.h>

#include <random>

#include "kgyro/critical.hpp"
#include "kgyro/dynamics.hpp"
#include "kgyro/sampling.hpp"
#include "kgyro/special.hpp"

using namespace kgyro;

namespace {

const Params P{1.1, 0.6, 0.35};

// Second coding of the second-stratum residuals, grouped Horner-style around
// the common combination S0.
std::array<Complex, 2> residual_N_oracle(const ComplexState& c,
                                         const Params& pp) {
  const double lam = pp.lambda();
  const Complex S0 =
      c.x2 * c.z1 * c.w1 + c.x1 * c.z2 * c.w2 - c.x1 * c.x2 * c.w3 +
      2.0 * c.z1 * c.z2 * lam;
  const Complex F1 =
      (c.w1 * c.w2 + lam * c.w3) * (c.w2 * c.x1 + lam * c.z1) * lam * c.y1 -
      c.w2 * (c.w1 * c.w1 + c.x1) * S0 -
      c.x2 * (c.w1 * c.w3 + c.z1) * (c.w1 * c.z1 - c.x1 * c.w3) * lam +
      (c.x1 * c.w3 * c.w3 - 2.0 * c.z1 * c.w1 * c.w3 - c.z1 * c.z1) * c.z2 *
          lam * lam;
  const Complex F2 =
      (c.w1 * c.w2 + lam * c.w3) * (c.w1 * c.x2 + lam * c.z2) * lam * c.y2 -
      c.w1 * (c.w2 * c.w2 + c.x2) * S0 -
      c.x1 * (c.w2 * c.w3 + c.z2) * (c.w2 * c.z2 - c.x2 * c.w3) * lam +
      (c.x2 * c.w3 * c.w3 - 2.0 * c.z2 * c.w2 * c.w3 - c.z2 * c.z2) * c.z1 *
          lam * lam;
  return {F1, F2};
}

// Alternate closure of the third stratum: the y-values written as a cubic in
// (w3 - lambda) over the common denominator.
std::pair<Complex, Complex> close_O_oracle(const SevenCoords& s,
                                           const Params& pp) {
  const double lam = pp.lambda();
  const Complex wl = s.w3 - lam;
  const Complex com =
      s.x2 * s.z1 * s.w1 + s.x1 * s.z2 * s.w2 + 2.0 * lam * s.z1 * s.z2;
  const Complex y1 =
      -(s.w1 * s.z2 * wl * wl +
        (s.x2 * s.w1 * s.w1 + s.z1 * s.z2 + 2.0 * lam * s.w1 * s.z2) * wl +
        com) /
      (s.w1 * s.w2 * wl);
  const Complex y2 =
      -(s.w2 * s.z1 * wl * wl +
        (s.x1 * s.w2 * s.w2 + s.z1 * s.z2 + 2.0 * lam * s.w2 * s.z1) * wl +
        com) /
      (s.w1 * s.w2 * wl);
  return {y1, y2};
}

SevenCoords seven_of(const ComplexState& c) {
  return {c.w1, c.w2, c.w3, c.x1, c.x2, c.z1, c.z2};
}

double max_abs2(const std::array<Complex, 2>& v) {
  return std::max(std::abs(v[0]), std::abs(v[1]));
}

}  // namespace

TEST_CASE("first stratum: construction, residuals, tangent identities") {
  for (bool pos : {true, false}) {
    const PhaseState s = stratum_L_point(0.7, -0.9, pos, P);
    CHECK(on_orbit(s, P));
    const ComplexState c = complexify(s);
    for (const Complex& r : residual_L(c)) CHECK(std::abs(r) < 1e-14);
    // X_i K = 0 and 4 X_i G + (x1 x2 - y1 y2) X_i H = 0 on the stratum
    const Mat63c m = rank_matrix(c, P);
    const Complex mix = c.x1 * c.x2 - c.y1 * c.y2;
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(m(i, 1)) < 1e-12);
      CHECK(std::abs(4.0 * m(i, 0) + mix * m(i, 2)) < 1e-11);
    }
    CHECK(momentum_rank(c, P) <= 1);
  }
  // pendulum points of the stratum move within it
  const PhaseState s0 = stratum_L_point(0.3, 1.1, true, P);
  IntegrateOptions opt;
  opt.tol = 1e-12;
  const Trajectory tr = integrate(s0, 3.0, P, opt);
  for (size_t i = 0; i < tr.states.size(); i += 40) {
    const auto r = residual_L(complexify(tr.states[i]));
    for (const Complex& v : r) CHECK(std::abs(v) < 1e-9);
  }
}

TEST_CASE("second stratum: residual double coding and closure") {
  std::mt19937_64 rng(401);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 100; ++i) {
    CVec9 v;
    for (int j = 0; j < 9; ++j) v[j] = Complex(nd(rng), nd(rng));
    const ComplexState c = ComplexState::from_vector(v);
    const auto r1 = residual_N(c, P);
    const auto r2 = residual_N_oracle(c, P);
    CHECK(std::abs(r1[0] - r2[0]) < 1e-11 * (1.0 + std::abs(r2[0])));
    CHECK(std::abs(r1[1] - r2[1]) < 1e-11 * (1.0 + std::abs(r2[1])));
  }
  for (int i = 0; i < 20; ++i) {
    SevenCoords s;
    s.w1 = Complex(nd(rng), nd(rng));
    s.w2 = Complex(nd(rng), nd(rng));
    s.w3 = Complex(nd(rng), nd(rng));
    s.x1 = Complex(nd(rng), nd(rng));
    s.x2 = Complex(nd(rng), nd(rng));
    s.z1 = Complex(nd(rng), nd(rng));
    s.z2 = Complex(nd(rng), nd(rng));
    const ComplexState c = close_N(s, P);
    CHECK(max_abs2(residual_N(c, P)) < 1e-8);
  }
}

TEST_CASE("third stratum: closure double coding") {
  std::mt19937_64 rng(402);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 50; ++i) {
    SevenCoords s;
    s.w1 = Complex(nd(rng), nd(rng));
    s.w2 = Complex(nd(rng), nd(rng));
    s.w3 = Complex(nd(rng), nd(rng));
    s.x1 = Complex(nd(rng), nd(rng));
    s.x2 = Complex(nd(rng), nd(rng));
    s.z1 = Complex(nd(rng), nd(rng));
    s.z2 = Complex(nd(rng), nd(rng));
    const ComplexState c = close_O(s, P);
    CHECK(max_abs2(residual_O(c, P)) < 1e-10);
    const auto [y1, y2] = close_O_oracle(s, P);
    CHECK(std::abs(c.y1 - y1) < 1e-10 * (1.0 + std::abs(y1)));
    CHECK(std::abs(c.y2 - y2) < 1e-10 * (1.0 + std::abs(y2)));
  }
}

TEST_CASE("sampled stratum points: orbit, rank, invariance along the flow") {
  for (int which = 0; which < 2; ++which) {
    const ComplexState c = which == 0 ? sample_N(P, 7) : sample_O(P, 7);
    for (const Complex& e : orbit_constraints(c, P)) CHECK(std::abs(e) < 1e-10);
    CHECK(c.realness_defect() < 1e-9);
    CHECK(momentum_rank(c, P) == 2);

    const PhaseState s0 = realify(c, 1e-8);
    IntegrateOptions opt;
    opt.tol = 1e-12;
    const Trajectory tr = integrate(s0, 2.0, P, opt);
    const Complex s_start = which == 0 ? S_N(c, P) : S_O(c, P);
    for (size_t i = 0; i < tr.states.size(); i += 30) {
      const ComplexState ct = complexify(tr.states[i]);
      if (which == 0) {
        CHECK(max_abs2(residual_N(ct, P)) < 1e-8);
        CHECK(std::abs(S_N(ct, P) - s_start) < 1e-7);
      } else {
        CHECK(max_abs2(residual_O(ct, P)) < 1e-8);
        CHECK(std::abs(S_O(ct, P) - s_start) < 1e-7);
      }
    }
  }
}

TEST_CASE("Lagrange elimination agrees with the stratum parameters") {
  const ComplexState cn = sample_N(P, 11);
  const STPair stn = lagrange_ST(cn, P);
  CHECK(std::abs(stn.S - S_N(cn, P)) < 1e-9 * (1.0 + std::abs(stn.S)));
  CHECK(std::abs(stn.T - T_N(cn, P)) < 1e-8 * (1.0 + std::abs(stn.T)));

  const ComplexState co = sample_O(P, 11);
  const STPair sto = lagrange_ST(co, P);
  CHECK(std::abs(sto.S - S_O(co, P)) < 1e-9 * (1.0 + std::abs(sto.S)));
  CHECK(std::abs(sto.T - T_O(co, P)) < 1e-8 * (1.0 + std::abs(sto.T)));
}

TEST_CASE("U1 vanishes on the third stratum; U2 is the logged derivative") {
  const ComplexState co = sample_O(P, 13);
  CHECK(std::abs(U1(co, P)) < 1e-9);

  // generic point: gradient vs finite differences, and U2 = w1 w2 dU1/dt
  std::mt19937_64 rng(403);
  const PhaseState s = random_on_orbit(P, rng);
  const ComplexState c = complexify(s);
  const CVec9 grad = U1_gradient(c, P);
  const CVec9 v = c.as_vector();
  for (int j = 0; j < 9; ++j) {
    CVec9 vp = v, vm = v;
    const double h = 1e-6;
    vp[j] += h;
    vm[j] -= h;
    const Complex fd = (U1(ComplexState::from_vector(vp), P) -
                        U1(ComplexState::from_vector(vm), P)) /
                       (2.0 * h);
    CHECK(std::abs(fd - grad[j]) < 1e-6 * (1.0 + std::abs(grad[j])));
  }
  // real-time derivative along the flow
  const Vec9 f = field_real(s, P);
  const double h = 1e-6;
  const PhaseState sp = PhaseState::from_vector(s.as_vector() + h * f);
  const PhaseState sm = PhaseState::from_vector(s.as_vector() - h * f);
  const Complex dU1 =
      (U1(complexify(sp), P) - U1(complexify(sm), P)) / (2.0 * h);
  CHECK(std::abs(c.w1 * c.w2 * dU1 - U2(c, P)) <
        1e-5 * (1.0 + std::abs(U2(c, P))));
}

TEST_CASE("closed bracket forms match the Poisson oracle") {
  // {U1, U2} on the third stratum
  const ComplexState co = sample_O(P, 17);
  const PhaseState so = realify(co, 1e-8);
  auto u1 = [](const PhaseState& q) { return U1(complexify(q), P); };
  auto u2 = [](const PhaseState& q) { return U2(complexify(q), P); };
  const Complex num_u = bracket_oracle_complex(u1, u2, so, P);
  const Complex closed_u = bracket_U_closed(co, P);
  CHECK(std::abs(num_u - closed_u) < 1e-5 * (1.0 + std::abs(closed_u)));

  // {F1, F2} on the second stratum, up to a fourth root of unity
  const ComplexState cn = sample_N(P, 17);
  const PhaseState sn = realify(cn, 1e-8);
  auto f1 = [](const PhaseState& q) { return residual_N(complexify(q), P)[0]; };
  auto f2 = [](const PhaseState& q) { return residual_N(complexify(q), P)[1]; };
  const Complex num_f = bracket_oracle_complex(f1, f2, sn, P);
  const Complex closed_f = bracket_F_closed(cn, P);
  double best = 1e300;
  const Complex I(0.0, 1.0);
  for (const Complex& ph : {Complex(1, 0), Complex(-1, 0), I, -I})
    best = std::min(best, std::abs(num_f - ph * closed_f));
  CHECK(best < 1e-5 * (1.0 + std::abs(closed_f)));
}

TEST_CASE("momentum rank classifies generic points as regular") {
  std::mt19937_64 rng(404);
  for (int i = 0; i < 20; ++i)
    CHECK(momentum_rank(complexify(random_on_orbit(P, rng)), P) == 3);
}
