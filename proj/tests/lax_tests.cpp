#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "kgyro/dynamics.hpp"
#include "kgyro/lax.hpp"
#include "kgyro/sampling.hpp"

using namespace kgyro;

namespace {

const Params P{1.1, 0.6, 0.35};

// Independent transcription of the matrix L.
Mat4c L_oracle(const ComplexState& c, const Params& pp, Complex kap) {
  const double lam = pp.lambda();
  Mat4c L;
  L << 2.0 * lam, c.x2 / kap, -2.0 * c.w2, c.z2 / kap,  //
      -c.x1 / kap, -2.0 * lam, -c.z1 / kap, 2.0 * c.w1,  //
      -2.0 * c.w1, c.z2 / kap, -2.0 * c.w3, -c.y1 / kap - 4.0 * kap,  //
      -c.z1 / kap, 2.0 * c.w2, c.y2 / kap + 4.0 * kap, 2.0 * c.w3;
  return L;
}

}  // namespace

TEST_CASE("L is traceless and matches an independent transcription") {
  std::mt19937_64 rng(501);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 50; ++i) {
    CVec9 v;
    for (int j = 0; j < 9; ++j) v[j] = Complex(nd(rng), nd(rng));
    const ComplexState c = ComplexState::from_vector(v);
    const Complex kap(0.4 + 0.1 * i, 0.2);
    const LaxPair lp = lax_matrices(c, P, kap);
    CHECK(std::abs(lp.L.trace()) < 1e-13);
    CHECK(std::abs(lp.M.trace()) < 1e-13);
    CHECK((lp.L - L_oracle(c, P, kap)).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS_AS(lax_matrices(ComplexState{}, P, Complex(0.0, 0.0)),
                  ZeroKappa);
}

TEST_CASE("the Lax equation holds identically, even off the orbit") {
  std::mt19937_64 rng(502);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 100; ++i) {
    CVec9 v;
    for (int j = 0; j < 9; ++j) v[j] = Complex(nd(rng), nd(rng));
    const ComplexState c = ComplexState::from_vector(v);
    const Complex kap = std::polar(0.3 + 0.02 * i, 0.1 * i);
    CHECK(lax_residual(c, P, kap) < 1e-11);
  }
}

TEST_CASE("characteristic polynomial: odd coefficients vanish on L") {
  std::mt19937_64 rng(503);
  for (int i = 0; i < 50; ++i) {
    const PhaseState s = random_on_orbit(P, rng);
    const LaxPair lp = lax_matrices(complexify(s), P, Complex(0.8, 0.0));
    const auto cp = char_poly(lp.L);
    CHECK(std::abs(cp[0] - Complex(1.0, 0.0)) < 1e-13);
    CHECK(std::abs(cp[1]) < 1e-11);
    CHECK(std::abs(cp[3]) < 1e-11);
  }
}

TEST_CASE("char_poly agrees with Eigen eigenvalues") {
  std::mt19937_64 rng(504);
  std::normal_distribution<double> nd;
  Mat4c A;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = Complex(nd(rng), nd(rng));
  const auto cp = char_poly(A);
  const auto eigs = A.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    Complex val = 0.0;
    for (const Complex& ck : cp) val = val * eigs[i] + ck;
    CHECK(std::abs(val) < 1e-10);
  }
}

TEST_CASE("spectral curve identity on the orbit") {
  std::mt19937_64 rng(505);
  for (int i = 0; i < 100; ++i) {
    const PhaseState s = random_on_orbit(P, rng);
    const ComplexState c = complexify(s);
    const double kap = 0.2 + 0.03 * i;
    CHECK(spectral_residual(c, P, Complex(kap, 0.0)) < 1e-9);
    // double-check through the real-coefficient route
    const auto cp = char_poly(lax_matrices(c, P, Complex(kap, 0.0)).L);
    const auto sc = spectral_coeffs(integrals(s, P), kap, P);
    CHECK(std::abs(cp[2] - sc[2]) < 1e-9 * (1.0 + std::abs(sc[2])));
    CHECK(std::abs(cp[4] - sc[4]) < 1e-9 * (1.0 + std::abs(sc[4])));
  }
}

TEST_CASE("spectral identity is discriminating: it fails off the orbit") {
  std::mt19937_64 rng(506);
  const PhaseState s = random_on_orbit(P, rng);
  ComplexState c = complexify(s);
  c.x1 += 0.2;
  CHECK(spectral_residual(c, P, Complex(0.7, 0.0)) > 1e-6);
}

TEST_CASE("eigenvalues of L are constants of motion") {
  std::mt19937_64 rng(507);
  const PhaseState s0 = random_on_orbit(P, rng);
  const Complex kap(0.6, 0.0);
  auto sorted_eigs = [&](const PhaseState& s) {
    Eigen::Vector4cd e =
        lax_matrices(complexify(s), P, kap).L.eigenvalues();
    std::array<Complex, 4> out{e[0], e[1], e[2], e[3]};
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
      if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    return out;
  };
  const auto e0 = sorted_eigs(s0);
  IntegrateOptions opt;
  opt.tol = 1e-12;
  const Trajectory tr = integrate(s0, 5.0, P, opt);
  const auto e1 = sorted_eigs(tr.states.back());
  for (int i = 0; i < 4; ++i) CHECK(std::abs(e0[i] - e1[i]) < 1e-8);
}
