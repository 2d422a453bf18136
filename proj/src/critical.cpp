#include "kgyro/critical.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "kgyro/dynamics.hpp"
#include "kgyro/errors.hpp"

namespace kgyro {

std::array<Complex, 4> residual_L(const ComplexState& c) {
  return {c.w1, c.w2, c.z1, c.z2};
}

std::array<Complex, 2> residual_N(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  const Complex S0 = c.x2 * c.z1 * c.w1 + c.x1 * c.z2 * c.w2 -
                     c.x1 * c.x2 * c.w3 + 2.0 * c.z1 * c.z2 * lam;
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

std::array<Complex, 2> residual_O(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  const Complex N0 = c.x2 * c.z1 * c.w1 + c.x1 * c.z2 * c.w2 +
                     c.z1 * c.z2 * (c.w3 + lam);
  const Complex R1 = (c.y1 * c.w2 + c.x2 * c.w1 + c.z2 * (c.w3 + lam)) * c.w1 *
                         (c.w3 - lam) +
                     N0;
  const Complex R2 = (c.y2 * c.w1 + c.x1 * c.w2 + c.z1 * (c.w3 + lam)) * c.w2 *
                         (c.w3 - lam) +
                     N0;
  return {R1, R2};
}

PhaseState stratum_L_point(double phi, double omega3, bool positive,
                           const Params& params) {
  const double sgn = positive ? 1.0 : -1.0;
  PhaseState s;
  s.omega = Vec3(0.0, 0.0, omega3);
  s.alpha = params.a() * Vec3(std::cos(phi), std::sin(phi), 0.0);
  s.beta = sgn * params.b() * Vec3(-std::sin(phi), std::cos(phi), 0.0);
  return s;
}

ComplexState close_N(const SevenCoords& s, const Params& params) {
  const double lam = params.lambda();
  const Complex w1 = s.w1, w2 = s.w2, w3 = s.w3, x1 = s.x1, x2 = s.x2,
                z1 = s.z1, z2 = s.z2;
  const Complex d1 = (w1 * w2 + lam * w3) * (w2 * x1 + lam * z1) * lam;
  const Complex d2 = (w1 * w2 + lam * w3) * (w1 * x2 + lam * z2) * lam;
  if (std::abs(d1) < 1e-300 || std::abs(d2) < 1e-300)
    throw DegenerateDenominator("close_N: eliminant coefficient vanishes");
  const Complex S0 =
      x2 * z1 * w1 + x1 * z2 * w2 - x1 * x2 * w3 + 2.0 * z1 * z2 * lam;
  ComplexState c;
  c.w1 = w1;
  c.w2 = w2;
  c.w3 = w3;
  c.x1 = x1;
  c.x2 = x2;
  c.z1 = z1;
  c.z2 = z2;
  c.y1 = (w2 * (w1 * w1 + x1) * S0 +
          x2 * (w1 * w3 + z1) * (w1 * z1 - x1 * w3) * lam -
          (x1 * w3 * w3 - 2.0 * z1 * w1 * w3 - z1 * z1) * z2 * lam * lam) /
         d1;
  c.y2 = (w1 * (w2 * w2 + x2) * S0 +
          x1 * (w2 * w3 + z2) * (w2 * z2 - x2 * w3) * lam -
          (x2 * w3 * w3 - 2.0 * z2 * w2 * w3 - z2 * z2) * z1 * lam * lam) /
         d2;
  return c;
}

ComplexState close_O(const SevenCoords& s, const Params& params) {
  const double lam = params.lambda();
  const Complex w1 = s.w1, w2 = s.w2, w3 = s.w3, x1 = s.x1, x2 = s.x2,
                z1 = s.z1, z2 = s.z2;
  const Complex den = w1 * w2 * (w3 - lam);
  if (std::abs(den) < 1e-300)
    throw DegenerateDenominator("close_O: w1 w2 (w3 - lambda) vanishes");
  const Complex N0 = x2 * z1 * w1 + x1 * z2 * w2 + z1 * z2 * (w3 + lam);
  ComplexState c;
  c.w1 = w1;
  c.w2 = w2;
  c.w3 = w3;
  c.x1 = x1;
  c.x2 = x2;
  c.z1 = z1;
  c.z2 = z2;
  c.y1 = (-x2 * w1 - z2 * (w3 + lam)) / w2 - N0 / den;
  c.y2 = (-x1 * w2 - z1 * (w3 + lam)) / w1 - N0 / den;
  return c;
}

namespace {

using Vec7 = Eigen::Matrix<double, 7, 1>;

// Real-image point from seven real parameters, closed onto the stratum.
template <typename Closure>
ComplexState build_conjugate(const Vec7& v, const Params& params,
                             const Closure& close) {
  SevenCoords s;
  s.w1 = Complex(v[0], v[1]);
  s.w2 = std::conj(s.w1);
  s.w3 = Complex(v[2], 0.0);
  s.x1 = Complex(v[3], v[4]);
  s.x2 = std::conj(s.x1);
  s.z1 = Complex(v[5], v[6]);
  s.z2 = std::conj(s.z1);
  return close(s, params);
}

// The three independent real orbit residuals of a conjugate-symmetric state.
Vec3 orbit_res3(const ComplexState& c, const Params& params) {
  const auto e = orbit_constraints(c, params);
  return Vec3(e[0].real(), e[0].imag(), e[2].real());
}

template <typename Closure>
ComplexState sample_stratum(const Params& params, std::uint64_t seed,
                            int max_attempts, const Closure& close,
                            const char* what) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vec7 v;
    for (int i = 0; i < 7; ++i) v[i] = gauss(rng);
    bool ok = true;
    for (int it = 0; it < 200 && ok; ++it) {
      Vec3 f;
      try {
        f = orbit_res3(build_conjugate(v, params, close), params);
      } catch (const DegenerateDenominator&) {
        ok = false;
        break;
      }
      if (f.norm() < 1e-13) {
        return build_conjugate(v, params, close);
      }
      Eigen::Matrix<double, 3, 7> J;
      for (int j = 0; j < 7; ++j) {
        const double h = 1e-7;
        Vec7 vp = v, vm = v;
        vp[j] += h;
        vm[j] -= h;
        try {
          J.col(j) = (orbit_res3(build_conjugate(vp, params, close), params) -
                      orbit_res3(build_conjugate(vm, params, close), params)) /
                     (2.0 * h);
        } catch (const DegenerateDenominator&) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      const Vec7 dv = J.completeOrthogonalDecomposition().solve(-f);
      double t = 1.0;
      while (t > 1e-7) {
        bool step_ok = true;
        double fn = 0.0;
        try {
          fn = orbit_res3(build_conjugate(Vec7(v + t * dv), params, close),
                          params)
                   .norm();
        } catch (const DegenerateDenominator&) {
          step_ok = false;
        }
        if (step_ok && fn <= (1.0 - 0.25 * t) * f.norm()) break;
        t /= 2.0;
      }
      if (t <= 1e-7) {
        ok = false;
        break;
      }
      v += t * dv;
    }
  }
  throw BranchFailure(std::string(what) + ": no seed converged");
}

}  // namespace

ComplexState sample_N(const Params& params, std::uint64_t seed,
                      int max_attempts) {
  return sample_stratum(
      params, seed, max_attempts,
      [](const SevenCoords& s, const Params& p) { return close_N(s, p); },
      "sample_N");
}

ComplexState sample_O(const Params& params, std::uint64_t seed,
                      int max_attempts) {
  return sample_stratum(
      params, seed, max_attempts,
      [](const SevenCoords& s, const Params& p) { return close_O(s, p); },
      "sample_O");
}

Complex U1(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  if (std::abs(c.w1) < 1e-300 || std::abs(c.w2) < 1e-300)
    throw DegenerateDenominator("U1: w1 or w2 vanishes");
  return (c.y2 * c.w1 + c.x1 * c.w2 + c.z1 * (c.w3 + lam)) / c.w1 -
         (c.x2 * c.w1 + c.y1 * c.w2 + c.z2 * (c.w3 + lam)) / c.w2;
}

CVec9 U1_gradient(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  if (std::abs(c.w1) < 1e-300 || std::abs(c.w2) < 1e-300)
    throw DegenerateDenominator("U1_gradient: w1 or w2 vanishes");
  const Complex wl = c.w3 + lam;
  CVec9 d;
  d[0] = -(c.x1 * c.w2 + c.z1 * wl) / (c.w1 * c.w1) - c.x2 / c.w2;
  d[1] = c.x1 / c.w1 + (c.x2 * c.w1 + c.z2 * wl) / (c.w2 * c.w2);
  d[2] = c.z1 / c.w1 - c.z2 / c.w2;
  d[3] = c.w2 / c.w1;
  d[4] = -c.w1 / c.w2;
  d[5] = -1.0;
  d[6] = 1.0;
  d[7] = wl / c.w1;
  d[8] = -wl / c.w2;
  return d;
}

Complex U2(const ComplexState& c, const Params& params) {
  const CVec9 d = U1_gradient(c, params);
  const CVec9 f = Complex(0.0, 1.0) * field_complex(c, params);  // d/dt
  return c.w1 * c.w2 * (d.transpose() * f)(0);  // plain sum, no conjugation
}

Complex S_N(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  const Complex den = 2.0 * lam * (c.w1 * c.w2 + lam * c.w3);
  if (std::abs(den) < 1e-300)
    throw DegenerateDenominator("S_N: w1 w2 + lambda w3 vanishes");
  return (c.x1 * c.x2 * c.w3 - c.x2 * c.z1 * c.w1 - c.x1 * c.z2 * c.w2 -
          lam * c.z1 * c.z2) /
         den;
}

Complex S_O(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  const Complex den = 2.0 * c.w1 * c.w2 * (c.w3 - lam);
  if (std::abs(den) < 1e-300)
    throw DegenerateDenominator("S_O: w1 w2 (w3 - lambda) vanishes");
  return (c.x2 * c.z1 * c.w1 + c.x1 * c.z2 * c.w2 +
          c.z1 * c.z2 * (c.w3 + lam)) /
         den;
}

Complex T_N(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  return 2.0 * lam * lam * S_N(c, params);
}

Complex T_O(const ComplexState& c, const Params& params) {
  return c.x1 * c.x2 + c.z1 * c.z2 - 2.0 * c.w1 * c.w2 * S_O(c, params);
}

STPair lagrange_ST(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  const Complex D = c.x1 * c.w2 * c.w2 - c.x2 * c.w1 * c.w1 -
                    (c.z2 * c.w1 - c.z1 * c.w2) * lam;
  if (std::abs(D) < 1e-300)
    throw SingularDelta("lagrange_ST: Delta vanishes");
  STPair out;
  out.S = (c.x2 * c.y2 * c.w1 * c.w1 - c.x1 * c.y1 * c.w2 * c.w2 +
           (c.x2 * c.z1 * c.w1 - c.x1 * c.z2 * c.w2) * c.w3 +
           (c.y2 * c.z2 * c.w1 - c.y1 * c.z1 * c.w2) * lam) /
          (2.0 * D);
  const Complex A1 = (c.x1 * c.w2 + lam * c.z1) * c.y1 +
                     (c.x1 * c.w3 - c.z1 * c.w1) * c.z2;
  const Complex B1 = (c.w2 * c.w2 + c.x2) * c.w1 +
                     lam * c.w2 * (c.w3 - lam) + lam * c.z2;
  const Complex A2 = (c.x2 * c.w1 + lam * c.z2) * c.y2 +
                     (c.x2 * c.w3 - c.z2 * c.w2) * c.z1;
  const Complex B2 = (c.w1 * c.w1 + c.x1) * c.w2 +
                     lam * c.w1 * (c.w3 - lam) + lam * c.z1;
  out.T = (A1 * B1 - A2 * B2) / D;
  return out;
}

Complex bracket_U_closed(const ComplexState& c, const Params& params) {
  const Complex s = S_O(c, params);
  if (std::abs(s) < 1e-300) throw SZero("bracket_U_closed: s = 0");
  const auto I = integrals_complex(c, params);
  const Complex ht = I[0] - 0.5 * params.lambda() * params.lambda();
  return -(4.0 / s) *
         (3.0 * s * s * s * s - 2.0 * s * s * s * ht +
          0.25 * params.p4_minus_r4());
}

Complex bracket_F_closed(const ComplexState& c, const Params& params) {
  const double lam = params.lambda();
  const Complex s = S_N(c, params);
  if (std::abs(s) < 1e-300) throw SZero("bracket_F_closed: s = 0");
  const auto I = integrals_complex(c, params);
  const Complex h = I[0];
  const Complex w = c.w1 * c.w2 + lam * c.w3;
  const Complex prefactor =
      std::sqrt(Complex(2.0)) * lam * std::pow(w, 1.5) *
      std::sqrt((c.w2 * c.x1 + lam * c.z1) * (c.w1 * c.x2 + lam * c.z2));
  return prefactor * (1.0 / s) * (8.0 * s * s * s * lam * lam - params.r4()) *
         std::sqrt(2.0 * s * s - (2.0 * h + lam * lam) * s + params.p2());
}

Mat63c rank_matrix(const ComplexState& c, const Params& params) {
  const ComplexGradients gr = integral_gradients(c, params);
  Eigen::Matrix<Complex, 6, 9> X = Eigen::Matrix<Complex, 6, 9>::Zero();
  X(0, 0) = 1.0;
  X(1, 1) = 1.0;
  X(2, 2) = 1.0;
  X(3, 4) = c.z2;
  X(3, 6) = c.z1;
  X(3, 7) = -0.5 * c.x1;
  X(3, 8) = -0.5 * c.y1;
  X(4, 3) = c.z1;
  X(4, 5) = c.z2;
  X(4, 7) = -0.5 * c.y2;
  X(4, 8) = -0.5 * c.x2;
  X(5, 3) = c.x1;
  X(5, 4) = -c.x2;
  X(5, 5) = c.y1;
  X(5, 6) = -c.y2;
  Eigen::Matrix<Complex, 9, 3> grads;
  grads.col(0) = gr.dG;
  grads.col(1) = gr.dK;
  grads.col(2) = gr.dH;
  return X * grads;
}

int momentum_rank(const ComplexState& c, const Params& params, double tol) {
  const Mat63c M = rank_matrix(c, params);
  Eigen::JacobiSVD<Mat63c> svd(M);
  const auto& sv = svd.singularValues();
  if (sv[0] < 1e-9) return 0;
  int r = 0;
  for (int i = 0; i < 3; ++i)
    if (sv[i] > tol * sv[0]) ++r;
  return r;
}

}  // namespace kgyro
