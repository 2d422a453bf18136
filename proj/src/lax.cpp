#include "kgyro/lax.hpp"

#include <cmath>

#include "kgyro/dynamics.hpp"
#include "kgyro/errors.hpp"

namespace kgyro {

namespace {

// L depends linearly on the nine coordinates; `kappa_terms` toggles the
// constant lambda / kappa contributions (dropped when assembling L').
Mat4c build_L(const ComplexState& c, double lambda, Complex kappa,
              bool kappa_terms) {
  const Complex k = kappa;
  const Complex lam = kappa_terms ? Complex(lambda) : Complex(0.0);
  const Complex four_k = kappa_terms ? 4.0 * kappa : Complex(0.0);
  Mat4c L;
  L << 2.0 * lam, c.x2 / k, -2.0 * c.w2, c.z2 / k,
      -c.x1 / k, -2.0 * lam, -c.z1 / k, 2.0 * c.w1,
      -2.0 * c.w1, c.z2 / k, -2.0 * c.w3, -c.y1 / k - four_k,
      -c.z1 / k, 2.0 * c.w2, c.y2 / k + four_k, 2.0 * c.w3;
  return L;
}

}  // namespace

LaxPair lax_matrices(const ComplexState& c, const Params& params,
                     Complex kappa) {
  if (kappa == Complex(0.0)) throw ZeroKappa("lax_matrices: kappa must be nonzero");
  LaxPair P;
  P.L = build_L(c, params.lambda(), kappa, true);
  P.M << -0.5 * c.w3, 0.0, 0.5 * c.w2, 0.0,
      0.0, 0.5 * c.w3, 0.0, -0.5 * c.w1,
      0.5 * c.w1, 0.0, 0.5 * c.w3, kappa,
      0.0, -0.5 * c.w2, -kappa, -0.5 * c.w3;
  return P;
}

Mat4c lax_derivative(const ComplexState& c, const Params& params,
                     Complex kappa) {
  if (kappa == Complex(0.0)) throw ZeroKappa("lax_derivative: kappa must be nonzero");
  const ComplexState dot = ComplexState::from_vector(field_complex(c, params));
  return build_L(dot, params.lambda(), kappa, false);
}

double lax_residual(const ComplexState& c, const Params& params,
                    Complex kappa) {
  const LaxPair P = lax_matrices(c, params, kappa);
  const Mat4c R = lax_derivative(c, params, kappa) - (P.L * P.M - P.M * P.L);
  return R.cwiseAbs().maxCoeff();
}

std::array<Complex, 5> char_poly(const Mat4c& A) {
  // Faddeev-LeVerrier: M1 = A, c_{n-k} from traces.
  std::array<Complex, 5> c;
  c[0] = 1.0;
  Mat4c M = A;
  for (int k = 1; k <= 4; ++k) {
    c[static_cast<size_t>(k)] = -M.trace() / static_cast<double>(k);
    if (k < 4) M = A * (M + c[static_cast<size_t>(k)] * Mat4c::Identity());
  }
  return c;
}

std::array<double, 5> spectral_coeffs(const IntegralTriple& I, double kappa,
                                      const Params& params) {
  if (kappa == 0.0) throw ZeroKappa("spectral_coeffs: kappa must be nonzero");
  const double s = 2.0 * kappa * kappa;
  const double lam = params.lambda(), lam2 = lam * lam;
  const double p2 = params.p2(), r4 = params.r4();
  const double c2 = 4.0 * (p2 / s - (2.0 * I.h + lam2) + 2.0 * s);
  const double c0 =
      4.0 * (r4 / (s * s) + (2.0 / s) * (4.0 * I.g - 2.0 * p2 * I.h - p2 * lam2) +
             4.0 * (I.k + 2.0 * lam2 * I.h) - 8.0 * lam2 * s);
  return {1.0, 0.0, c2, 0.0, c0};
}

double spectral_residual(const ComplexState& c, const Params& params,
                         Complex kappa) {
  if (kappa == Complex(0.0))
    throw ZeroKappa("spectral_residual: kappa must be nonzero");
  const auto I = integrals_complex(c, params);
  const Complex h = I[0], k = I[1], g = I[2];
  const Complex s = 2.0 * kappa * kappa;
  const double lam2 = params.lambda() * params.lambda();
  const double p2 = params.p2(), r4 = params.r4();
  // Complex-valued analogue of spectral_coeffs; off the real image the
  // integrals (and hence the curve) acquire imaginary parts.
  const Complex c2 = 4.0 * (p2 / s - (2.0 * h + lam2) + 2.0 * s);
  const Complex c0 =
      4.0 * (r4 / (s * s) + (2.0 / s) * (4.0 * g - 2.0 * p2 * h - p2 * lam2) +
             4.0 * (k + 2.0 * lam2 * h) - 8.0 * lam2 * s);
  const std::array<Complex, 5> expect{1.0, 0.0, c2, 0.0, c0};
  const auto actual = char_poly(lax_matrices(c, params, kappa).L);
  double res = 0.0;
  for (size_t i = 0; i < 5; ++i)
    res = std::max(res, std::abs(actual[i] - expect[i]));
  return res;
}

}  // namespace kgyro
