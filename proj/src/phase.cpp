#include "kgyro/phase.hpp"

#include <algorithm>
#include <cmath>

namespace kgyro {

Vec9 PhaseState::as_vector() const {
  Vec9 v;
  v << omega, alpha, beta;
  return v;
}

PhaseState PhaseState::from_vector(const Vec9& v) {
  PhaseState s;
  s.omega = v.segment<3>(0);
  s.alpha = v.segment<3>(3);
  s.beta = v.segment<3>(6);
  return s;
}

CVec9 ComplexState::as_vector() const {
  CVec9 v;
  v << w1, w2, w3, x1, x2, y1, y2, z1, z2;
  return v;
}

ComplexState ComplexState::from_vector(const CVec9& v) {
  ComplexState c;
  c.w1 = v[0]; c.w2 = v[1]; c.w3 = v[2];
  c.x1 = v[3]; c.x2 = v[4];
  c.y1 = v[5]; c.y2 = v[6];
  c.z1 = v[7]; c.z2 = v[8];
  return c;
}

double ComplexState::realness_defect() const {
  double d = std::abs(w2 - std::conj(w1));
  d = std::max(d, std::abs(x2 - std::conj(x1)));
  d = std::max(d, std::abs(y2 - std::conj(y1)));
  d = std::max(d, std::abs(z2 - std::conj(z1)));
  d = std::max(d, std::abs(w3.imag()));
  return d;
}

ComplexState complexify(const PhaseState& s) {
  const double a1 = s.alpha[0], a2 = s.alpha[1], a3 = s.alpha[2];
  const double b1 = s.beta[0], b2 = s.beta[1], b3 = s.beta[2];
  const double o1 = s.omega[0], o2 = s.omega[1], o3 = s.omega[2];
  ComplexState c;
  c.x1 = Complex(a1 - b2, a2 + b1);
  c.x2 = Complex(a1 - b2, -(a2 + b1));
  c.y1 = Complex(a1 + b2, a2 - b1);
  c.y2 = Complex(a1 + b2, -(a2 - b1));
  c.z1 = Complex(a3, b3);
  c.z2 = Complex(a3, -b3);
  c.w1 = Complex(o1, o2);
  c.w2 = Complex(o1, -o2);
  c.w3 = Complex(o3, 0.0);
  return c;
}

PhaseState realify(const ComplexState& c, double tol) {
  if (c.realness_defect() > tol)
    throw NotRealImage("realify: state is not the image of a real point");
  PhaseState s;
  s.omega = Vec3(c.w1.real(), c.w1.imag(), c.w3.real());
  const Complex xy_sum = c.x1 + c.y1;   // 2 alpha1 + 2 i alpha2
  const Complex yx_diff = c.y1 - c.x1;  // 2 beta2 - 2 i beta1
  s.alpha = Vec3(0.5 * xy_sum.real(), 0.5 * xy_sum.imag(), c.z1.real());
  s.beta = Vec3(-0.5 * yx_diff.imag(), 0.5 * yx_diff.real(), c.z1.imag());
  return s;
}

Vec3 casimir_residuals(const PhaseState& s, const Params& params) {
  return Vec3(s.alpha.squaredNorm() - params.a() * params.a(),
              s.beta.squaredNorm() - params.b() * params.b(),
              s.alpha.dot(s.beta));
}

bool on_orbit(const PhaseState& s, const Params& params, double tol) {
  return casimir_residuals(s, params).cwiseAbs().maxCoeff() <= tol;
}

IntegralTriple integrals_unchecked(const PhaseState& s, const Params& params) {
  const double lam = params.lambda();
  const double o1 = s.omega[0], o2 = s.omega[1], o3 = s.omega[2];
  const double a1 = s.alpha[0];
  const double b2 = s.beta[1];

  IntegralTriple out;
  out.h = o1 * o1 + o2 * o2 + 0.5 * o3 * o3 - a1 - b2;

  const double k1 = o1 * o1 - o2 * o2 + a1 - b2;
  const double k2 = 2.0 * o1 * o2 + s.alpha[1] + s.beta[0];
  out.k = k1 * k1 + k2 * k2 +
          2.0 * lam * ((o3 - lam) * (o1 * o1 + o2 * o2) +
                       2.0 * o1 * s.alpha[2] + 2.0 * o2 * s.beta[2]);

  const Vec3 M(2.0 * o1, 2.0 * o2, o3 + lam);
  const double Ma = M.dot(s.alpha);
  const double Mb = M.dot(s.beta);
  const double Mg = M.dot(s.alpha.cross(s.beta));
  out.g = 0.25 * (Ma * Ma + Mb * Mb) + 0.5 * (o3 - lam) * Mg -
          params.b() * params.b() * a1 - params.a() * params.a() * b2;
  return out;
}

IntegralTriple integrals(const PhaseState& s, const Params& params,
                         double orbit_tol) {
  if (!on_orbit(s, params, orbit_tol))
    throw OffOrbit("integrals: Casimir residuals exceed tolerance");
  return integrals_unchecked(s, params);
}

std::array<Complex, 3> orbit_constraints(const ComplexState& c,
                                         const Params& params) {
  const double r2 = params.r2(), p2 = params.p2();
  return {c.z1 * c.z1 + c.x1 * c.y2 - r2,
          c.z2 * c.z2 + c.x2 * c.y1 - r2,
          c.x1 * c.x2 + c.y1 * c.y2 + 2.0 * c.z1 * c.z2 - 2.0 * p2};
}

std::array<Complex, 3> integrals_complex(const ComplexState& c,
                                         const Params& params) {
  const double lam = params.lambda();
  const double p2 = params.p2(), r2 = params.r2();
  const Complex &w1 = c.w1, &w2 = c.w2, &w3 = c.w3;
  const Complex &x1 = c.x1, &x2 = c.x2, &y1 = c.y1, &y2 = c.y2;
  const Complex &z1 = c.z1, &z2 = c.z2;

  const Complex H = w1 * w2 + 0.5 * w3 * w3 - 0.5 * (y1 + y2);
  const Complex K = (w1 * w1 + x1) * (w2 * w2 + x2) +
                    2.0 * lam * (w1 * w2 * w3 + z2 * w1 + z1 * w2) -
                    2.0 * lam * lam * w1 * w2;
  const Complex G =
      0.25 * (p2 - x1 * x2) * w3 * w3 +
      0.5 * (x2 * z1 * w1 + x1 * z2 * w2) * w3 +
      0.25 * (x2 * w1 + y1 * w2) * (y2 * w1 + x1 * w2) -
      0.25 * p2 * (y1 + y2) + 0.25 * r2 * (x1 + x2) +
      0.5 * lam * (z1 * z2 * w3 + y2 * z2 * w1 + y1 * z1 * w2) +
      0.25 * lam * lam * (p2 - y1 * y2);
  return {H, K, G};
}

ComplexGradients integral_gradients(const ComplexState& c,
                                    const Params& params) {
  const double lam = params.lambda();
  const double p2 = params.p2(), r2 = params.r2();
  const Complex &w1 = c.w1, &w2 = c.w2, &w3 = c.w3;
  const Complex &x1 = c.x1, &x2 = c.x2, &y1 = c.y1, &y2 = c.y2;
  const Complex &z1 = c.z1, &z2 = c.z2;

  ComplexGradients gr;
  gr.dH << w2, w1, w3, 0.0, 0.0, -0.5, -0.5, 0.0, 0.0;

  gr.dK << 2.0 * w1 * (w2 * w2 + x2) + 2.0 * lam * (w2 * w3 + z2) -
               2.0 * lam * lam * w2,
      2.0 * w2 * (w1 * w1 + x1) + 2.0 * lam * (w1 * w3 + z1) -
          2.0 * lam * lam * w1,
      2.0 * lam * w1 * w2, w2 * w2 + x2, w1 * w1 + x1, 0.0, 0.0,
      2.0 * lam * w2, 2.0 * lam * w1;

  const Complex A = x2 * w1 + y1 * w2;
  const Complex B = y2 * w1 + x1 * w2;
  gr.dG << 0.5 * x2 * z1 * w3 + 0.25 * (x2 * B + y2 * A) + 0.5 * lam * y2 * z2,
      0.5 * x1 * z2 * w3 + 0.25 * (y1 * B + x1 * A) + 0.5 * lam * y1 * z1,
      0.5 * (p2 - x1 * x2) * w3 + 0.5 * (x2 * z1 * w1 + x1 * z2 * w2) +
          0.5 * lam * z1 * z2,
      -0.25 * x2 * w3 * w3 + 0.5 * z2 * w2 * w3 + 0.25 * A * w2 + 0.25 * r2,
      -0.25 * x1 * w3 * w3 + 0.5 * z1 * w1 * w3 + 0.25 * B * w1 + 0.25 * r2,
      0.25 * w2 * B - 0.25 * p2 + 0.5 * lam * z1 * w2 - 0.25 * lam * lam * y2,
      0.25 * w1 * A - 0.25 * p2 + 0.5 * lam * z2 * w1 - 0.25 * lam * lam * y1,
      0.5 * x2 * w1 * w3 + 0.5 * lam * (z2 * w3 + y1 * w2),
      0.5 * x1 * w2 * w3 + 0.5 * lam * (z1 * w3 + y2 * w1);
  return gr;
}

}  // namespace kgyro
