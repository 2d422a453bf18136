#include "kgyro/canonical.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace kgyro {

bool DGParams::independent(double tol) const {
  Eigen::JacobiSVD<Mat32> svd(A);
  if (svd.singularValues()[1] <= tol * svd.singularValues()[0]) return false;
  Eigen::SelfAdjointEigenSolver<Mat2> es(C);
  return es.eigenvalues()[0] > tol * std::abs(es.eigenvalues()[1]);
}

Params CanonicalizeResult::params() const {
  return Params(a, b, gyro_rotated[2]);
}

Vec3 col_cross(const Mat32& A, const Mat32& B) {
  return Vec3(A.col(0)).cross(Vec3(B.col(0))) +
         Vec3(A.col(1)).cross(Vec3(B.col(1)));
}

Mat32 vec_cross_mat(const Vec3& a, const Mat32& A) {
  Mat32 out;
  out.col(0) = a.cross(Vec3(A.col(0)));
  out.col(1) = a.cross(Vec3(A.col(1)));
  return out;
}

std::pair<Vec3, Mat32> act(const GroupElement& g, const Vec3& omega,
                           const Mat32& U) {
  return {g.Lambda * omega, g.Lambda * U * g.D.transpose()};
}

DGParams act_params(const GroupElement& g, const DGParams& P) {
  if (std::abs(g.D.determinant()) < 1e-300)
    throw SingularD("act_params: D is singular");
  DGParams out;
  out.inertia = g.Lambda * P.inertia * g.Lambda.transpose();
  out.gyro = g.Lambda * P.gyro;
  out.A = g.Lambda * P.A * g.D.inverse();
  out.C = g.D * P.C * g.D.transpose();
  return out;
}

CanonicalizeResult canonicalize(const DGParams& P, double reducible_tol) {
  if (!P.independent())
    throw DependentFields("canonicalize: fields are not independent");

  // D from the Cholesky factor of A* = (A^T A)^{-1}: D0 A* D0^T = Id.
  const Mat2 AtA = P.A.transpose() * P.A;
  const Mat2 Astar = AtA.inverse();
  Eigen::LLT<Mat2> llt(Astar);
  if (llt.info() != Eigen::Success)
    throw DependentFields("canonicalize: A^T A not positive definite");
  const Mat2 L = llt.matrixL();
  const Mat2 D0 = L.inverse();

  // Diagonalize the congruence-transformed C; D = V^T D0.
  const Mat2 Ct = D0 * P.C * D0.transpose();
  Eigen::SelfAdjointEigenSolver<Mat2> es(Ct);
  if (es.eigenvalues()[0] <= 0.0)
    throw DependentFields("canonicalize: C not positive definite");

  // Descending order gives a >= b; fix eigenvector signs for determinism.
  Mat2 V;
  V.col(0) = es.eigenvectors().col(1);
  V.col(1) = es.eigenvectors().col(0);
  for (int j = 0; j < 2; ++j)
    if (V(j, j) < 0.0) V.col(j) *= -1.0;
  Mat2 D = V.transpose() * D0;

  const double a = std::sqrt(es.eigenvalues()[1]);
  const double b = std::sqrt(es.eigenvalues()[0]);

  // Columns of A D^{-1} are orthonormal; Lambda maps them to e1, e2 and the
  // right-handed completion to e3 (det Lambda = 1 automatically).
  const Mat32 AD = P.A * D.inverse();
  Mat3 frame;
  frame.col(0) = AD.col(0);
  frame.col(1) = AD.col(1);
  frame.col(2) = Vec3(AD.col(0)).cross(Vec3(AD.col(1)));
  CanonicalizeResult res;
  res.g.Lambda = frame.transpose();
  res.g.D = D;
  res.a = a;
  res.b = b;
  res.gyro_rotated = res.g.Lambda * P.gyro;
  res.reducible_flag = std::abs(a - b) < reducible_tol * std::max(a, 1.0);
  return res;
}

std::pair<Vec3, Mat32> dg_field(const DGParams& P, const Vec3& omega,
                                const Mat32& U) {
  const Vec3 M = P.inertia * omega + P.gyro;
  const Vec3 domega =
      P.inertia.ldlt().solve(M.cross(omega) + col_cross(P.A, U));
  const Mat32 dU = -vec_cross_mat(omega, U);
  return {domega, dU};
}

}  // namespace kgyro
