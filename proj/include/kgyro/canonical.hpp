#pragma once

#include <Eigen/Dense>
#include <utility>

#include "kgyro/params.hpp"
#include "kgyro/phase.hpp"

namespace kgyro {

using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;

/// Full parameter set of a gyrostat-in-two-fields problem: inertia tensor,
/// gyrostatic momentum, application radii (columns of A) and the field Gram
/// matrix C.
struct DGParams {
  Mat3 inertia = Mat3::Identity();
  Vec3 gyro = Vec3::Zero();
  Mat32 A = Mat32::Zero();
  Mat2 C = Mat2::Identity();

  bool independent(double tol = 1e-12) const;
};

/// Element (Lambda, D) of the equivalence group SO(3) x GL(2,R).
struct GroupElement {
  Mat3 Lambda = Mat3::Identity();
  Mat2 D = Mat2::Identity();
};

struct CanonicalizeResult {
  GroupElement g;
  double a = 0.0, b = 0.0;
  Vec3 gyro_rotated = Vec3::Zero();
  bool reducible_flag = false;  // |a-b| below tolerance

  Params params() const;
};

/// Columnwise cross-product sum:  sum_i c_i(A) x c_i(B).
Vec3 col_cross(const Mat32& A, const Mat32& B);

/// Columnwise cross product a x A.
Mat32 vec_cross_mat(const Vec3& a, const Mat32& A);

/// Phase-space action Psi(Lambda,D)(omega,U) = (Lambda omega, Lambda U D^T).
std::pair<Vec3, Mat32> act(const GroupElement& g, const Vec3& omega,
                           const Mat32& U);

/// Parameter action psi(Lambda,D)(I,l,A,C) = (L I L^T, L l, L A D^{-1}, D C D^T).
DGParams act_params(const GroupElement& g, const DGParams& P);

/// Orthogonalization: returns (Lambda, D) carrying P to the canonical problem
/// with A = ||e1 e2|| and C = diag(a^2, b^2), a >= b > 0.
CanonicalizeResult canonicalize(const DGParams& P, double reducible_tol = 1e-9);

/// General equations of motion for an arbitrary DG problem (used by the
/// equivariance tests): returns (d omega/dt, dU/dt).
std::pair<Vec3, Mat32> dg_field(const DGParams& P, const Vec3& omega,
                                const Mat32& U);

}  // namespace kgyro
