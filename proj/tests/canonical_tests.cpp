#include <doctest.h>

#include <random>

#include "kgyro/canonical.hpp"
#include "kgyro/sampling.hpp"

using namespace kgyro;

namespace {

Mat32 random_mat32(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat32 A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) A(i, j) = nd(rng);
  return A;
}

Mat2 random_glpos2(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  for (;;) {
    Mat2 D;
    D << nd(rng), nd(rng), nd(rng), nd(rng);
    if (std::abs(D.determinant()) > 0.1) return D;
  }
}

GroupElement random_group(std::mt19937_64& rng) {
  GroupElement g;
  g.Lambda = random_rotation(rng);
  g.D = random_glpos2(rng);
  return g;
}

DGParams random_problem(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  DGParams P;
  Mat3 S;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) S(i, j) = nd(rng);
  P.inertia = S * S.transpose() + 3.0 * Mat3::Identity();
  P.gyro = Vec3(nd(rng), nd(rng), nd(rng));
  P.A = random_mat32(rng);
  Mat2 T = random_glpos2(rng);
  P.C = T * T.transpose();
  return P;
}

}  // namespace

TEST_CASE("columnwise cross products are rotation equivariant") {
  std::mt19937_64 rng(301);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 L = random_rotation(rng);
    const Mat32 A = random_mat32(rng), B = random_mat32(rng);
    const Vec3 lhs = col_cross(A, B);
    CHECK((L * lhs - col_cross(L * A, L * B)).cwiseAbs().maxCoeff() < 1e-12);
    // antisymmetry
    CHECK((col_cross(A, B) + col_cross(B, A)).cwiseAbs().maxCoeff() < 1e-12);
    // vec_cross_mat is the columnwise a x .
    const Vec3 a = A.col(0).cross(Vec3::UnitZ()) + B.col(1);
    const Mat32 V = vec_cross_mat(a, A);
    for (int j = 0; j < 2; ++j)
      CHECK((V.col(j) - a.cross(A.col(j))).cwiseAbs().maxCoeff() < 1e-12);
    // mixing the columns by D on both slots contracts through D^T D
    const Mat2 D = random_glpos2(rng);
    const Mat2 Gm = D.transpose() * D;
    Vec3 mixed = Vec3::Zero();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        mixed += Gm(r, c) * A.col(r).cross(B.col(c));
    CHECK((col_cross(A * D.transpose(), B * D.transpose()) - mixed)
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("group action composes") {
  std::mt19937_64 rng(302);
  for (int i = 0; i < 200; ++i) {
    const GroupElement g1 = random_group(rng), g2 = random_group(rng);
    GroupElement g12;
    g12.Lambda = g1.Lambda * g2.Lambda;
    g12.D = g1.D * g2.D;
    const Vec3 om = Vec3::Random();
    const Mat32 U = random_mat32(rng);
    const auto [o1, U1] = act(g1, act(g2, om, U).first, act(g2, om, U).second);
    const auto [o2, U2] = act(g12, om, U);
    CHECK((o1 - o2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((U1 - U2).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("parameter action composes and inverts") {
  std::mt19937_64 rng(303);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g = random_group(rng);
    GroupElement ginv;
    ginv.Lambda = g.Lambda.transpose();
    ginv.D = g.D.inverse();
    const DGParams P = random_problem(rng);
    const DGParams back = act_params(ginv, act_params(g, P));
    CHECK((back.inertia - P.inertia).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.gyro - P.gyro).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.A - P.A).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.C - P.C).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("canonicalize recovers the intensities of a disguised problem") {
  std::mt19937_64 rng(304);
  for (int i = 0; i < 100; ++i) {
    const double a = 1.0 + i * 0.01, b = 0.4;
    DGParams canon;
    canon.inertia = Vec3(2.0, 2.0, 1.0).asDiagonal();
    canon.gyro = Vec3(0.0, 0.0, 0.7);
    canon.A << 1, 0, 0, 1, 0, 0;
    canon.C = Eigen::Vector2d(a * a, b * b).asDiagonal();
    const GroupElement g = random_group(rng);
    const DGParams disguised = act_params(g, canon);
    CHECK(disguised.independent());
    const CanonicalizeResult res = canonicalize(disguised);
    CHECK(res.a == doctest::Approx(a).epsilon(1e-9));
    CHECK(res.b == doctest::Approx(b).epsilon(1e-9));
    CHECK(!res.reducible_flag);
    // the result element really carries the problem back to canonical form
    const DGParams back = act_params(res.g, disguised);
    CHECK((back.A - canon.A).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((back.C - Mat2(Eigen::Vector2d(a * a, b * b).asDiagonal()))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
}

TEST_CASE("canonicalize is idempotent and flags the reducible case") {
  DGParams canon;
  canon.inertia = Vec3(2.0, 2.0, 1.0).asDiagonal();
  canon.gyro = Vec3(0.0, 0.0, 0.3);
  canon.A << 1, 0, 0, 1, 0, 0;
  canon.C = Eigen::Vector2d(1.21, 0.36).asDiagonal();
  const CanonicalizeResult res = canonicalize(canon);
  CHECK(res.a == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(res.b == doctest::Approx(0.6).epsilon(1e-12));
  CHECK((res.g.Lambda - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);

  DGParams red = canon;
  red.C = Mat2::Identity();
  CHECK(canonicalize(red).reducible_flag);
}

TEST_CASE("equations of motion are equivariant under the group") {
  std::mt19937_64 rng(305);
  for (int i = 0; i < 50; ++i) {
    const DGParams P = random_problem(rng);
    const GroupElement g = random_group(rng);
    const Vec3 om = Vec3::Random();
    const Mat32 U = random_mat32(rng);
    const auto [fo, fU] = dg_field(P, om, U);
    const auto [go, gU] = act(g, om, U);
    const auto [fo2, fU2] = dg_field(act_params(g, P), go, gU);
    const auto [ao, aU] = act(g, fo, fU);
    CHECK((fo2 - ao).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((fU2 - aU).cwiseAbs().maxCoeff() < 1e-9);
  }
}
