#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kgyro/bifurcation.hpp"
#include "kgyro/critical.hpp"
#include "kgyro/lax.hpp"
#include "kgyro/phase.hpp"

using namespace kgyro;

namespace {

const Params P{1.1, 0.6, 0.35};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("the point branches at the shifted-energy origin") {
  const double h0 = 0.5 * P.lambda() * P.lambda();
  const auto [gp, gm] = gamma_lines(h0, P);
  CHECK(gp.g == 0.0);
  CHECK(gm.g == 0.0);
  CHECK(gp.k == doctest::Approx((P.a() + P.b()) * (P.a() + P.b())));
  CHECK(gm.k == doctest::Approx((P.a() - P.b()) * (P.a() - P.b())));
}

TEST_CASE("curve derivatives match central differences") {
  const double h = 1.7, ds = 1e-5;
  for (double s : {0.2, 0.9, -0.5, 3.0, -2.2}) {
    for (int which = 0; which < 2; ++which) {
      auto f = [&](double t) {
        return which == 0 ? gamma1(t, h, P) : gamma2(t, h, P);
      };
      const CurvePoint c = f(s);
      const CurvePoint cp = f(s + ds), cm = f(s - ds);
      CHECK(c.dg_ds ==
            doctest::Approx((cp.g - cm.g) / (2 * ds)).epsilon(1e-6));
      CHECK(c.dk_ds ==
            doctest::Approx((cp.k - cm.k) / (2 * ds)).epsilon(1e-6));
      // the tangency relation dk/ds = -(2/s) dg/ds coupling the two slopes
      CHECK(c.dk_ds ==
            doctest::Approx(-(2.0 / s) * c.dg_ds).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(gamma1(0.0, 1.0, P), SZero);
  CHECK_THROWS_AS(gamma2(0.0, 1.0, P), SZero);
}

TEST_CASE("sampled stratum points land on the curves at their parameter") {
  const ComplexState cn = sample_N(P, 23);
  const auto In = integrals_complex(cn, P);
  const double h = In[0].real(), k = In[1].real(), g = In[2].real();
  const double sn = S_N(cn, P).real();
  const CurvePoint c1 = gamma1(sn, h, P);
  CHECK(std::abs(c1.k - k) < 1e-8 * (1.0 + std::abs(k)));
  CHECK(std::abs(c1.g - g) < 1e-8 * (1.0 + std::abs(g)));

  const ComplexState co = sample_O(P, 23);
  const auto Io = integrals_complex(co, P);
  const double so = S_O(co, P).real();
  const CurvePoint c2 = gamma2(so, Io[0].real(), P);
  CHECK(std::abs(c2.k - Io[1].real()) < 1e-8 * (1.0 + std::abs(Io[1])));
  CHECK(std::abs(c2.g - Io[2].real()) < 1e-8 * (1.0 + std::abs(Io[2])));
}

TEST_CASE("lambda=0 degeneration of the first curve, and the energy shift") {
  const Params P0{1.1, 0.6, 0.0};
  // (p^2 h - 2g)^2 = r^4 k for every s
  for (double s : {0.3, 1.1, -0.8}) {
    const double h = 1.4;
    const CurvePoint c = gamma1(s, h, P0);
    const double lhs = P0.p2() * h - 2.0 * c.g;
    CHECK(std::abs(lhs * lhs - P0.r4() * c.k) < 1e-10 * (1.0 + lhs * lhs));
  }
  // the second curve and the point branches depend on (h, lambda) only
  // through h - lambda^2/2: dyadic values give bitwise equality
  const Params Ph{1.1, 0.6, 0.5};
  for (double s : {0.25, 2.0, -1.5}) {
    const CurvePoint c_shift = gamma2(s, 2.25, Ph);
    const CurvePoint c_plain = gamma2(s, 2.125, P0);
    CHECK(c_shift.g == c_plain.g);
    CHECK(c_shift.k == c_plain.k);
    CHECK(c_shift.dg_ds == c_plain.dg_ds);
    CHECK(c_shift.dk_ds == c_plain.dk_ds);
  }
  const auto [sp, sm] = gamma_lines(2.25, Ph);
  const auto [pp, pm] = gamma_lines(2.125, P0);
  CHECK(sp.g == pp.g);
  CHECK(sm.g == pm.g);
  CHECK(sp.k == pp.k);
  CHECK(sm.k == pm.k);
}

TEST_CASE("cusp of the first curve at the closed-form parameter") {
  const double s_cusp =
      std::cbrt(P.r4() / (8.0 * P.lambda() * P.lambda()));
  const CurvePoint c = gamma1(s_cusp, 2.0, P);
  CHECK(std::abs(c.dg_ds) < 1e-12);
  CHECK(std::abs(c.dk_ds) < 1e-12);
  const Diagram d = sigma_h(2.0, P);
  bool found = false;
  for (const auto& sp : d.singular)
    if (sp.kind == SingularKind::Cusp && sp.branches[0] == Branch::Gamma1 &&
        std::abs(sp.s_values[0] - s_cusp) < 1e-8)
      found = true;
  CHECK(found);
}

TEST_CASE("diagram regression: singular points at a fixed parameter set") {
  const Params Pf{1.0, 0.5, 0.1};
  const Diagram d = sigma_h(2.0, Pf, GridSpec{});
  int cusps1 = 0, cusps2 = 0, asymptotes = 0;
  for (const auto& sp : d.singular) {
    if (sp.kind == SingularKind::Cusp) {
      if (sp.branches[0] == Branch::Gamma1) ++cusps1;
      if (sp.branches[0] == Branch::Gamma2) ++cusps2;
    }
    if (sp.kind == SingularKind::SZeroAsymptote) ++asymptotes;
  }
  CHECK(cusps1 == 1);
  CHECK(cusps2 == 2);
  CHECK(asymptotes == 2);
  // curve samples cover both signs of s on both curves
  int n1p = 0, n1m = 0, n2p = 0, n2m = 0;
  for (const auto& s : d.samples) {
    if (s.branch == Branch::Gamma1) (s.s > 0 ? n1p : n1m)++;
    if (s.branch == Branch::Gamma2) (s.s > 0 ? n2p : n2m)++;
  }
  CHECK(n1p >= 4000);
  CHECK(n1m >= 4000);
  CHECK(n2p >= 4000);
  CHECK(n2m >= 4000);
}

TEST_CASE("CSV export round-trips bit for bit") {
  const Diagram d = sigma_h(1.3, P);
  const std::string p1 = "/tmp/kgyro_test_rt1.csv";
  const std::string p2 = "/tmp/kgyro_test_rt2.csv";
  export_diagram(d, "csv", p1);
  const auto samples = read_diagram_csv(p1);
  REQUIRE(samples.size() == d.samples.size());
  Diagram d2;
  d2.h = d.h;
  d2.samples = samples;
  export_diagram(d2, "csv", p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(!slurp(p1).empty());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("SVG export produces a well-formed document") {
  const Diagram d = sigma_h(1.3, P);
  const std::string path = "/tmp/kgyro_test_fig.svg";
  export_diagram(d, "svg", path);
  const std::string body = slurp(path);
  CHECK(body.rfind("<?xml", 0) == 0);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
  CHECK(body.find("polyline") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("export and parse failure modes") {
  const Diagram d = sigma_h(1.3, P);
  CHECK_THROWS_AS(export_diagram(d, "csv", "/nonexistent-dir/x.csv"),
                  IOFailure);
  CHECK_THROWS_AS(export_diagram(d, "png", "/tmp/x.png"), Error);
  CHECK_THROWS_AS(read_diagram_csv("/nonexistent-dir/x.csv"), IOFailure);
  CHECK_THROWS_AS(branch_from_name("gamma3"), Error);
}
