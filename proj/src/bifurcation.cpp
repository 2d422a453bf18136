#include "kgyro/bifurcation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kgyro/errors.hpp"

namespace kgyro {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::GammaPlus: return "gamma_plus";
    case Branch::GammaMinus: return "gamma_minus";
    case Branch::Gamma1: return "gamma1";
    case Branch::Gamma2: return "gamma2";
  }
  return "?";
}

Branch branch_from_name(const std::string& name) {
  if (name == "gamma_plus") return Branch::GammaPlus;
  if (name == "gamma_minus") return Branch::GammaMinus;
  if (name == "gamma1") return Branch::Gamma1;
  if (name == "gamma2") return Branch::Gamma2;
  throw Error("unknown branch name: " + name);
}

std::pair<GammaPoint, GammaPoint> gamma_lines(double h, const Params& params) {
  const double a = params.a(), b = params.b();
  const double ht = h - 0.5 * params.lambda() * params.lambda();
  GammaPoint plus{-a * b * ht, (a + b) * (a + b)};
  GammaPoint minus{a * b * ht, (a - b) * (a - b)};
  return {plus, minus};
}

CurvePoint gamma1(double s, double h, const Params& params) {
  if (s == 0.0) throw SZero("gamma1: s = 0");
  const double lam2 = params.lambda() * params.lambda();
  const double r4 = params.r4(), p2 = params.p2();
  CurvePoint c;
  c.k = 4.0 * lam2 * s - 2.0 * lam2 * h + r4 / (4.0 * s * s);
  c.g = -lam2 * s * s + 0.5 * p2 * (h + 0.5 * lam2) - r4 / (4.0 * s);
  c.dk_ds = 4.0 * lam2 - r4 / (2.0 * s * s * s);
  c.dg_ds = -2.0 * lam2 * s + r4 / (4.0 * s * s);
  return c;
}

CurvePoint gamma2(double s, double h, const Params& params) {
  if (s == 0.0) throw SZero("gamma2: s = 0");
  const double ht = h - 0.5 * params.lambda() * params.lambda();
  const double q = params.p4_minus_r4();  // = 4 a^2 b^2
  const double p2 = params.p2();
  CurvePoint c;
  c.k = 3.0 * s * s - 4.0 * ht * s + p2 + ht * ht - q / (4.0 * s * s);
  c.g = -s * s * s + ht * s * s + q / (4.0 * s);
  c.dk_ds = 6.0 * s - 4.0 * ht + q / (2.0 * s * s * s);
  c.dg_ds = -3.0 * s * s + 2.0 * ht * s - q / (4.0 * s * s);
  return c;
}

namespace {

CurvePoint eval_curve(Branch b, double s, double h, const Params& params) {
  return b == Branch::Gamma1 ? gamma1(s, h, params) : gamma2(s, h, params);
}

bool jump_ok(const CurvePoint& a, const CurvePoint& b, double bound) {
  const double dg = std::abs(a.g - b.g);
  const double dk = std::abs(a.k - b.k);
  const double sg = 1.0 + std::max(std::abs(a.g), std::abs(b.g));
  const double sk = 1.0 + std::max(std::abs(a.k), std::abs(b.k));
  return dg <= bound * sg && dk <= bound * sk;
}

void refine_interval(Branch br, double s0, const CurvePoint& c0, double s1,
                     const CurvePoint& c1, double h, const Params& params,
                     const GridSpec& grid, int depth,
                     std::vector<DiagramSample>& out) {
  if (jump_ok(c0, c1, grid.jump_bound) || std::abs(s1 - s0) < 1e-15) {
    out.push_back({s1, br, c1.g, c1.k, c1.dg_ds, c1.dk_ds});
    return;
  }
  if (depth >= grid.max_refine_depth)
    throw GridTooCoarse("sigma_h: refinement budget exhausted near s = " +
                        std::to_string(s0));
  const double sm = 0.5 * (s0 + s1);
  const CurvePoint cm = eval_curve(br, sm, h, params);
  refine_interval(br, s0, c0, sm, cm, h, params, grid, depth + 1, out);
  refine_interval(br, sm, cm, s1, c1, h, params, grid, depth + 1, out);
}

// Scalar damped Newton on dg/ds (cusps satisfy dg/ds = dk/ds = 0
// simultaneously; the two derivative zeros coincide on both curves).
struct DgDeriv {
  double value, slope;
};

DgDeriv dg_and_slope(Branch br, double s, double h, const Params& params) {
  const double lam2 = params.lambda() * params.lambda();
  if (br == Branch::Gamma1) {
    const double r4 = params.r4();
    return {-2.0 * lam2 * s + r4 / (4.0 * s * s),
            -2.0 * lam2 - r4 / (2.0 * s * s * s)};
  }
  const double ht = h - 0.5 * lam2;
  const double q = params.p4_minus_r4();
  return {-3.0 * s * s + 2.0 * ht * s - q / (4.0 * s * s),
          -6.0 * s + 2.0 * ht + q / (2.0 * s * s * s)};
}

bool newton_cusp(Branch br, double& s, double h, const Params& params) {
  for (int it = 0; it < 100; ++it) {
    const DgDeriv d = dg_and_slope(br, s, h, params);
    if (std::abs(d.slope) < 1e-300) return false;
    double step = -d.value / d.slope;
    double t = 1.0;
    while (t > 1e-6) {
      const double sn = s + t * step;
      if (sn != 0.0 && sn * s > 0.0 &&
          std::abs(dg_and_slope(br, sn, h, params).value) <=
              (1.0 - 0.25 * t) * std::abs(d.value))
        break;
      t /= 2.0;
    }
    s += t * step;
    if (std::abs(t * step) < 1e-14 * (1.0 + std::abs(s))) break;
  }
  const CurvePoint c = eval_curve(br, s, h, params);
  const double scale = 1.0 + std::abs(s) * std::abs(s);
  return std::abs(c.dg_ds) < 1e-8 * scale && std::abs(c.dk_ds) < 1e-6 * scale;
}

// 2D damped Newton for g_a(s1) = g_b(s2), k_a(s1) = k_b(s2).
bool newton_pair(Branch ba, Branch bb, double& s1, double& s2, double h,
                 const Params& params) {
  auto res = [&](double u, double v) {
    const CurvePoint p = eval_curve(ba, u, h, params);
    const CurvePoint q = eval_curve(bb, v, h, params);
    return Eigen::Vector2d(p.g - q.g, p.k - q.k);
  };
  for (int it = 0; it < 100; ++it) {
    const CurvePoint p = eval_curve(ba, s1, h, params);
    const CurvePoint q = eval_curve(bb, s2, h, params);
    const Eigen::Vector2d f(p.g - q.g, p.k - q.k);
    Eigen::Matrix2d J;
    J << p.dg_ds, -q.dg_ds, p.dk_ds, -q.dk_ds;
    if (std::abs(J.determinant()) < 1e-300) return false;
    const Eigen::Vector2d step = J.partialPivLu().solve(-f);
    double t = 1.0;
    while (t > 1e-6) {
      const double u = s1 + t * step[0], v = s2 + t * step[1];
      if (u != 0.0 && v != 0.0 && u * s1 > 0.0 && v * s2 > 0.0 &&
          res(u, v).norm() <= (1.0 - 0.25 * t) * f.norm())
        break;
      t /= 2.0;
    }
    s1 += t * step[0];
    s2 += t * step[1];
    if (t * step.norm() < 1e-14 * (1.0 + std::abs(s1) + std::abs(s2))) break;
  }
  const CurvePoint p = eval_curve(ba, s1, h, params);
  const CurvePoint q = eval_curve(bb, s2, h, params);
  const double scale =
      1.0 + std::max({std::abs(p.g), std::abs(p.k), std::abs(q.g),
                      std::abs(q.k)});
  return std::abs(p.g - q.g) < 1e-9 * scale &&
         std::abs(p.k - q.k) < 1e-9 * scale;
}

}  // namespace

Diagram sigma_h(double h, const Params& params, const GridSpec& grid) {
  if (grid.samples_per_branch < 2 || grid.s_min_abs <= 0.0 ||
      grid.s_max_abs <= grid.s_min_abs)
    throw Error("sigma_h: invalid grid specification");

  Diagram d;
  d.h = h;
  const auto [gp, gm] = gamma_lines(h, params);
  d.samples.push_back({0.0, Branch::GammaPlus, gp.g, gp.k, 0.0, 0.0});
  d.samples.push_back({0.0, Branch::GammaMinus, gm.g, gm.k, 0.0, 0.0});

  const int n = grid.samples_per_branch;
  const double ratio = grid.s_max_abs / grid.s_min_abs;
  for (Branch br : {Branch::Gamma1, Branch::Gamma2}) {
    for (double sign : {1.0, -1.0}) {
      double s_prev = sign * grid.s_min_abs;
      CurvePoint c_prev = eval_curve(br, s_prev, h, params);
      d.samples.push_back(
          {s_prev, br, c_prev.g, c_prev.k, c_prev.dg_ds, c_prev.dk_ds});
      for (int i = 1; i < n; ++i) {
        const double s =
            sign * grid.s_min_abs *
            std::pow(ratio, static_cast<double>(i) / (n - 1));
        const CurvePoint c = eval_curve(br, s, h, params);
        refine_interval(br, s_prev, c_prev, s, c, h, params, grid, 0,
                        d.samples);
        s_prev = s;
        c_prev = c;
      }
    }
  }

  // Cusps: seed from sign changes of dg/ds in the sampled branch data.
  for (Branch br : {Branch::Gamma1, Branch::Gamma2}) {
    std::vector<double> found;
    const DiagramSample* prev = nullptr;
    for (const auto& smp : d.samples) {
      if (smp.branch != br) continue;
      if (prev && prev->s * smp.s > 0.0 && prev->dg_ds * smp.dg_ds <= 0.0) {
        double s = 0.5 * (prev->s + smp.s);
        if (newton_cusp(br, s, h, params)) {
          bool dup = false;
          for (double f : found)
            if (std::abs(f - s) < 1e-8 * (1.0 + std::abs(s))) dup = true;
          if (!dup) {
            found.push_back(s);
            const CurvePoint c = eval_curve(br, s, h, params);
            d.singular.push_back(
                {SingularKind::Cusp, c.g, c.k, {s}, {br}});
          }
        }
      }
      prev = &smp;
    }
  }

  // Candidate proximity pairs from a coarse sweep, refined by 2D Newton.
  auto coarse = [&](Branch br, int m) {
    std::vector<std::pair<double, CurvePoint>> pts;
    for (double sign : {1.0, -1.0})
      for (int i = 0; i < m; ++i) {
        const double s = sign * grid.s_min_abs *
                         std::pow(ratio, static_cast<double>(i) / (m - 1));
        pts.emplace_back(s, eval_curve(br, s, h, params));
      }
    return pts;
  };
  const int m = 400;
  const auto g1pts = coarse(Branch::Gamma1, m);
  const auto g2pts = coarse(Branch::Gamma2, m);

  auto near = [](const CurvePoint& p, const CurvePoint& q, double tol) {
    const double scale =
        1.0 + std::max({std::abs(p.g), std::abs(p.k), std::abs(q.g),
                        std::abs(q.k)});
    return std::hypot(p.g - q.g, p.k - q.k) < tol * scale;
  };

  auto record_pair = [&](Branch ba, Branch bb, double s1, double s2,
                         SingularKind kind) {
    for (const auto& sp : d.singular) {
      if (sp.kind != kind || sp.branches.size() != 2 ||
          sp.branches[0] != ba || sp.branches[1] != bb)
        continue;
      if (std::abs(sp.s_values[0] - s1) < 1e-6 * (1.0 + std::abs(s1)) &&
          std::abs(sp.s_values[1] - s2) < 1e-6 * (1.0 + std::abs(s2)))
        return;
    }
    const CurvePoint c = eval_curve(ba, s1, h, params);
    d.singular.push_back({kind, c.g, c.k, {s1, s2}, {ba, bb}});
  };

  for (const auto& [s1, p] : g1pts)
    for (const auto& [s2, q] : g2pts)
      if (near(p, q, 0.05)) {
        double u = s1, v = s2;
        if (newton_pair(Branch::Gamma1, Branch::Gamma2, u, v, h, params))
          record_pair(Branch::Gamma1, Branch::Gamma2, u, v,
                      SingularKind::Intersection);
      }

  // Self-intersections (double points) of each curve.  Pairs that collapse
  // onto a cusp (both parameters converging to the same dg/ds = 0 point)
  // are rejected.
  auto at_cusp = [&](Branch br, double s) {
    for (const auto& sp : d.singular) {
      if (sp.kind != SingularKind::Cusp || sp.branches[0] != br) continue;
      if (std::abs(sp.s_values[0] - s) < 1e-4 * (1.0 + std::abs(s)))
        return true;
    }
    return false;
  };
  for (Branch br : {Branch::Gamma1, Branch::Gamma2}) {
    const auto& pts = br == Branch::Gamma1 ? g1pts : g2pts;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) {
        const double si = pts[i].first, sj = pts[j].first;
        if (std::abs(si - sj) < 0.1 * (std::abs(si) + std::abs(sj))) continue;
        if (!near(pts[i].second, pts[j].second, 0.05)) continue;
        double u = si, v = sj;
        if (newton_pair(br, br, u, v, h, params) &&
            std::abs(u - v) > 1e-6 * (std::abs(u) + std::abs(v)) &&
            !(at_cusp(br, u) && at_cusp(br, v))) {
          if (u > v) std::swap(u, v);
          record_pair(br, br, u, v, SingularKind::DoublePoint);
        }
      }
  }

  // Branch-point crossings: the Gamma+- points lying on Gamma1/Gamma2.
  for (auto [lb, pt] : {std::pair{Branch::GammaPlus, gp},
                        std::pair{Branch::GammaMinus, gm}}) {
    for (Branch br : {Branch::Gamma1, Branch::Gamma2}) {
      const auto& pts = br == Branch::Gamma1 ? g1pts : g2pts;
      std::vector<double> found;
      for (size_t i = 1; i < pts.size(); ++i) {
        const double si = pts[i - 1].first, sj = pts[i].first;
        if (si * sj <= 0.0) continue;
        const double fi = pts[i - 1].second.k - pt.k;
        const double fj = pts[i].second.k - pt.k;
        if (fi * fj > 0.0) continue;
        // bisection on k(s) = k_line, then test g agreement
        double lo = si, hi = sj, flo = fi;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = eval_curve(br, mid, h, params).k - pt.k;
          if (flo * fm <= 0.0)
            hi = mid;
          else {
            lo = mid;
            flo = fm;
          }
        }
        const double s = 0.5 * (lo + hi);
        const CurvePoint c = eval_curve(br, s, h, params);
        const double scale = 1.0 + std::abs(pt.g) + std::abs(pt.k);
        if (std::abs(c.g - pt.g) > 1e-7 * scale ||
            std::abs(c.k - pt.k) > 1e-7 * scale)
          continue;
        bool dup = false;
        for (double f : found)
          if (std::abs(f - s) < 1e-7 * (1.0 + std::abs(s))) dup = true;
        if (dup) continue;
        found.push_back(s);
        d.singular.push_back(
            {SingularKind::Intersection, pt.g, pt.k, {s}, {lb, br}});
      }
    }
  }

  // s -> 0 asymptote annotations (leading terms r^4/4s^2 resp. -q/4s^2).
  const double inf = std::numeric_limits<double>::infinity();
  d.singular.push_back(
      {SingularKind::SZeroAsymptote, -inf, inf, {0.0}, {Branch::Gamma1}});
  d.singular.push_back(
      {SingularKind::SZeroAsymptote, inf, -inf, {0.0}, {Branch::Gamma2}});
  return d;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void export_csv(const Diagram& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("export_diagram: cannot open " + path);
  out << "s,branch,g,k,dg_ds,dk_ds\n";
  for (const auto& s : d.samples)
    out << fmt17(s.s) << ',' << branch_name(s.branch) << ',' << fmt17(s.g)
        << ',' << fmt17(s.k) << ',' << fmt17(s.dg_ds) << ','
        << fmt17(s.dk_ds) << '\n';
  if (!out) throw IOFailure("export_diagram: write failed on " + path);
}

void export_svg(const Diagram& d, const std::string& path) {
  // Viewport from the middle quantiles so the s->0 blow-up does not swallow
  // the picture.
  std::vector<double> gs, ks;
  for (const auto& s : d.samples)
    if (std::isfinite(s.g) && std::isfinite(s.k)) {
      gs.push_back(s.g);
      ks.push_back(s.k);
    }
  double g0 = -1, g1v = 1, k0 = -1, k1v = 1;
  if (!gs.empty()) {
    std::sort(gs.begin(), gs.end());
    std::sort(ks.begin(), ks.end());
    auto quant = [](const std::vector<double>& v, double q) {
      return v[static_cast<size_t>(q * (v.size() - 1))];
    };
    g0 = quant(gs, 0.05);
    g1v = quant(gs, 0.95);
    k0 = quant(ks, 0.05);
    k1v = quant(ks, 0.95);
    const double pg = 0.1 * (g1v - g0 + 1e-12), pk = 0.1 * (k1v - k0 + 1e-12);
    g0 -= pg;
    g1v += pg;
    k0 -= pk;
    k1v += pk;
  }
  const double W = 800, H = 600;
  auto px = [&](double g) { return (g - g0) / (g1v - g0) * W; };
  auto py = [&](double k) { return H - (k - k0) / (k1v - k0) * H; };

  std::ofstream out(path);
  if (!out) throw IOFailure("export_diagram: cannot open " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  // axes
  if (g0 < 0 && g1v > 0)
    out << "<line x1=\"" << px(0) << "\" y1=\"0\" x2=\"" << px(0)
        << "\" y2=\"600\" stroke=\"#cccccc\"/>\n";
  if (k0 < 0 && k1v > 0)
    out << "<line x1=\"0\" y1=\"" << py(0) << "\" x2=\"800\" y2=\"" << py(0)
        << "\" stroke=\"#cccccc\"/>\n";
  const char* color1 = "#1f77b4";
  const char* color2 = "#d62728";
  for (Branch br : {Branch::Gamma1, Branch::Gamma2}) {
    for (double sign : {1.0, -1.0}) {
      out << "<polyline fill=\"none\" stroke=\""
          << (br == Branch::Gamma1 ? color1 : color2)
          << "\" stroke-width=\"1\" points=\"";
      for (const auto& s : d.samples) {
        if (s.branch != br || s.s * sign <= 0.0) continue;
        const double x = px(s.g), y = py(s.k);
        if (x < -5 * W || x > 6 * W || y < -5 * H || y > 6 * H) continue;
        out << x << ',' << y << ' ';
      }
      out << "\"/>\n";
    }
  }
  for (const auto& s : d.samples) {
    if (s.branch != Branch::GammaPlus && s.branch != Branch::GammaMinus)
      continue;
    out << "<circle cx=\"" << px(s.g) << "\" cy=\"" << py(s.k)
        << "\" r=\"4\" fill=\"#2ca02c\"/>\n";
  }
  for (const auto& sp : d.singular) {
    if (!std::isfinite(sp.g) || !std::isfinite(sp.k)) continue;
    const double x = px(sp.g), y = py(sp.k);
    if (sp.kind == SingularKind::Cusp)
      out << "<rect x=\"" << x - 3 << "\" y=\"" << y - 3
          << "\" width=\"6\" height=\"6\" fill=\"black\"/>\n";
    else
      out << "<circle cx=\"" << x << "\" cy=\"" << y
          << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw IOFailure("export_diagram: write failed on " + path);
}

}  // namespace

void export_diagram(const Diagram& d, const std::string& format,
                    const std::string& path) {
  if (format == "csv")
    export_csv(d, path);
  else if (format == "svg")
    export_svg(d, path);
  else
    throw Error("export_diagram: unknown format " + format);
}

std::vector<DiagramSample> read_diagram_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("read_diagram_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "s,branch,g,k,dg_ds,dk_ds")
    throw IOFailure("read_diagram_csv: bad header in " + path);
  std::vector<DiagramSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    DiagramSample s;
    std::getline(ss, field, ',');
    s.s = std::stod(field);
    std::getline(ss, field, ',');
    s.branch = branch_from_name(field);
    std::getline(ss, field, ',');
    s.g = std::stod(field);
    std::getline(ss, field, ',');
    s.k = std::stod(field);
    std::getline(ss, field, ',');
    s.dg_ds = std::stod(field);
    std::getline(ss, field, ',');
    s.dk_ds = std::stod(field);
    out.push_back(s);
  }
  return out;
}

}  // namespace kgyro
