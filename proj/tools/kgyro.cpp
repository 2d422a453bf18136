#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "kgyro/bifurcation.hpp"
#include "kgyro/canonical.hpp"
#include "kgyro/critical.hpp"
#include "kgyro/dynamics.hpp"
#include "kgyro/errors.hpp"
#include "kgyro/json_io.hpp"
#include "kgyro/lax.hpp"
#include "kgyro/sampling.hpp"
#include "kgyro/special.hpp"
#include "kgyro/verify.hpp"

namespace {

using namespace kgyro;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_simulate(const std::string& params_path, const std::string& state_path,
                 double t_end, double tol, const std::string& out_path) {
  const Params params = params_from_json(load_json_file(params_path));
  const PhaseState s0 = state_from_json(load_json_file(state_path));
  IntegrateOptions opt;
  opt.tol = tol;
  const Trajectory tr = integrate(s0, t_end, params, opt);
  std::ofstream out(out_path);
  if (!out) throw IOFailure("cannot open " + out_path);
  out << "t,omega1,omega2,omega3,alpha1,alpha2,alpha3,beta1,beta2,beta3,"
         "h,k,g,drift_h,drift_k,drift_g\n";
  const IntegralTriple i0 = integrals_unchecked(s0, params);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const PhaseState& s = tr.states[i];
    const IntegralTriple& d = tr.drift[i];
    out << fmt17(tr.times[i]);
    for (const Vec3* v : {&s.omega, &s.alpha, &s.beta})
      for (int j = 0; j < 3; ++j) out << ',' << fmt17((*v)[j]);
    out << ',' << fmt17(i0.h + d.h) << ',' << fmt17(i0.k + d.k) << ','
        << fmt17(i0.g + d.g) << ',' << fmt17(d.h) << ',' << fmt17(d.k) << ','
        << fmt17(d.g) << '\n';
  }
  std::cerr << "wrote " << tr.times.size() << " samples, max drift "
            << tr.max_drift() << "\n";
  return 0;
}

int cmd_canonicalize(const std::string& params_path,
                     const std::string& out_path, bool as_json) {
  const DGParams P = dgparams_from_json(load_json_file(params_path));
  const CanonicalizeResult res = canonicalize(P);
  json Lambda = json::array(), D = json::array();
  for (int r = 0; r < 3; ++r)
    Lambda.push_back(json::array(
        {res.g.Lambda(r, 0), res.g.Lambda(r, 1), res.g.Lambda(r, 2)}));
  for (int r = 0; r < 2; ++r)
    D.push_back(json::array({res.g.D(r, 0), res.g.D(r, 1)}));
  const json j{{"Lambda", Lambda},
               {"D", D},
               {"a", res.a},
               {"b", res.b},
               {"gyro_rotated",
                json::array({res.gyro_rotated[0], res.gyro_rotated[1],
                             res.gyro_rotated[2]})},
               {"reducible", res.reducible_flag}};
  if (!out_path.empty()) save_json_file(j, out_path);
  if (as_json || out_path.empty()) std::cout << j.dump(2) << "\n";
  return 0;
}

json state_with_integrals(const PhaseState& s, const Params& params) {
  json j = state_to_json(s);
  const IntegralTriple I = integrals_unchecked(s, params);
  j["integrals"] = json{{"g", I.g}, {"k", I.k}, {"h", I.h}};
  return j;
}

int cmd_special(const std::string& params_path, const std::string& kind,
                const std::string& family, double phi, double phi_dot,
                bool negative, int count, const std::string& out_path) {
  const Params params = params_from_json(load_json_file(params_path));
  json out = json::array();
  if (kind == "equilibria") {
    for (const PhaseState& s : equilibria(params))
      out.push_back(state_with_integrals(s, params));
  } else if (kind == "pendulum") {
    PendulumFamily f = PendulumFamily::P3;
    if (family == "P1") f = PendulumFamily::P1;
    else if (family == "P2") f = PendulumFamily::P2;
    else if (family != "P3") throw Error("unknown pendulum family " + family);
    out.push_back(state_with_integrals(
        pendulum_state(f, phi, phi_dot, !negative, params), params));
  } else if (kind == "rank1") {
    for (const Rank1Data& d : rank1_admissible(params, count)) {
      const ComplexState c = rank1_point(d, params);
      json j = state_with_integrals(realify(c, 1e-7), params);
      j["sigma"] = d.sigma;
      j["u"] = d.u;
      j["w"] = d.w;
      out.push_back(j);
    }
  } else {
    throw Error("unknown kind " + kind);
  }
  if (!out_path.empty())
    save_json_file(out, out_path);
  else
    std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_critical_scan(const std::string& params_path,
                      const std::string& stratum, int count,
                      std::uint64_t seed, const std::string& out_path) {
  const Params params = params_from_json(load_json_file(params_path));
  json out = json::array();
  for (int i = 0; i < count; ++i) {
    json rec;
    if (stratum == "L") {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
      std::uniform_real_distribution<double> unif(-3.0, 3.0);
      const PhaseState s =
          stratum_L_point(unif(rng), unif(rng), (i % 2) == 0, params);
      const ComplexState c = complexify(s);
      rec = state_to_json(s);
      double res = 0.0;
      for (const Complex& v : residual_L(c)) res = std::max(res, std::abs(v));
      rec["residual"] = res;
      rec["rank"] = momentum_rank(c, params);
    } else if (stratum == "N" || stratum == "O") {
      const ComplexState c =
          stratum == "N"
              ? sample_N(params, seed + static_cast<std::uint64_t>(i))
              : sample_O(params, seed + static_cast<std::uint64_t>(i));
      const PhaseState s = realify(c);
      rec = state_to_json(s);
      double res = 0.0;
      const auto rv = stratum == "N" ? residual_N(c, params)
                                     : residual_O(c, params);
      for (const Complex& v : rv) res = std::max(res, std::abs(v));
      const Complex S = stratum == "N" ? S_N(c, params) : S_O(c, params);
      rec["residual"] = res;
      rec["s"] = S.real();
      rec["rank"] = momentum_rank(c, params);
    } else {
      throw Error("stratum must be one of L, N, O");
    }
    const IntegralTriple I = integrals_unchecked(state_from_json(rec), params);
    rec["integrals"] = json{{"g", I.g}, {"k", I.k}, {"h", I.h}};
    out.push_back(rec);
  }
  if (!out_path.empty())
    save_json_file(out, out_path);
  else
    std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_lax_verify(const std::string& params_path, int samples,
                   std::uint64_t seed, bool as_json) {
  const Params params = params_from_json(load_json_file(params_path));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_lax = 0.0, worst_spec = 0.0;
  for (int i = 0; i < samples; ++i) {
    const ComplexState c = complexify(random_on_orbit(params, rng));
    const double mod = 0.1 * std::pow(100.0, unif(rng));
    const double ph = 2.0 * M_PI * unif(rng);
    const Complex kap = mod * Complex(std::cos(ph), std::sin(ph));
    worst_lax = std::max(worst_lax, lax_residual(c, params, kap));
    worst_spec = std::max(worst_spec, spectral_residual(c, params, kap));
  }
  if (as_json) {
    std::cout << json{{"samples", samples},
                      {"max_lax_residual", worst_lax},
                      {"max_spectral_residual", worst_spec}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "samples:               " << samples << "\n"
              << "max Lax residual:      " << worst_lax << "\n"
              << "max spectral residual: " << worst_spec << "\n";
  }
  return worst_lax < 1e-10 && worst_spec < 1e-9 ? 0 : 2;
}

int cmd_diagram(const std::string& params_path, double h,
                const std::string& out_dir, const std::string& formats) {
  const Params params = params_from_json(load_json_file(params_path));
  const Diagram d = sigma_h(h, params);
  const std::string tag = "sigma_h_" + std::to_string(h);
  std::stringstream fs(formats);
  std::string fmt;
  while (std::getline(fs, fmt, ',')) {
    if (fmt == "csv") {
      for (Branch br : {Branch::GammaPlus, Branch::GammaMinus, Branch::Gamma1,
                        Branch::Gamma2}) {
        Diagram part;
        part.h = d.h;
        for (const auto& s : d.samples)
          if (s.branch == br) part.samples.push_back(s);
        export_diagram(part, "csv",
                       out_dir + "/" + tag + "_" + branch_name(br) + ".csv");
      }
    } else if (fmt == "svg") {
      export_diagram(d, "svg", out_dir + "/" + tag + ".svg");
    } else {
      throw Error("unknown format " + fmt);
    }
  }
  std::cerr << d.samples.size() << " samples, " << d.singular.size()
            << " singular points\n";
  for (const auto& sp : d.singular) {
    const char* kind = sp.kind == SingularKind::Cusp          ? "cusp"
                       : sp.kind == SingularKind::DoublePoint ? "double_point"
                       : sp.kind == SingularKind::Intersection
                           ? "intersection"
                           : "s_zero_asymptote";
    std::cerr << "  " << kind << " at (g,k)=(" << sp.g << ',' << sp.k << ") s=";
    for (double s : sp.s_values) std::cerr << s << ' ';
    std::cerr << "\n";
  }
  return 0;
}

int cmd_verify_all(const std::string& params_path, std::uint64_t seed,
                   const std::string& out_path, bool as_json) {
  const Params params = params_path.empty()
                            ? Params(1.1, 0.6, 0.35)
                            : params_from_json(load_json_file(params_path));
  VerifyOptions opt;
  opt.seed = seed;
  const auto results = run_acceptance(params, opt);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IOFailure("cannot open " + out_path);
    out << report_csv(results);
  }
  bool all = true;
  if (as_json) {
    json j = json::array();
    for (const auto& r : results) {
      j.push_back(json{{"id", r.id},
                       {"name", r.name},
                       {"passed", r.passed},
                       {"metric", r.metric},
                       {"bound", r.bound},
                       {"detail", r.detail}});
      all = all && r.passed;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      std::printf("[%s] %2d %-22s metric=%-13.6g bound=%-10.3g %s\n",
                  r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.metric,
                  r.bound, r.detail.c_str());
      all = all && r.passed;
    }
  }
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kowalevski gyrostat in two constant fields: dynamics, "
               "critical set and bifurcation diagrams"};
  app.require_subcommand(1);
  app.fallthrough();  // let subcommands accept the global --json flag
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string params_path, state_path, out_path, out_dir = ".";
  double t_end = 10.0, tol = 1e-10, phi = 0.0, phi_dot = 0.0, h = 2.0;
  std::string kind = "equilibria", family = "P3", stratum = "N",
              formats = "csv,svg";
  bool negative = false;
  int count = 10, samples = 100;
  std::uint64_t seed = 20260826;

  auto* sim = app.add_subcommand("simulate", "integrate the equations of motion");
  sim->add_option("--params", params_path)->required();
  sim->add_option("--state", state_path)->required();
  sim->add_option("--t-end", t_end);
  sim->add_option("--tol", tol);
  sim->add_option("--out", out_path)->required();

  auto* canon = app.add_subcommand("canonicalize",
                                   "orthogonalize a general two-field problem");
  canon->add_option("--params", params_path)->required();
  canon->add_option("--out", out_path);

  auto* spec = app.add_subcommand("special", "closed-form special solutions");
  spec->add_option("--params", params_path)->required();
  spec->add_option("--kind", kind, "equilibria|pendulum|rank1");
  spec->add_option("--family", family, "P1|P2|P3");
  spec->add_option("--phi", phi);
  spec->add_option("--phi-dot", phi_dot);
  spec->add_flag("--negative", negative, "lower sign branch");
  spec->add_option("--count", count);
  spec->add_option("--out", out_path);

  auto* crit = app.add_subcommand("critical-scan",
                                  "sample points of the critical strata");
  crit->add_option("--params", params_path)->required();
  crit->add_option("--stratum", stratum, "L|N|O");
  crit->add_option("--count", count);
  crit->add_option("--seed", seed);
  crit->add_option("--out", out_path);

  auto* lax = app.add_subcommand("lax-verify",
                                 "Lax pair and spectral-curve residuals");
  lax->add_option("--params", params_path)->required();
  lax->add_option("--samples", samples);
  lax->add_option("--seed", seed);

  auto* diag = app.add_subcommand("diagram", "iso-energetic diagram Sigma_h");
  diag->set_help_flag("--help", "print help");  // frees -h for the energy value
  diag->add_option("--params", params_path)->required();
  diag->add_option("--h", h)->required();
  diag->add_option("--out", out_dir, "output directory");
  diag->add_option("--format", formats, "comma list of csv,svg");

  auto* ver = app.add_subcommand("verify-all", "run the acceptance suite");
  ver->add_option("--params", params_path);
  ver->add_option("--seed", seed);
  ver->add_option("--out", out_path, "CSV report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(params_path, state_path, t_end, tol, out_path);
    if (canon->parsed()) return cmd_canonicalize(params_path, out_path, as_json);
    if (spec->parsed())
      return cmd_special(params_path, kind, family, phi, phi_dot, negative,
                         count, out_path);
    if (crit->parsed())
      return cmd_critical_scan(params_path, stratum, count, seed, out_path);
    if (lax->parsed()) return cmd_lax_verify(params_path, samples, seed, as_json);
    if (diag->parsed()) return cmd_diagram(params_path, h, out_dir, formats);
    if (ver->parsed()) return cmd_verify_all(params_path, seed, out_path, as_json);
  } catch (const kgyro::Error& e) {
    const bool numerical =
        dynamic_cast<const kgyro::StepFailure*>(&e) ||
        dynamic_cast<const kgyro::BranchFailure*>(&e) ||
        dynamic_cast<const kgyro::GridTooCoarse*>(&e) ||
        dynamic_cast<const kgyro::OffOrbit*>(&e) ||
        dynamic_cast<const kgyro::NotRealImage*>(&e) ||
        dynamic_cast<const kgyro::DegenerateDenominator*>(&e) ||
        dynamic_cast<const kgyro::SingularDelta*>(&e) ||
        dynamic_cast<const kgyro::ZeroKappa*>(&e) ||
        dynamic_cast<const kgyro::SZero*>(&e);
    std::cerr << (numerical ? "numerical failure: " : "error: ") << e.what()
              << "\n";
    return numerical ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
