#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kgyro/params.hpp"
#include "kgyro/phase.hpp"

namespace kgyro {

enum class Branch { GammaPlus, GammaMinus, Gamma1, Gamma2 };

const char* branch_name(Branch b);
Branch branch_from_name(const std::string& name);

/// One sampled point of an iso-energetic diagram branch.  For the point
/// branches GammaPlus/GammaMinus the parameter s is not meaningful and is
/// stored as 0 with zero derivatives.
struct DiagramSample {
  double s = 0.0;
  Branch branch = Branch::Gamma1;
  double g = 0.0, k = 0.0;
  double dg_ds = 0.0, dk_ds = 0.0;
};

enum class SingularKind { Cusp, DoublePoint, Intersection, SZeroAsymptote };

struct SingularPoint {
  SingularKind kind = SingularKind::Cusp;
  double g = 0.0, k = 0.0;  // not finite for asymptote annotations
  std::vector<double> s_values;
  std::vector<Branch> branches;
};

struct GammaPoint {
  double g = 0.0, k = 0.0;
};

/// The two straight lines of the diagram at energy h, reduced to points of
/// the (g,k) plane: (Gamma+, Gamma-).
std::pair<GammaPoint, GammaPoint> gamma_lines(double h, const Params& params);

struct CurvePoint {
  double g = 0.0, k = 0.0;
  double dg_ds = 0.0, dk_ds = 0.0;
};

/// The first surface at parameter s and energy h; throws SZero at s = 0.
CurvePoint gamma1(double s, double h, const Params& params);

/// The second surface; lambda enters only through the shifted energy
/// h - lambda^2/2.  Throws SZero at s = 0.
CurvePoint gamma2(double s, double h, const Params& params);

struct GridSpec {
  double s_min_abs = 1e-3;
  double s_max_abs = 50.0;
  int samples_per_branch = 4000;  // per sign of s
  double jump_bound = 0.5;        // max relative (g,k) jump between neighbors
  int max_refine_depth = 24;
};

struct Diagram {
  double h = 0.0;
  std::vector<DiagramSample> samples;
  std::vector<SingularPoint> singular;
};

/// Samples all four branches on a logarithmic grid over both signs of s,
/// refining where neighboring samples jump too much, and locates the singular
/// points: cusps (dg/ds = dk/ds = 0), Gamma1-Gamma2 intersections,
/// branch-point crossings and s->0 asymptote annotations.
/// Throws GridTooCoarse when refinement cannot meet the jump bound.
Diagram sigma_h(double h, const Params& params, const GridSpec& grid = {});

/// Writes the samples as CSV (columns s,branch,g,k,dg_ds,dk_ds, decimal-17
/// fields) or the whole diagram as an SVG figure.  Throws IOFailure.
void export_diagram(const Diagram& d, const std::string& format,
                    const std::string& path);

/// Parses a CSV file written by export_diagram (round-trip helper).
std::vector<DiagramSample> read_diagram_csv(const std::string& path);

}  // namespace kgyro
