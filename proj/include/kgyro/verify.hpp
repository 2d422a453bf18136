#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgyro/params.hpp"

namespace kgyro {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double metric = 0.0;  // worst observed value
  double bound = 0.0;   // required bound on the metric
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20260826;
};

/// Runs the ten acceptance criteria and returns one result per criterion.
/// Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(const Params& params,
                                            const VerifyOptions& opt = {});

/// Serializes results as CSV (id,name,passed,metric,bound) with decimal-17
/// number formatting; byte-stable for identical inputs.
std::string report_csv(const std::vector<CriterionResult>& results);

}  // namespace kgyro
