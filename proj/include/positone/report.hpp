#pragma once

#include <iosfwd>

#include "json.hpp"
#include "positone/problem.hpp"

namespace positone {

// Structured and human-readable renderings of the command outcomes. The
// JSON field names are part of the external contract; certificates parse
// back losslessly (round-trip tested).

nlohmann::json constants_to_json(const ProblemSetup& setup);
std::string constants_to_text(const ProblemSetup& setup);

nlohmann::json condition_result_to_json(const ConditionResult& r);
ConditionResult condition_result_from_json(const nlohmann::json& j);
std::string condition_result_to_text(const ConditionKind& kind, double rho,
                                     const ConditionResult& r);

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json certify_run_to_json(const CertifyRun& run);
std::string certify_run_to_text(const CertifyRun& run);

nlohmann::json solve_run_to_json(const SolveRun& run, const std::string& csv_path);
std::string solve_run_to_text(const SolveRun& run, const std::string& csv_path);

// CSV: UTF-8, header row, comma separator, 17 significant digits.
void write_solution_csv(std::ostream& os, const DiscreteSolution& sol);

// Forbidden-region bands implied by a ladder: per u sample, one row per
// band covering u with the band's forbidden [lower, upper] range.
struct RegionBand {
  int id = 0;
  std::string kind;
  double u_lo = 0.0, u_hi = 0.0;
  double lower = 0.0, upper = 0.0;  // forbidden values of f on [u_lo, u_hi]
};

std::vector<RegionBand> region_bands(const ProblemSetup& setup,
                                     const std::vector<Rung>& rungs);
void write_region_csv(std::ostream& os, const std::vector<RegionBand>& bands, int samples);

}  // namespace positone
