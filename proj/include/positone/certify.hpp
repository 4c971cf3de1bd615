#pragma once

#include <array>
#include <optional>

#include "positone/conditions.hpp"

namespace positone {

// Ladder shapes accepted by the multiplicity theorems. H-cases are the
// non-strict Krasnoselskii mode (one solution); S-cases combine strict
// index-1 and index-0 radii for one to three solutions.
enum class TheoremCase { H1, H2, S1, S2, S3, S4, S5, S6 };

std::string case_name(TheoremCase c);
TheoremCase case_from_name(const std::string& name);
int solutions_for_case(TheoremCase c);

enum class Mode { Index, Krasnoselskii };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);

// One ladder entry: a condition kind checked at radius rho.
struct Rung {
  ConditionKind kind;
  double rho = 0.0;
  ConditionResult result;
};

// Gap constraint between two ladder radii: rho[from] (divided by c when
// divide_by_c) must be strictly below rho[to].
struct GapCheck {
  int from = 0;
  int to = 0;
  bool divide_by_c = false;
  bool satisfied = false;
};

struct Certificate {
  TheoremCase tcase = TheoremCase::S1;
  bool system = false;
  std::vector<Rung> rungs;
  std::vector<GapCheck> gaps;
  int solutions = 0;
  // one [lo, hi] window per guaranteed solution, ordered, bounding the
  // sup norm (max norm for systems)
  std::vector<std::array<double, 2>> windows;
  std::vector<Constants> constants;
  double c = 0.0;
};

// Kind pattern expected by a case; I0 entries at position 0 may be
// replaced by I0* in system problems.
std::vector<ConditionType> case_pattern(TheoremCase c);
std::vector<GapCheck> gap_requirements(TheoremCase c);

// Deduces the theorem case from the sequence of rung kinds; throws
// std::invalid_argument for sequences matching no case.
TheoremCase infer_case(const std::vector<ConditionKind>& kinds, bool system);

struct AssembleOutcome {
  std::optional<Certificate> certificate;
  bool inconclusive = false;  // an Undecided (not Fail) blocked assembly
  std::string blocking;       // empty when certified
};

// Builds the certificate from checked rungs: validates the kind pattern,
// requires every rung to Pass, re-checks all gap constraints from the
// raw radii, and derives one norm window per adjacent (index-0, index-1)
// pair. A window sitting below an index-1 radius R is tightened from
// [r, R] to [r, r/c] exactly when the index-1 condition is verified to
// hold at r/c as well.
AssembleOutcome assemble(const ConditionContext& ctx, const std::vector<Rung>& rungs,
                         long budget = kDefaultBudget);

struct AutoLadderOptions {
  double rho_min = 0.0;
  double rho_max = 0.0;
  int points_per_decade = 64;
  std::optional<TheoremCase> target;
  long budget = kDefaultBudget;
};

// Scans a logarithmic radius grid, labels each radius by the conditions
// that pass, and extracts for each candidate case the first ladder (in
// grid order, smallest radii first) satisfying the gap constraints.
std::vector<std::vector<Rung>> auto_ladder(const ConditionContext& ctx, Mode mode,
                                           const AutoLadderOptions& opts);

// Highest guaranteed solution count wins; ties broken by total norm
// window coverage, then by case order.
std::optional<Certificate> best_certificate(std::vector<Certificate> candidates);

// Re-runs every rung condition of an emitted certificate.
bool revalidate(const Certificate& cert, const ConditionContext& ctx,
                long budget = kDefaultBudget);

}  // namespace positone
