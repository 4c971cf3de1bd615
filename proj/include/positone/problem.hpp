#pragma once

#include <optional>

#include "positone/certify.hpp"
#include "positone/solver.hpp"

namespace positone {

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EquationSpec {
  BcKind bc = BcKind::DirichletDirichlet;
  std::string f_text;
  ExprPtr f;
  std::optional<std::array<double, 2>> window;  // cone window override
};

struct LadderEntrySpec {
  double rho = 0.0;
  std::string kind;  // "I1", "I0", "I0*", "K_upper", "K_lower"
  int eq = 1;        // equation selector for "I0*"
};

struct LadderSpec {
  std::vector<LadderEntrySpec> entries;               // explicit ladder
  std::optional<std::array<double, 2>> auto_range;    // or {auto: [min,max]}
  std::optional<std::string> target_case;
  int points_per_decade = 64;
};

// Parsed problem file (JSON document; see README for the schema).
struct ProblemFile {
  std::vector<EquationSpec> equations;
  ParamMap params;
  Mode mode = Mode::Index;
  LadderSpec ladder;
  PicardOptions solver;
  std::optional<std::array<double, 2>> slope_range;
  long budget = kDefaultBudget;
};

ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem(const std::string& json_text);

// Problem with everything derived and validated: compiled nonlinearities,
// cone windows (defaults or overrides), per-equation constants and the
// shared condition context.
struct ProblemSetup {
  ProblemFile file;
  std::vector<KernelSpec> kernels;
  std::vector<Program> programs;
  std::vector<ConeWindow> windows;
  std::vector<Constants> constants;
  ConditionContext ctx;
};

ProblemSetup prepare(const ProblemFile& pf);

struct CertifyRun {
  std::optional<Certificate> certificate;
  bool inconclusive = false;
  std::string message;
  std::vector<ConditionResult> nonnegativity;  // one check per equation
  std::vector<AssembleOutcome> attempts;       // per evaluated ladder
};

// Full certification pipeline: nonnegativity of every nonlinearity over
// the boxes the ladder will touch, condition checks for the explicit or
// auto-extracted ladder, certificate assembly and selection.
CertifyRun run_certify(const ProblemSetup& setup);

struct SolveRun {
  std::vector<FoundSolution> solutions;
  std::optional<ConfirmationReport> confirmation;  // when a certificate exists
  CertifyRun certify;
};

// Multistart solve; when the problem certifies, initial guesses target
// the certified windows and the confirmation report compares norms.
SolveRun run_solve(const ProblemSetup& setup);

}  // namespace positone
