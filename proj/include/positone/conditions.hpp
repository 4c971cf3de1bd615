#pragma once

#include <optional>
#include <string>
#include <vector>

#include "positone/cone.hpp"
#include "positone/expr.hpp"

namespace positone {

// Inequality conditions decided over the prescribed boxes:
//   I1(rho)      sup f over [0,rho]^d        <  m * rho   (per equation)
//   I0(rho)      inf f_i over its side box   >  M_i * rho (every equation)
//   I0Star(rho)  inf f_i over [0,rho/c]^2    >  M_i * rho (one chosen equation)
//   KUpper(rho)  sup f over [0,rho]          <= m * rho
//   KLower(rho)  inf f over [c*rho,rho]      >= M * rho
// The K-forms are the non-strict Krasnoselskii-mode variants and are
// scalar only.
enum class ConditionType { I1, I0, I0Star, KUpper, KLower };

struct ConditionKind {
  ConditionType type = ConditionType::I1;
  int eq = 1;  // equation selector for I0Star
  friend bool operator==(const ConditionKind&, const ConditionKind&) = default;
};

std::string condition_name(const ConditionKind& k);
ConditionKind condition_from_name(const std::string& name, int eq = 1);

enum class Verdict { Pass, Fail, Undecided };

std::string verdict_name(Verdict v);

// Outcome of one verified bound. margin is the signed distance of the
// verified bound from the threshold (positive = cleared); bound is the
// certified sup/inf enclosure endpoint actually achieved. On Fail the
// witness point violates the inequality when re-evaluated.
struct ConditionResult {
  Verdict verdict = Verdict::Undecided;
  double margin = 0.0;
  double bound = 0.0;
  double threshold = 0.0;
  std::vector<double> witness;
  long boxes_explored = 0;
  std::vector<ConditionResult> parts;  // per-equation results for system conditions
};

// Strict inequalities are certified with a relative clearance of 1e-12;
// the non-strict K-mode checks accept the same margin on the opposite
// side of the threshold (plus a denormal-scale absolute slack), so
// equality cases settled exactly in binary64 still pass.
inline constexpr double kRelMargin = 1e-12;
inline constexpr double kAbsSlack = 1e-300;

inline constexpr long kDefaultBudget = 100000;

// Problem context shared by the condition checks: one or two compiled
// nonlinearities with their per-equation cone constants, and the overall
// c = min of the per-equation cone constants.
struct ConditionContext {
  std::vector<Program> f;
  std::vector<Constants> constants;
  double c = 0.0;
  int dims() const { return static_cast<int>(f.size()); }
  bool system() const { return f.size() == 2; }
};

ConditionContext make_context(const std::vector<Program>& fs,
                              const std::vector<Constants>& constants);

// The exact evaluation domain of a condition. which_eq selects the
// per-equation side box of the system I0 condition.
Box box_for(const ConditionKind& kind, double rho, double c, int dims, int which_eq = 1);

// Threshold of the bound the condition compares against, for equation eq.
double threshold_for(const ConditionKind& kind, int eq, double rho,
                     const ConditionContext& ctx);

// Best-first branch and bound for "sup f over box < threshold" (or <=
// when strict is false). Splits the widest dimension, prunes boxes whose
// verified upper bound clears the threshold, reports a witness point on
// failure, and gives up with Undecided when the box budget is exhausted.
ConditionResult bound_sup(const Program& f, const Box& box, double threshold,
                          bool strict, long budget = kDefaultBudget);

// Mirror image: "inf f over box > threshold" (>= when strict is false).
ConditionResult bound_inf(const Program& f, const Box& box, double threshold,
                          bool strict, long budget = kDefaultBudget);

ConditionResult check_condition(const ConditionContext& ctx, const ConditionKind& kind,
                                double rho, long budget = kDefaultBudget);

// Verifies f >= 0 over the box (non-strict lower bound against zero).
ConditionResult check_nonnegativity(const Program& f, const Box& box,
                                    long budget = kDefaultBudget);

}  // namespace positone
