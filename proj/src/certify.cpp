#include "positone/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace positone {

std::string case_name(TheoremCase c) {
  switch (c) {
    case TheoremCase::H1: return "H1";
    case TheoremCase::H2: return "H2";
    case TheoremCase::S1: return "S1";
    case TheoremCase::S2: return "S2";
    case TheoremCase::S3: return "S3";
    case TheoremCase::S4: return "S4";
    case TheoremCase::S5: return "S5";
    case TheoremCase::S6: return "S6";
  }
  return "?";
}

TheoremCase case_from_name(const std::string& name) {
  static const std::map<std::string, TheoremCase> table = {
      {"H1", TheoremCase::H1}, {"H2", TheoremCase::H2}, {"S1", TheoremCase::S1},
      {"S2", TheoremCase::S2}, {"S3", TheoremCase::S3}, {"S4", TheoremCase::S4},
      {"S5", TheoremCase::S5}, {"S6", TheoremCase::S6}};
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown theorem case '" + name + "'");
  return it->second;
}

int solutions_for_case(TheoremCase c) {
  switch (c) {
    case TheoremCase::H1:
    case TheoremCase::H2:
    case TheoremCase::S1:
    case TheoremCase::S2: return 1;
    case TheoremCase::S3:
    case TheoremCase::S4: return 2;
    case TheoremCase::S5:
    case TheoremCase::S6: return 3;
  }
  return 0;
}

std::string mode_name(Mode m) { return m == Mode::Index ? "index" : "krasnoselskii"; }

Mode mode_from_name(const std::string& name) {
  if (name == "index") return Mode::Index;
  if (name == "krasnoselskii") return Mode::Krasnoselskii;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::vector<ConditionType> case_pattern(TheoremCase c) {
  using CT = ConditionType;
  switch (c) {
    case TheoremCase::H1: return {CT::KUpper, CT::KLower};
    case TheoremCase::H2: return {CT::KLower, CT::KUpper};
    case TheoremCase::S1: return {CT::I0, CT::I1};
    case TheoremCase::S2: return {CT::I1, CT::I0};
    case TheoremCase::S3: return {CT::I0, CT::I1, CT::I0};
    case TheoremCase::S4: return {CT::I1, CT::I0, CT::I1};
    case TheoremCase::S5: return {CT::I0, CT::I1, CT::I0, CT::I1};
    case TheoremCase::S6: return {CT::I1, CT::I0, CT::I1, CT::I0};
  }
  return {};
}

std::vector<GapCheck> gap_requirements(TheoremCase c) {
  switch (c) {
    case TheoremCase::H1: return {{0, 1, true}};
    case TheoremCase::H2: return {{0, 1, false}};
    case TheoremCase::S1: return {{0, 1, true}};
    case TheoremCase::S2: return {{0, 1, false}};
    case TheoremCase::S3: return {{0, 1, true}, {1, 2, false}};
    case TheoremCase::S4: return {{0, 1, false}, {1, 2, true}};
    case TheoremCase::S5: return {{0, 1, true}, {1, 2, false}, {2, 3, true}};
    case TheoremCase::S6: return {{0, 1, false}, {1, 2, true}, {2, 3, false}};
  }
  return {};
}

TheoremCase infer_case(const std::vector<ConditionKind>& kinds, bool system) {
  auto matches = [&](TheoremCase c) {
    std::vector<ConditionType> pat = case_pattern(c);
    if (pat.size() != kinds.size()) return false;
    for (std::size_t i = 0; i < pat.size(); ++i) {
      ConditionType have = kinds[i].type;
      if (have == pat[i]) continue;
      // I0* substitutes for the lowest index-0 rung of system ladders
      if (have == ConditionType::I0Star && pat[i] == ConditionType::I0 && i == 0 && system)
        continue;
      return false;
    }
    return true;
  };
  for (TheoremCase c : {TheoremCase::H1, TheoremCase::H2, TheoremCase::S1, TheoremCase::S2,
                        TheoremCase::S3, TheoremCase::S4, TheoremCase::S5, TheoremCase::S6})
    if (matches(c)) return c;
  throw std::invalid_argument("ladder kinds match no theorem case");
}

namespace {

bool is_index0(ConditionType t) {
  return t == ConditionType::I0 || t == ConditionType::I0Star;
}

// One window per adjacent rung pair. For an (index-0 at r, index-1 at R)
// pair the generic bound is [r, R]; the sharper upper bound r/c is only
// valid when the index-1 condition also holds at radius r/c, so it is
// claimed exactly when that check passes.
std::vector<std::array<double, 2>> derive_windows(TheoremCase c, const ConditionContext& ctx,
                                                  const std::vector<Rung>& rungs,
                                                  long budget) {
  std::vector<std::array<double, 2>> windows;
  if (c == TheoremCase::H1 || c == TheoremCase::H2) {
    windows.push_back({rungs[0].rho, rungs[1].rho});
    return windows;
  }
  for (std::size_t i = 0; i + 1 < rungs.size(); ++i) {
    const Rung& lo = rungs[i];
    const Rung& hi = rungs[i + 1];
    if (is_index0(lo.kind.type)) {
      double tight = lo.rho / ctx.c;  // < hi.rho by the gap constraint
      ConditionResult at_tight =
          check_condition(ctx, {ConditionType::I1}, tight, budget);
      windows.push_back({lo.rho, at_tight.verdict == Verdict::Pass ? tight : hi.rho});
    } else {
      windows.push_back({lo.rho, hi.rho / ctx.c});
    }
  }
  return windows;
}

}  // namespace

AssembleOutcome assemble(const ConditionContext& ctx, const std::vector<Rung>& rungs,
                         long budget) {
  AssembleOutcome out;
  if (rungs.empty()) {
    out.blocking = "empty ladder";
    return out;
  }
  for (std::size_t i = 0; i + 1 < rungs.size(); ++i) {
    if (!(rungs[i].rho < rungs[i + 1].rho)) {
      out.blocking = "ladder radii must be strictly increasing";
      return out;
    }
  }
  std::vector<ConditionKind> kinds;
  for (const Rung& r : rungs) kinds.push_back(r.kind);
  TheoremCase tcase;
  try {
    tcase = infer_case(kinds, ctx.system());
  } catch (const std::invalid_argument& e) {
    out.blocking = e.what();
    return out;
  }

  for (const Rung& r : rungs) {
    if (r.result.verdict == Verdict::Pass) continue;
    std::ostringstream os;
    os << "condition " << condition_name(r.kind) << " at rho=" << r.rho << " is "
       << verdict_name(r.result.verdict);
    out.blocking = os.str();
    out.inconclusive = r.result.verdict == Verdict::Undecided;
    return out;
  }

  std::vector<GapCheck> gaps = gap_requirements(tcase);
  for (GapCheck& g : gaps) {
    double lhs = g.divide_by_c ? rungs[g.from].rho / ctx.c : rungs[g.from].rho;
    g.satisfied = lhs < rungs[g.to].rho;
    if (!g.satisfied) {
      std::ostringstream os;
      os << "gap constraint violated: rho_" << g.from + 1 << (g.divide_by_c ? "/c" : "")
         << " = " << lhs << " must be < rho_" << g.to + 1 << " = " << rungs[g.to].rho;
      out.blocking = os.str();
      return out;
    }
  }

  Certificate cert;
  cert.tcase = tcase;
  cert.system = ctx.system();
  cert.rungs = rungs;
  cert.gaps = gaps;
  cert.solutions = solutions_for_case(tcase);
  cert.windows = derive_windows(tcase, ctx, rungs, budget);
  cert.constants = ctx.constants;
  cert.c = ctx.c;
  out.certificate = std::move(cert);
  return out;
}

namespace {

// Label cache for the auto-ladder grid: one entry per (slot kind, grid index).
struct GridSearch {
  const ConditionContext& ctx;
  const std::vector<double>& grid;
  long budget;
  std::map<std::pair<int, int>, ConditionResult> cache;

  static int slot_key(const ConditionKind& k) {
    if (k.type == ConditionType::I0Star) return 10 + k.eq;
    return static_cast<int>(k.type);
  }

  const ConditionResult& result_for(const ConditionKind& kind, int idx) {
    auto key = std::make_pair(slot_key(kind), idx);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, check_condition(ctx, kind, grid[idx], budget)).first;
    return it->second;
  }

  bool passes(const ConditionKind& kind, int idx) {
    return result_for(kind, idx).verdict == Verdict::Pass;
  }
};

// First-rung alternatives: plain I0 first, then the I0* variants for
// systems (index-mode only).
std::vector<ConditionKind> slot_alternatives(ConditionType slot, bool system) {
  if (slot == ConditionType::I0 && system)
    return {{ConditionType::I0, 1}, {ConditionType::I0Star, 1}, {ConditionType::I0Star, 2}};
  return {{slot, 1}};
}

bool extend_ladder(GridSearch& gs, const std::vector<ConditionType>& pattern,
                   const std::vector<GapCheck>& gaps, std::size_t pos,
                   std::vector<int>& picked, std::vector<ConditionKind>& kinds) {
  if (pos == pattern.size()) return true;
  double lower_bound = -1.0;
  if (pos > 0) {
    for (const GapCheck& g : gaps) {
      if (g.to != static_cast<int>(pos)) continue;
      double base = gs.grid[picked[g.from]];
      if (g.divide_by_c) base /= gs.ctx.c;
      lower_bound = std::max(lower_bound, base);
    }
  }
  std::vector<ConditionKind> alts =
      pos == 0 ? slot_alternatives(pattern[0], gs.ctx.system())
               : std::vector<ConditionKind>{{pattern[pos], 1}};
  int start = 0;
  if (pos > 0) start = picked[pos - 1] + 1;
  for (int idx = start; idx < static_cast<int>(gs.grid.size()); ++idx) {
    if (pos > 0 && !(gs.grid[idx] > lower_bound)) continue;
    for (const ConditionKind& kind : alts) {
      if (!gs.passes(kind, idx)) continue;
      picked[pos] = idx;
      kinds[pos] = kind;
      if (extend_ladder(gs, pattern, gaps, pos + 1, picked, kinds)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::vector<Rung>> auto_ladder(const ConditionContext& ctx, Mode mode,
                                           const AutoLadderOptions& opts) {
  if (!(opts.rho_min > 0.0 && opts.rho_min < opts.rho_max))
    throw std::invalid_argument("auto ladder needs 0 < rho_min < rho_max");
  if (opts.points_per_decade < 1)
    throw std::invalid_argument("points_per_decade must be positive");

  std::vector<double> grid;
  double decades = std::log10(opts.rho_max / opts.rho_min);
  long count = static_cast<long>(std::floor(decades * opts.points_per_decade));
  for (long k = 0; k <= count; ++k) {
    double rho = opts.rho_min * std::pow(10.0, static_cast<double>(k) / opts.points_per_decade);
    if (rho > opts.rho_max) break;
    grid.push_back(rho);
  }
  if (grid.empty() || grid.back() < opts.rho_max) grid.push_back(opts.rho_max);

  std::vector<TheoremCase> cases;
  if (opts.target) {
    cases = {*opts.target};
  } else if (mode == Mode::Krasnoselskii) {
    cases = {TheoremCase::H1, TheoremCase::H2};
  } else {
    cases = {TheoremCase::S5, TheoremCase::S6, TheoremCase::S3,
             TheoremCase::S4, TheoremCase::S1, TheoremCase::S2};
  }
  for (TheoremCase c : cases) {
    bool k_case = c == TheoremCase::H1 || c == TheoremCase::H2;
    if (k_case != (mode == Mode::Krasnoselskii))
      throw std::invalid_argument("theorem case does not match the requested mode");
  }

  GridSearch gs{ctx, grid, opts.budget, {}};
  std::vector<std::vector<Rung>> found;
  for (TheoremCase c : cases) {
    std::vector<ConditionType> pattern = case_pattern(c);
    std::vector<GapCheck> gaps = gap_requirements(c);
    std::vector<int> picked(pattern.size(), -1);
    std::vector<ConditionKind> kinds(pattern.size());
    if (!extend_ladder(gs, pattern, gaps, 0, picked, kinds)) continue;

    // The greedy pass takes the smallest feasible radii. Raising
    // sup-type rungs (I1, K_upper) to the top of their passing region
    // sharpens the windows; inf-type rungs stay at their smallest radius.
    for (int i = static_cast<int>(pattern.size()) - 1; i >= 0; --i) {
      bool sup_type = kinds[i].type == ConditionType::I1 || kinds[i].type == ConditionType::KUpper;
      if (!sup_type) continue;
      double lo_bound = -1.0, hi_bound = std::numeric_limits<double>::infinity();
      for (const GapCheck& g : gaps) {
        if (g.to == i) {
          double base = grid[picked[g.from]];
          lo_bound = std::max(lo_bound, g.divide_by_c ? base / gs.ctx.c : base);
        }
        if (g.from == i) {
          double top = grid[picked[g.to]];
          hi_bound = std::min(hi_bound, g.divide_by_c ? top * gs.ctx.c : top);
        }
      }
      int idx_lo = i > 0 ? picked[i - 1] + 1 : 0;
      int idx_hi = i + 1 < static_cast<int>(pattern.size()) ? picked[i + 1] - 1
                                                            : static_cast<int>(grid.size()) - 1;
      for (int idx = idx_hi; idx > picked[i]; --idx) {
        if (idx < idx_lo) break;
        if (!(grid[idx] < hi_bound)) continue;
        if (i > 0 && !(grid[idx] > lo_bound)) break;
        if (gs.passes(kinds[i], idx)) {
          picked[i] = idx;
          break;
        }
      }
    }

    std::vector<Rung> rungs;
    for (std::size_t i = 0; i < pattern.size(); ++i)
      rungs.push_back({kinds[i], grid[picked[i]], gs.result_for(kinds[i], picked[i])});
    found.push_back(std::move(rungs));
  }
  return found;
}

std::optional<Certificate> best_certificate(std::vector<Certificate> candidates) {
  if (candidates.empty()) return std::nullopt;
  auto coverage = [](const Certificate& c) {
    double total = 0.0;
    for (const auto& w : c.windows) total += w[1] - w[0];
    return total;
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Certificate& a, const Certificate& b) {
                     if (a.solutions != b.solutions) return a.solutions > b.solutions;
                     double ca = coverage(a), cb = coverage(b);
                     if (ca != cb) return ca > cb;
                     return static_cast<int>(a.tcase) < static_cast<int>(b.tcase);
                   });
  return candidates.front();
}

bool revalidate(const Certificate& cert, const ConditionContext& ctx, long budget) {
  for (const Rung& r : cert.rungs) {
    ConditionResult res = check_condition(ctx, r.kind, r.rho, budget);
    if (res.verdict != Verdict::Pass) return false;
  }
  for (const GapCheck& g : gap_requirements(cert.tcase)) {
    double lhs = g.divide_by_c ? cert.rungs[g.from].rho / cert.c : cert.rungs[g.from].rho;
    if (!(lhs < cert.rungs[g.to].rho)) return false;
  }
  return true;
}

}  // namespace positone
