#include "positone/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace positone {

std::string condition_name(const ConditionKind& k) {
  switch (k.type) {
    case ConditionType::I1: return "I1";
    case ConditionType::I0: return "I0";
    case ConditionType::I0Star: return "I0*";
    case ConditionType::KUpper: return "K_upper";
    case ConditionType::KLower: return "K_lower";
  }
  return "?";
}

ConditionKind condition_from_name(const std::string& name, int eq) {
  if (name == "I1") return {ConditionType::I1, eq};
  if (name == "I0") return {ConditionType::I0, eq};
  if (name == "I0*" || name == "I0star") return {ConditionType::I0Star, eq};
  if (name == "K_upper") return {ConditionType::KUpper, eq};
  if (name == "K_lower") return {ConditionType::KLower, eq};
  throw std::invalid_argument("unknown condition kind '" + name + "'");
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

ConditionContext make_context(const std::vector<Program>& fs,
                              const std::vector<Constants>& constants) {
  if (fs.empty() || fs.size() > 2 || fs.size() != constants.size())
    throw std::invalid_argument("context needs one or two equations with constants");
  ConditionContext ctx;
  ctx.f = fs;
  ctx.constants = constants;
  ctx.c = constants[0].window.c;
  for (const Constants& k : constants) ctx.c = std::min(ctx.c, k.window.c);
  return ctx;
}

Box box_for(const ConditionKind& kind, double rho, double c, int dims, int which_eq) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("c must lie in (0,1]");
  Interval full{0.0, rho / c};
  Interval low{0.0, rho};
  Interval band{rho, rho / c};
  switch (kind.type) {
    case ConditionType::I1:
      return dims == 1 ? Box::line(low) : Box::rect(low, low);
    case ConditionType::I0:
      if (dims == 1) return Box::line(band);
      return which_eq == 1 ? Box::rect(band, full) : Box::rect(full, band);
    case ConditionType::I0Star:
      if (dims == 1) throw std::invalid_argument("I0* is a system condition");
      return Box::rect(full, full);
    case ConditionType::KUpper:
      if (dims != 1) throw std::invalid_argument("K-mode conditions are scalar only");
      return Box::line(low);
    case ConditionType::KLower:
      if (dims != 1) throw std::invalid_argument("K-mode conditions are scalar only");
      return Box::line(Interval{c * rho, rho});
  }
  throw std::invalid_argument("unknown condition kind");
}

double threshold_for(const ConditionKind& kind, int eq, double rho,
                     const ConditionContext& ctx) {
  const Constants& k = ctx.constants.at(eq - 1);
  switch (kind.type) {
    case ConditionType::I1:
    case ConditionType::KUpper:
      return k.m * rho;
    case ConditionType::I0:
    case ConditionType::I0Star:
    case ConditionType::KLower:
      return k.M * rho;
  }
  throw std::invalid_argument("unknown condition kind");
}

namespace {

struct Node {
  Box box;
  Interval bound;
  long seq = 0;
};

// max-heap on the relevant bound endpoint; earlier nodes win ties
struct SupOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound.hi != b.bound.hi) return a.bound.hi < b.bound.hi;
    return a.seq > b.seq;
  }
};
struct InfOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound.lo != b.bound.lo) return a.bound.lo > b.bound.lo;
    return a.seq > b.seq;
  }
};

std::vector<std::vector<double>> sample_points(const Box& box) {
  std::vector<std::vector<double>> pts;
  if (box.dims == 1) {
    const Interval& u = box.iv[0];
    pts = {{u.lo}, {u.hi}, {u.mid()}};
  } else {
    const Interval& u = box.iv[0];
    const Interval& v = box.iv[1];
    pts = {{u.lo, v.lo}, {u.hi, v.lo}, {u.lo, v.hi}, {u.hi, v.hi}, {u.mid(), v.mid()}};
  }
  return pts;
}

bool split_box(const Box& box, Box* left, Box* right) {
  int dim = 0;
  box.widest_dim(&dim);
  double mid = box.iv[dim].mid();
  if (!(mid > box.iv[dim].lo) || !(mid < box.iv[dim].hi)) return false;
  *left = box;
  *right = box;
  left->iv[dim] = Interval{box.iv[dim].lo, mid};
  right->iv[dim] = Interval{mid, box.iv[dim].hi};
  return true;
}

enum class Sense { Sup, Inf };

ConditionResult bound_extremum(const Program& f, const Box& box, double threshold,
                               bool strict, long budget, Sense sense) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (!box.valid()) throw std::invalid_argument("invalid box");
  if (!std::isfinite(threshold)) throw std::invalid_argument("threshold must be finite");

  double slack = std::abs(threshold) * kRelMargin;
  auto bound_clears = [&](const Interval& b) {
    if (sense == Sense::Sup)
      return strict ? b.hi < threshold - slack : b.hi <= threshold + slack + kAbsSlack;
    return strict ? b.lo > threshold + slack : b.lo >= threshold - slack - kAbsSlack;
  };
  auto point_violates = [&](double v) {
    if (sense == Sense::Sup) return strict ? v >= threshold : v > threshold;
    return strict ? v <= threshold : v < threshold;
  };
  auto bound_of = [&](const Interval& b) { return sense == Sense::Sup ? b.hi : b.lo; };
  auto margin_of = [&](double bound) {
    return sense == Sense::Sup ? threshold - bound : bound - threshold;
  };

  ConditionResult res;
  res.threshold = threshold;

  std::priority_queue<Node, std::vector<Node>, SupOrder> sup_q;
  std::priority_queue<Node, std::vector<Node>, InfOrder> inf_q;
  auto push = [&](Node&& n) {
    if (sense == Sense::Sup) sup_q.push(std::move(n));
    else inf_q.push(std::move(n));
  };
  auto pop = [&]() {
    Node n = sense == Sense::Sup ? sup_q.top() : inf_q.top();
    if (sense == Sense::Sup) sup_q.pop();
    else inf_q.pop();
    return n;
  };

  long seq = 0;
  push(Node{box, f.eval_interval(box), seq++});
  res.boxes_explored = 1;

  for (;;) {
    Node top = pop();
    // widest outstanding bound; if it clears, everything does
    if (bound_clears(top.bound)) {
      res.verdict = Verdict::Pass;
      res.bound = bound_of(top.bound);
      res.margin = margin_of(res.bound);
      return res;
    }
    for (const auto& pt : sample_points(top.box)) {
      double v = f.eval(pt);
      if (point_violates(v)) {
        res.verdict = Verdict::Fail;
        res.bound = v;
        res.margin = margin_of(v);
        res.witness = pt;
        return res;
      }
    }
    Box left, right;
    if (res.boxes_explored + 2 > budget || !split_box(top.box, &left, &right)) {
      res.verdict = Verdict::Undecided;
      res.bound = bound_of(top.bound);
      res.margin = margin_of(res.bound);
      return res;
    }
    push(Node{left, f.eval_interval(left), seq++});
    push(Node{right, f.eval_interval(right), seq++});
    res.boxes_explored += 2;
  }
}

ConditionResult combine_all(std::vector<ConditionResult> parts) {
  ConditionResult out;
  out.verdict = Verdict::Pass;
  bool first = true;
  for (const ConditionResult& p : parts) {
    out.boxes_explored += p.boxes_explored;
    if (p.verdict == Verdict::Fail) {
      out.verdict = Verdict::Fail;
      out.margin = p.margin;
      out.bound = p.bound;
      out.threshold = p.threshold;
      out.witness = p.witness;
      out.parts = std::move(parts);
      return out;
    }
    if (p.verdict == Verdict::Undecided) out.verdict = Verdict::Undecided;
    if (first || p.margin < out.margin) {
      out.margin = p.margin;
      out.bound = p.bound;
      out.threshold = p.threshold;
      first = false;
    }
  }
  out.parts = std::move(parts);
  return out;
}

}  // namespace

ConditionResult bound_sup(const Program& f, const Box& box, double threshold,
                          bool strict, long budget) {
  return bound_extremum(f, box, threshold, strict, budget, Sense::Sup);
}

ConditionResult bound_inf(const Program& f, const Box& box, double threshold,
                          bool strict, long budget) {
  return bound_extremum(f, box, threshold, strict, budget, Sense::Inf);
}

ConditionResult check_condition(const ConditionContext& ctx, const ConditionKind& kind,
                                double rho, long budget) {
  int dims = ctx.dims();
  switch (kind.type) {
    case ConditionType::I1: {
      std::vector<ConditionResult> parts;
      for (int eq = 1; eq <= dims; ++eq) {
        Box bx = box_for(kind, rho, ctx.c, dims, eq);
        parts.push_back(bound_sup(ctx.f[eq - 1], bx, threshold_for(kind, eq, rho, ctx),
                                  true, budget));
      }
      return combine_all(std::move(parts));
    }
    case ConditionType::I0: {
      std::vector<ConditionResult> parts;
      for (int eq = 1; eq <= dims; ++eq) {
        Box bx = box_for(kind, rho, ctx.c, dims, eq);
        parts.push_back(bound_inf(ctx.f[eq - 1], bx, threshold_for(kind, eq, rho, ctx),
                                  true, budget));
      }
      return combine_all(std::move(parts));
    }
    case ConditionType::I0Star: {
      if (dims != 2) throw std::invalid_argument("I0* is a system condition");
      if (kind.eq < 1 || kind.eq > 2) throw std::invalid_argument("I0* equation must be 1 or 2");
      Box bx = box_for(kind, rho, ctx.c, dims);
      return bound_inf(ctx.f[kind.eq - 1], bx, threshold_for(kind, kind.eq, rho, ctx),
                       true, budget);
    }
    case ConditionType::KUpper: {
      if (dims != 1) throw std::invalid_argument("K-mode conditions are scalar only");
      Box bx = box_for(kind, rho, ctx.c, dims);
      return bound_sup(ctx.f[0], bx, threshold_for(kind, 1, rho, ctx), false, budget);
    }
    case ConditionType::KLower: {
      if (dims != 1) throw std::invalid_argument("K-mode conditions are scalar only");
      Box bx = box_for(kind, rho, ctx.c, dims);
      return bound_inf(ctx.f[0], bx, threshold_for(kind, 1, rho, ctx), false, budget);
    }
  }
  throw std::invalid_argument("unknown condition kind");
}

ConditionResult check_nonnegativity(const Program& f, const Box& box, long budget) {
  return bound_inf(f, box, 0.0, false, budget);
}

}  // namespace positone
