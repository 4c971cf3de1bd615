#include <cmath>
#include <random>

#include "doctest.h"
#include "positone/certify.hpp"

using namespace positone;

namespace {

std::mt19937_64 rng(777);

double rand_in(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

const KernelSpec kDirichlet{BcKind::DirichletDirichlet};
const KernelSpec kRobin{BcKind::DirichletNeumann};

ConditionContext scalar_ctx(const std::string& f_text, KernelSpec k, ParamMap params = {}) {
  Program p = compile(*parse(f_text), params);
  Constants c = compute_constants(k, default_window(k));
  return make_context({p}, {c});
}

ConditionContext sys_example_ctx() {
  Program p1 = compile(*parse("18+sin(u*v)"));
  Program p2 = compile(*parse("exp((u^2+v^2)/25)-1"));
  Constants c1 = compute_constants(kDirichlet, default_window(kDirichlet));
  Constants c2 = compute_constants(kRobin, default_window(kRobin));
  return make_context({p1, p2}, {c1, c2});
}

Rung checked_rung(const ConditionContext& ctx, ConditionKind kind, double rho) {
  return Rung{kind, rho, check_condition(ctx, kind, rho)};
}

Rung fake_pass(ConditionKind kind, double rho) {
  ConditionResult r;
  r.verdict = Verdict::Pass;
  return Rung{kind, rho, r};
}

}  // namespace

TEST_CASE("case inference covers every ladder pattern") {
  using CT = ConditionType;
  auto kinds = [](std::initializer_list<CT> types) {
    std::vector<ConditionKind> out;
    for (CT t : types) out.push_back({t, 1});
    return out;
  };
  CHECK(infer_case(kinds({CT::KUpper, CT::KLower}), false) == TheoremCase::H1);
  CHECK(infer_case(kinds({CT::KLower, CT::KUpper}), false) == TheoremCase::H2);
  CHECK(infer_case(kinds({CT::I0, CT::I1}), false) == TheoremCase::S1);
  CHECK(infer_case(kinds({CT::I0Star, CT::I1}), true) == TheoremCase::S1);
  CHECK(infer_case(kinds({CT::I1, CT::I0}), false) == TheoremCase::S2);
  CHECK(infer_case(kinds({CT::I0, CT::I1, CT::I0}), false) == TheoremCase::S3);
  CHECK(infer_case(kinds({CT::I1, CT::I0, CT::I1}), false) == TheoremCase::S4);
  CHECK(infer_case(kinds({CT::I0, CT::I1, CT::I0, CT::I1}), false) == TheoremCase::S5);
  CHECK(infer_case(kinds({CT::I1, CT::I0, CT::I1, CT::I0}), false) == TheoremCase::S6);
  // I0* only substitutes at the bottom rung of a system ladder
  CHECK_THROWS_AS(infer_case(kinds({CT::I0Star, CT::I1}), false), std::invalid_argument);
  CHECK_THROWS_AS(infer_case(kinds({CT::I0, CT::I1, CT::I0Star, CT::I1}), true),
                  std::invalid_argument);
  CHECK_THROWS_AS(infer_case(kinds({CT::I1, CT::I1}), false), std::invalid_argument);
}

TEST_CASE("assemble: quadratic Dirichlet problem in K-mode") {
  ConditionContext ctx = scalar_ctx("lambda*u^2", kDirichlet, {{"lambda", 256.0}});
  std::vector<Rung> rungs = {
      checked_rung(ctx, {ConditionType::KUpper}, 1.0 / 32.0),
      checked_rung(ctx, {ConditionType::KLower}, 1.0),
  };
  AssembleOutcome out = assemble(ctx, rungs);
  REQUIRE(out.certificate.has_value());
  const Certificate& cert = *out.certificate;
  CHECK(cert.tcase == TheoremCase::H1);
  CHECK(cert.solutions == 1);
  REQUIRE(cert.windows.size() == 1);
  CHECK(cert.windows[0][0] == 1.0 / 32.0);
  CHECK(cert.windows[0][1] == 1.0);
  CHECK(revalidate(cert, ctx));
}

TEST_CASE("assemble: system example certifies S1 with window [1, 4]") {
  ConditionContext ctx = sys_example_ctx();
  std::vector<Rung> rungs = {
      checked_rung(ctx, {ConditionType::I0Star, 1}, 1.0),
      checked_rung(ctx, {ConditionType::I1}, 5.0),
  };
  AssembleOutcome out = assemble(ctx, rungs);
  REQUIRE(out.certificate.has_value());
  CHECK(out.certificate->tcase == TheoremCase::S1);
  CHECK(out.certificate->solutions == 1);
  REQUIRE(out.certificate->windows.size() == 1);
  CHECK(out.certificate->windows[0][0] == 1.0);
  CHECK(out.certificate->windows[0][1] == 4.0);  // min(rho2, rho1/c) with c = 1/4
  CHECK(revalidate(*out.certificate, ctx));
}

TEST_CASE("assemble rejects gap violations") {
  ConditionContext ctx = sys_example_ctx();
  std::vector<Rung> rungs = {
      fake_pass({ConditionType::I0Star, 1}, 1.0),
      fake_pass({ConditionType::I1}, 3.0),  // needs rho1/c = 4 < rho2
  };
  AssembleOutcome out = assemble(ctx, rungs);
  CHECK(!out.certificate.has_value());
  CHECK(out.blocking.find("gap") != std::string::npos);
}

TEST_CASE("assemble reports the blocking condition and undecided flag") {
  ConditionContext ctx = scalar_ctx("lambda*u^2", kDirichlet, {{"lambda", 255.0}});
  std::vector<Rung> rungs = {
      checked_rung(ctx, {ConditionType::KUpper}, 1.0 / 32.0),
      checked_rung(ctx, {ConditionType::KLower}, 1.0),  // fails at lambda = 255
  };
  AssembleOutcome out = assemble(ctx, rungs);
  CHECK(!out.certificate.has_value());
  CHECK(!out.inconclusive);  // a FAIL, not an undecided
  CHECK(out.blocking.find("K_lower") != std::string::npos);

  std::vector<Rung> empty;
  CHECK(assemble(ctx, empty).blocking == "empty ladder");
}

TEST_CASE("window arithmetic for the richer cases") {
  ConditionContext ctx = scalar_ctx("u", kRobin);  // c = 1/2
  // S5 shape: I0, I1, I0, I1 with gaps rho1/c < rho2 < rho3, rho3/c < rho4
  std::vector<Rung> rungs = {
      fake_pass({ConditionType::I0}, 1.0),
      fake_pass({ConditionType::I1}, 3.0),
      fake_pass({ConditionType::I0}, 4.0),
      fake_pass({ConditionType::I1}, 9.0),
  };
  AssembleOutcome out = assemble(ctx, rungs);
  REQUIRE(out.certificate.has_value());
  CHECK(out.certificate->tcase == TheoremCase::S5);
  CHECK(out.certificate->solutions == 3);
  REQUIRE(out.certificate->windows.size() == 3);
  CHECK(out.certificate->windows[0] == std::array<double, 2>{1.0, 2.0});  // min(3, 1/c)
  CHECK(out.certificate->windows[1] == std::array<double, 2>{3.0, 8.0});  // [rho2, rho3/c]
  CHECK(out.certificate->windows[2] == std::array<double, 2>{4.0, 8.0});  // min(9, rho3/c)
  // ordered windows
  for (std::size_t i = 0; i + 1 < out.certificate->windows.size(); ++i)
    CHECK(out.certificate->windows[i][0] <= out.certificate->windows[i + 1][0]);
}

TEST_CASE("window tightening to rho/c is claimed only when verified") {
  // constant nonlinearity: T is a constant map whose unique fixed point
  // t(1-t)/2 has norm 1/8; an index-0 radius far below that norm must
  // not shrink the window past the generic index-1 bound
  ConditionContext ctx = scalar_ctx("1", kDirichlet);
  std::vector<Rung> rungs = {
      checked_rung(ctx, {ConditionType::I0}, 0.01),
      checked_rung(ctx, {ConditionType::I1}, 0.2),
  };
  REQUIRE(rungs[0].result.verdict == Verdict::Pass);
  REQUIRE(rungs[1].result.verdict == Verdict::Pass);
  AssembleOutcome out = assemble(ctx, rungs);
  REQUIRE(out.certificate.has_value());
  // I1 fails at 0.01/c = 0.04 (sup f = 1 > 8 * 0.04), so the window
  // keeps the generic upper bound and still contains the solution norm
  CHECK(out.certificate->windows[0][0] == 0.01);
  CHECK(out.certificate->windows[0][1] == 0.2);
  CHECK(out.certificate->windows[0][0] <= 0.125);
  CHECK(0.125 <= out.certificate->windows[0][1]);
}

TEST_CASE("gap arithmetic is re-checked from raw radii for every case") {
  ConditionContext ctx = scalar_ctx("u", kDirichlet);  // c = 1/4
  for (TheoremCase c : {TheoremCase::H1, TheoremCase::H2, TheoremCase::S1, TheoremCase::S2,
                        TheoremCase::S3, TheoremCase::S4, TheoremCase::S5, TheoremCase::S6}) {
    std::vector<ConditionType> pattern = case_pattern(c);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Rung> rungs;
      double rho = rand_in(0.01, 1.0);
      for (ConditionType t : pattern) {
        rungs.push_back(fake_pass({t, 1}, rho));
        rho *= rand_in(1.1, 8.0);
      }
      AssembleOutcome out = assemble(ctx, rungs);
      bool gaps_ok = true;
      for (const GapCheck& g : gap_requirements(c)) {
        double lhs = g.divide_by_c ? rungs[g.from].rho / ctx.c : rungs[g.from].rho;
        gaps_ok = gaps_ok && lhs < rungs[g.to].rho;
      }
      CHECK(out.certificate.has_value() == gaps_ok);
    }
  }
}

TEST_CASE("auto ladder finds the K-mode ladder of the quadratic example") {
  ConditionContext ctx = scalar_ctx("lambda*u^2", kDirichlet, {{"lambda", 256.0}});
  AutoLadderOptions opts;
  opts.rho_min = 1e-3;
  opts.rho_max = 2.0;
  auto ladders = auto_ladder(ctx, Mode::Krasnoselskii, opts);
  REQUIRE(!ladders.empty());
  const std::vector<Rung>& rungs = ladders.front();
  REQUIRE(rungs.size() == 2);
  CHECK(rungs[0].kind.type == ConditionType::KUpper);
  CHECK(rungs[1].kind.type == ConditionType::KLower);
  // up to grid resolution: rho1 just below 1/32, rho2 the first radius >= 1
  CHECK(rungs[0].rho > 1.0 / 32.0 * 0.9);
  CHECK(rungs[0].rho <= 1.0 / 32.0 * (1 + 1e-12));
  CHECK(rungs[1].rho == doctest::Approx(1.0).epsilon(1e-3));
  AssembleOutcome out = assemble(ctx, rungs);
  REQUIRE(out.certificate.has_value());
  CHECK(revalidate(*out.certificate, ctx));
}

TEST_CASE("auto ladder in index mode: quadratic example yields an S2 ladder") {
  // strict conditions: I1 passes below 1/32, I0 above 1/16; only the
  // I1-then-I0 pattern fits
  ConditionContext ctx = scalar_ctx("lambda*u^2", kDirichlet, {{"lambda", 256.0}});
  AutoLadderOptions opts;
  opts.rho_min = 1e-3;
  opts.rho_max = 2.0;
  auto ladders = auto_ladder(ctx, Mode::Index, opts);
  REQUIRE(!ladders.empty());
  for (const auto& rungs : ladders) {
    AssembleOutcome out = assemble(ctx, rungs);
    REQUIRE(out.certificate.has_value());
    CHECK(out.certificate->tcase == TheoremCase::S2);
    // direct re-check of every rung
    for (const Rung& r : rungs)
      CHECK(check_condition(ctx, r.kind, r.rho).verdict == Verdict::Pass);
    CHECK(rungs[0].rho < 1.0 / 32.0);
    CHECK(rungs[1].rho > 1.0 / 16.0);
  }
}

TEST_CASE("auto ladder: zero nonlinearity has no index-0 radius") {
  ConditionContext ctx = scalar_ctx("0", kDirichlet);
  AutoLadderOptions opts;
  opts.rho_min = 1e-2;
  opts.rho_max = 10.0;
  CHECK(auto_ladder(ctx, Mode::Index, opts).empty());
  CHECK(auto_ladder(ctx, Mode::Krasnoselskii, opts).empty());
}

TEST_CASE("auto ladder candidates re-validate through check_condition") {
  ConditionContext ctx = scalar_ctx("0.1+10*u^2/(1+u^2)", kRobin);
  AutoLadderOptions opts;
  opts.rho_min = 0.01;
  opts.rho_max = 10.0;
  auto ladders = auto_ladder(ctx, Mode::Index, opts);
  REQUIRE(!ladders.empty());
  int certified = 0;
  for (const auto& rungs : ladders) {
    for (const Rung& r : rungs) {
      ConditionResult again = check_condition(ctx, r.kind, r.rho);
      CHECK(again.verdict == Verdict::Pass);
    }
    AssembleOutcome out = assemble(ctx, rungs);
    if (out.certificate) {
      ++certified;
      CHECK(revalidate(*out.certificate, ctx));
    }
  }
  CHECK(certified == static_cast<int>(ladders.size()));
}

TEST_CASE("auto ladder reaches the two-solution case on a saturating nonlinearity") {
  // f = 0.1 + 10 u^2/(1+u^2) on the mixed-BC problem: I1 passes for small
  // and large radii, I0 in between
  ConditionContext ctx = scalar_ctx("0.1+10*u^2/(1+u^2)", kRobin);
  AutoLadderOptions opts;
  opts.rho_min = 0.01;
  opts.rho_max = 20.0;
  opts.target = TheoremCase::S4;
  auto ladders = auto_ladder(ctx, Mode::Index, opts);
  REQUIRE(!ladders.empty());
  AssembleOutcome out = assemble(ctx, ladders.front());
  REQUIRE(out.certificate.has_value());
  CHECK(out.certificate->tcase == TheoremCase::S4);
  CHECK(out.certificate->solutions == 2);
}

TEST_CASE("auto ladder is robust to shrinking the range around a found ladder") {
  ConditionContext ctx = scalar_ctx("lambda*u^2", kDirichlet, {{"lambda", 256.0}});
  AutoLadderOptions wide;
  wide.rho_min = 1e-3;
  wide.rho_max = 2.0;
  auto ladders = auto_ladder(ctx, Mode::Krasnoselskii, wide);
  REQUIRE(!ladders.empty());
  AutoLadderOptions narrow;
  narrow.rho_min = ladders.front().front().rho * 0.5;
  narrow.rho_max = ladders.front().back().rho * 1.5;
  auto again = auto_ladder(ctx, Mode::Krasnoselskii, narrow);
  REQUIRE(!again.empty());
  CHECK(assemble(ctx, again.front()).certificate.has_value());
}

TEST_CASE("best_certificate ranks by solutions then coverage") {
  Certificate one;
  one.tcase = TheoremCase::S1;
  one.solutions = 1;
  one.windows = {{1.0, 4.0}};
  Certificate two;
  two.tcase = TheoremCase::S3;
  two.solutions = 2;
  two.windows = {{1.0, 4.0}, {5.0, 8.0}};
  Certificate widest;
  widest.tcase = TheoremCase::S2;
  widest.solutions = 1;
  widest.windows = {{1.0, 9.0}};

  auto best = best_certificate({one, two, widest});
  REQUIRE(best.has_value());
  CHECK(best->tcase == TheoremCase::S3);
  auto tie = best_certificate({one, widest});
  REQUIRE(tie.has_value());
  CHECK(tie->tcase == TheoremCase::S2);  // wider coverage wins the tie
  CHECK(!best_certificate({}).has_value());
}

TEST_CASE("mode and case names round-trip") {
  for (TheoremCase c : {TheoremCase::H1, TheoremCase::H2, TheoremCase::S1, TheoremCase::S2,
                        TheoremCase::S3, TheoremCase::S4, TheoremCase::S5, TheoremCase::S6})
    CHECK(case_from_name(case_name(c)) == c);
  CHECK(mode_from_name(mode_name(Mode::Index)) == Mode::Index);
  CHECK(mode_from_name(mode_name(Mode::Krasnoselskii)) == Mode::Krasnoselskii);
  CHECK_THROWS_AS(case_from_name("S9"), std::invalid_argument);
}
