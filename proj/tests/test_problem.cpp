#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "positone/report.hpp"

using namespace positone;

namespace {

std::string data_path(const std::string& name) {
  return std::string(POSITONE_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("problem files parse with all fields") {
  ProblemFile pf = load_problem(data_path("es1.json"));
  CHECK(pf.equations.size() == 1);
  CHECK(pf.equations[0].bc == BcKind::DirichletDirichlet);
  CHECK(pf.params.at("lambda") == 256.0);
  CHECK(pf.mode == Mode::Krasnoselskii);
  REQUIRE(pf.ladder.entries.size() == 2);
  CHECK(pf.ladder.entries[0].kind == "K_upper");
  CHECK(pf.ladder.entries[1].rho == 1.0);
  CHECK(pf.solver.n == 201);
  CHECK(pf.budget == 100000);
  REQUIRE(pf.slope_range.has_value());
  CHECK((*pf.slope_range)[1] == 5.0);
}

TEST_CASE("problem validation errors carry context") {
  CHECK_THROWS_WITH_AS(parse_problem("{"), doctest::Contains("not valid JSON"), ProblemError);
  CHECK_THROWS_WITH_AS(parse_problem(R"({"equations": []})"),
                       doctest::Contains("equations"), ProblemError);
  CHECK_THROWS_WITH_AS(
      parse_problem(
          R"({"equations": [{"bc": "periodic", "f": "u"}], "ladder": {"auto": [0.1, 1]}})"),
      doctest::Contains("boundary condition"), ProblemError);
  CHECK_THROWS_WITH_AS(
      parse_problem(
          R"({"equations": [{"bc": "dirichlet-dirichlet", "f": "2**u"}], "ladder": {"auto": [0.1, 1]}})"),
      doctest::Contains("offset"), ProblemError);
  CHECK_THROWS_WITH_AS(
      parse_problem(
          R"({"equations": [{"bc": "dirichlet-dirichlet", "f": "u"}],
              "ladder": {"entries": [{"rho": 1.0, "kind": "I1"}, {"rho": 0.5, "kind": "I0"}]}})"),
      doctest::Contains("increasing"), ProblemError);
  CHECK_THROWS_WITH_AS(
      parse_problem(
          R"({"equations": [{"bc": "dirichlet-dirichlet", "f": "u"}], "ladder": {}})"),
      doctest::Contains("entries"), ProblemError);
}

TEST_CASE("prepare compiles, derives windows, and catches unbound parameters") {
  ProblemSetup sys = prepare(load_problem(data_path("sys_ex.json")));
  CHECK(sys.ctx.system());
  CHECK(sys.constants[0].m == 8.0);
  CHECK(sys.constants[0].M == 16.0);
  CHECK(sys.constants[1].m == 2.0);
  CHECK(sys.constants[1].M == 4.0);
  CHECK(sys.ctx.c == 0.25);

  ProblemFile unbound = parse_problem(
      R"({"equations": [{"bc": "dirichlet-dirichlet", "f": "mu*u"}], "ladder": {"auto": [0.1, 1]}})");
  CHECK_THROWS_WITH_AS(prepare(unbound), doctest::Contains("unbound"), ProblemError);

  ProblemFile v_scalar = parse_problem(
      R"({"equations": [{"bc": "dirichlet-dirichlet", "f": "u*v"}], "ladder": {"auto": [0.1, 1]}})");
  CHECK_THROWS_AS(prepare(v_scalar), ProblemError);

  ProblemFile k_system = parse_problem(
      R"({"equations": [{"bc": "dirichlet-dirichlet", "f": "u"},
                        {"bc": "dirichlet-neumann", "f": "v"}],
          "mode": "krasnoselskii", "ladder": {"auto": [0.1, 1]}})");
  CHECK_THROWS_AS(prepare(k_system), ProblemError);
}

TEST_CASE("window override is honored") {
  ProblemFile pf = parse_problem(
      R"({"equations": [{"bc": "dirichlet-neumann", "f": "u", "window": [0.25, 0.75]}],
          "ladder": {"auto": [0.1, 1]}})");
  ProblemSetup s = prepare(pf);
  CHECK(s.windows[0].a == 0.25);
  CHECK(s.windows[0].b == 0.75);
  CHECK(s.windows[0].c == 0.25);
  CHECK(s.constants[0].M == doctest::Approx(8.0).epsilon(1e-12));  // 1/(a(b-a))
}

TEST_CASE("run_certify: quadratic example end to end") {
  CertifyRun run = run_certify(prepare(load_problem(data_path("es1.json"))));
  REQUIRE(run.certificate.has_value());
  CHECK(run.certificate->tcase == TheoremCase::H1);
  CHECK(run.certificate->solutions == 1);
  CHECK(run.certificate->windows[0][0] == 0.03125);
  CHECK(run.certificate->windows[0][1] == 1.0);
  REQUIRE(run.nonnegativity.size() == 1);
  CHECK(run.nonnegativity[0].verdict == Verdict::Pass);
}

TEST_CASE("run_certify: just below the critical parameter the lower check fails") {
  CertifyRun run = run_certify(prepare(load_problem(data_path("es1_lambda255.json"))));
  CHECK(!run.certificate.has_value());
  CHECK(!run.inconclusive);
  CHECK(run.message.find("K_lower") != std::string::npos);
}

TEST_CASE("run_certify: system example certifies S1 with window [1,4]") {
  CertifyRun run = run_certify(prepare(load_problem(data_path("sys_ex.json"))));
  REQUIRE(run.certificate.has_value());
  CHECK(run.certificate->tcase == TheoremCase::S1);
  CHECK(run.certificate->windows[0][0] == 1.0);
  CHECK(run.certificate->windows[0][1] == 4.0);
}

TEST_CASE("run_certify: zero nonlinearity is not certifiable") {
  CertifyRun run = run_certify(prepare(load_problem(data_path("zero.json"))));
  CHECK(!run.certificate.has_value());
}

TEST_CASE("run_solve without a certificate finds only the trivial fixed point") {
  SolveRun run = run_solve(prepare(load_problem(data_path("zero.json"))));
  CHECK(!run.certify.certificate.has_value());
  CHECK(run.solutions.empty());
  CHECK(!run.confirmation.has_value());
}

TEST_CASE("nonnegativity precheck blocks sign-violating nonlinearities") {
  ProblemFile pf = parse_problem(
      R"({"equations": [{"bc": "dirichlet-dirichlet", "f": "u-1"}],
          "ladder": {"entries": [{"rho": 1.0, "kind": "I1"}]}})");
  CertifyRun run = run_certify(prepare(pf));
  CHECK(!run.certificate.has_value());
  CHECK(run.message.find("nonnegativity") != std::string::npos);
}

TEST_CASE("run_solve: constant load certifies, solves to norm 1/8, confirms") {
  SolveRun run = run_solve(prepare(load_problem(data_path("f_one.json"))));
  REQUIRE(run.certify.certificate.has_value());
  const auto& w = run.certify.certificate->windows[0];
  CHECK(w[0] <= 0.125);
  CHECK(0.125 <= w[1]);
  REQUIRE(!run.solutions.empty());
  bool hit = false;
  for (const auto& [sol, method] : run.solutions)
    hit = hit || std::abs(sol.max_norm - 0.125) < 1e-6;
  CHECK(hit);
  REQUIRE(run.confirmation.has_value());
  CHECK(run.confirmation->all_confirmed);
}

TEST_CASE("run_solve: two-solution S4 certificate with every window confirmed") {
  SolveRun run = run_solve(prepare(load_problem(data_path("robin_s4_auto.json"))));
  REQUIRE(run.certify.certificate.has_value());
  CHECK(run.certify.certificate->tcase == TheoremCase::S4);
  CHECK(run.certify.certificate->solutions == 2);
  // the saturating nonlinearity actually has a third solution below the
  // certified radii; multistart picks it up too
  CHECK(run.solutions.size() >= 2);
  REQUIRE(run.confirmation.has_value());
  CHECK(run.confirmation->all_confirmed);
  for (const auto& [sol, method] : run.solutions) {
    CHECK(sol.residual < 1e-6);
    CHECK(cone_check(sol, {default_window(KernelSpec{BcKind::DirichletNeumann})}).pass);
  }
}

TEST_CASE("run_solve: three-solution certificate on a double-saturating nonlinearity") {
  SolveRun run = run_solve(prepare(load_problem(data_path("robin_triple_auto.json"))));
  REQUIRE(run.certify.certificate.has_value());
  CHECK(run.certify.certificate->solutions == 3);
  CHECK(run.certify.certificate->windows.size() == 3);
  CHECK(run.solutions.size() >= 3);
  REQUIRE(run.confirmation.has_value());
  CHECK(run.confirmation->all_confirmed);
  // distinct norms, one per window
  std::set<std::string> methods;
  for (const auto& w : run.confirmation->windows) methods.insert(w.method);
  CHECK(!methods.empty());
}

TEST_CASE("certificate JSON round-trips") {
  CertifyRun run = run_certify(prepare(load_problem(data_path("sys_ex.json"))));
  REQUIRE(run.certificate.has_value());
  nlohmann::json j1 = certificate_to_json(*run.certificate);
  Certificate back = certificate_from_json(j1);
  nlohmann::json j2 = certificate_to_json(back);
  CHECK(j1 == j2);
}

TEST_CASE("region bands reproduce the threshold levels") {
  ProblemSetup setup = prepare(load_problem(data_path("robin_s2.json")));
  std::vector<Rung> rungs;
  for (const LadderEntrySpec& e : setup.file.ladder.entries)
    rungs.push_back({condition_from_name(e.kind, e.eq), e.rho, {}});
  std::vector<RegionBand> bands = region_bands(setup, rungs);
  REQUIRE(bands.size() == 2);
  // I1 cap at m*rho1 = 2 * 0.1 on [0, rho1]
  CHECK(bands[0].kind == "I1");
  CHECK(bands[0].u_lo == 0.0);
  CHECK(bands[0].u_hi == 0.1);
  CHECK(bands[0].lower == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::isinf(bands[0].upper));
  // cross-command consistency: band levels are exactly the m*rho / M*rho
  // thresholds the constants command reports
  CHECK(bands[0].lower == setup.constants[0].m * rungs[0].rho);
  CHECK(bands[1].upper == setup.constants[0].M * rungs[1].rho);
  // I0 floor at M*rho2 = 4 on [rho2, rho2/c] = [1, 2]
  CHECK(bands[1].kind == "I0");
  CHECK(bands[1].u_lo == 1.0);
  CHECK(bands[1].u_hi == 2.0);
  CHECK(bands[1].lower == 0.0);
  CHECK(bands[1].upper == doctest::Approx(4.0).epsilon(1e-12));

  std::ostringstream csv;
  write_region_csv(csv, bands, 11);
  std::string text = csv.str();
  CHECK(text.find("u,band_id,lower,upper,kind") == 0);
  CHECK(text.find("inf") != std::string::npos);

  std::ostringstream empty;
  write_region_csv(empty, {}, 11);
  CHECK(empty.str() == "u,band_id,lower,upper,kind\n");
}

TEST_CASE("solution CSV has the contract columns") {
  DiscreteSolution sol;
  sol.grid = {0.0, 0.5, 1.0};
  sol.values = {{0.0, 0.125, 0.0}, {0.0, 0.25, 0.5}};
  std::ostringstream os;
  write_solution_csv(os, sol);
  CHECK(os.str() == "t,u,v\n0,0,0\n0.5,0.125,0.25\n1,0,0.5\n");
}

TEST_CASE("constants report renders both ways") {
  ProblemSetup setup = prepare(load_problem(data_path("sys_ex.json")));
  nlohmann::json j = constants_to_json(setup);
  CHECK(j["c"] == 0.25);
  CHECK(j["equations"].size() == 2);
  CHECK(j["equations"][0]["m"] == 8.0);
  CHECK(j["equations"][1]["M"] == 4.0);
  std::string text = constants_to_text(setup);
  CHECK(text.find("m      = 8") != std::string::npos);
  CHECK(text.find("overall c = 0.25") != std::string::npos);
}
