#include <cmath>

#include "doctest.h"
#include "positone/solver.hpp"

using namespace positone;

namespace {

const KernelSpec kDirichlet{BcKind::DirichletDirichlet};
const KernelSpec kRobin{BcKind::DirichletNeumann};

Program prog(const std::string& text, ParamMap params = {}) {
  return compile(*parse(text), params);
}

Constants constants_of(KernelSpec k) { return compute_constants(k, default_window(k)); }

}  // namespace

TEST_CASE("apply_T with unit load reproduces the row integrals") {
  int n = 201;
  std::vector<double> u(n, 0.0);
  for (KernelSpec k : {kDirichlet, kRobin}) {
    std::vector<double> img = apply_T(prog("1"), k, u);
    for (int j = 0; j < n; ++j) {
      double t = static_cast<double>(j) / (n - 1);
      CHECK(std::abs(img[j] - kernel_row_integral(k, t, 0.0, 1.0)) < 1e-8);
    }
  }
}

TEST_CASE("apply_T reproduces the Green operator eigenrelation") {
  int n = 201;
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = std::sin(M_PI * j / (n - 1.0));
  std::vector<double> img = apply_T(prog("u"), kDirichlet, u);
  for (int j = 0; j < n; ++j) {
    double expected = std::sin(M_PI * j / (n - 1.0)) / (M_PI * M_PI);
    CHECK(std::abs(img[j] - expected) < 1e-7);
  }
}

TEST_CASE("picard: zero nonlinearity lands on the zero fixed point immediately") {
  PicardOptions opts;
  opts.relaxation = 1.0;
  std::vector<std::vector<double>> u0 = {std::vector<double>(opts.n, 0.1)};
  PicardResult r = picard_solve({prog("0")}, {kDirichlet}, u0, opts);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.solution.max_norm == 0.0);
  CHECK(r.solution.iterations <= 2);
}

TEST_CASE("picard: small quadratic nonlinearity converges with tiny residual") {
  PicardOptions opts;
  opts.relaxation = 1.0;
  std::vector<std::vector<double>> u0 = {std::vector<double>(opts.n, 0.1)};
  PicardResult r = picard_solve({prog("u^2")}, {kDirichlet}, u0, opts);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.solution.residual < 1e-10);
  for (double v : r.solution.values[0]) CHECK(v >= -1e-12);
}

TEST_CASE("picard: system example converges into the certified norm range") {
  PicardOptions opts;  // defaults n=201, tol=1e-10, omega=0.5
  std::vector<std::vector<double>> u0 = {std::vector<double>(opts.n, 1.0),
                                         std::vector<double>(opts.n, 1.0)};
  PicardResult r = picard_solve({prog("18+sin(u*v)"), prog("exp((u^2+v^2)/25)-1")},
                                {kDirichlet, kRobin}, u0, opts);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.solution.residual < 1e-8);
  CHECK(r.solution.max_norm >= 1.0);
  CHECK(r.solution.max_norm <= 4.0);
  // each component obeys its cone inequality
  ConeCheckReport cone = cone_check(r.solution,
                                    {default_window(kDirichlet), default_window(kRobin)});
  CHECK(cone.pass);
}

TEST_CASE("picard: grid refinement changes the norm at second order") {
  std::vector<Program> fs = {prog("18+sin(u*v)"), prog("exp((u^2+v^2)/25)-1")};
  std::vector<KernelSpec> ks = {kDirichlet, kRobin};
  PicardOptions coarse, fine;
  coarse.n = 201;
  fine.n = 401;
  PicardResult a = picard_solve(fs, ks, {std::vector<double>(coarse.n, 1.0),
                                         std::vector<double>(coarse.n, 1.0)}, coarse);
  PicardResult b = picard_solve(fs, ks, {std::vector<double>(fine.n, 1.0),
                                         std::vector<double>(fine.n, 1.0)}, fine);
  REQUIRE(a.status == SolveStatus::Converged);
  REQUIRE(b.status == SolveStatus::Converged);
  CHECK(std::abs(a.solution.max_norm - b.solution.max_norm) < 5e-3);
}

TEST_CASE("shooting: unit load under both boundary pairs") {
  ShootOptions opts;
  opts.slope_lo = 0.0;
  opts.slope_hi = 1.0;
  ShootResult r = shoot_solve(prog("1"), kDirichlet, opts);
  REQUIRE(r.found);
  CHECK(r.slope == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.solution.max_norm == doctest::Approx(0.125).epsilon(1e-8));
  for (std::size_t j = 0; j < r.solution.grid.size(); ++j) {
    double t = r.solution.grid[j];
    CHECK(std::abs(r.solution.values[0][j] - t * (1.0 - t) / 2.0) < 1e-8);
  }

  ShootOptions ropts;
  ropts.slope_lo = 0.0;
  ropts.slope_hi = 2.0;
  ShootResult rr = shoot_solve(prog("1"), kRobin, ropts);
  REQUIRE(rr.found);
  CHECK(rr.slope == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rr.solution.max_norm == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("shooting: linear eigenproblem returns a multiple of sin(pi t)") {
  ShootOptions opts;
  opts.slope_lo = 3.0;
  opts.slope_hi = 3.3;
  ShootResult r = shoot_solve(prog("pi^2*u"), kDirichlet, opts);
  REQUIRE(r.found);
  double amp = r.slope / M_PI;
  for (std::size_t j = 0; j < r.solution.grid.size(); ++j) {
    double t = r.solution.grid[j];
    CHECK(std::abs(r.solution.values[0][j] - amp * std::sin(M_PI * t)) < 1e-6 * amp);
  }
}

TEST_CASE("shooting: the quadratic example lands inside the certified window") {
  ShootOptions opts;
  opts.slope_lo = 1e-3;
  opts.slope_hi = 5.0;
  ShootResult r = shoot_solve(prog("lambda*u^2", {{"lambda", 256.0}}), kDirichlet, opts);
  REQUIRE(r.found);
  CHECK(r.solution.max_norm >= 1.0 / 32.0);
  CHECK(r.solution.max_norm <= 1.0);
  CHECK(r.solution.residual < 1e-6);
  ConeCheckReport cone = cone_check(r.solution, {default_window(kDirichlet)});
  CHECK(cone.pass);
}

TEST_CASE("shooting respects the scaling symmetry of the quadratic problem") {
  // u'' + lambda u^2 = 0 maps to itself under u -> (256/lambda) u, so
  // lambda * ||u_lambda|| is an invariant of the problem family
  ShootOptions opts;
  opts.slope_lo = 1e-4;
  opts.slope_hi = 5.0;
  ShootResult base = shoot_solve(prog("lambda*u^2", {{"lambda", 256.0}}), kDirichlet, opts);
  ShootResult scaled = shoot_solve(prog("lambda*u^2", {{"lambda", 1000.0}}), kDirichlet, opts);
  REQUIRE(base.found);
  REQUIRE(scaled.found);
  CHECK(256.0 * base.solution.max_norm ==
        doctest::Approx(1000.0 * scaled.solution.max_norm).epsilon(1e-6));
}

TEST_CASE("shooting: no sign change reports NotFound") {
  ShootOptions opts;
  opts.slope_lo = 1e-4;
  opts.slope_hi = 2e-4;  // both trajectories end positive for the unit load
  ShootResult r = shoot_solve(prog("1"), kDirichlet, opts);
  CHECK(!r.found);
  CHECK(!r.reason.empty());
}

TEST_CASE("shooting and picard agree when both converge to a nontrivial solution") {
  Program f = prog("lambda*u^2", {{"lambda", 256.0}});
  ShootOptions sopts;
  sopts.slope_lo = 1e-3;
  sopts.slope_hi = 5.0;
  ShootResult shot = shoot_solve(f, kDirichlet, sopts);
  REQUIRE(shot.found);

  PicardOptions popts;
  std::vector<std::vector<double>> u0 = {shot.solution.values[0]};
  PicardResult pic = picard_solve({f}, {kDirichlet}, u0, popts);
  if (pic.status == SolveStatus::Converged && pic.solution.max_norm > 1e-6) {
    double diff = 0.0;
    for (std::size_t j = 0; j < shot.solution.grid.size(); ++j)
      diff = std::max(diff,
                      std::abs(pic.solution.values[0][j] - shot.solution.values[0][j]));
    CHECK(diff < 1e-3);
  }
}

TEST_CASE("cone_check accepts the closed-form solutions and rejects a spike") {
  int n = 201;
  DiscreteSolution dir;
  dir.grid.resize(n);
  dir.values = {std::vector<double>(n)};
  for (int j = 0; j < n; ++j) {
    double t = static_cast<double>(j) / (n - 1);
    dir.grid[j] = t;
    dir.values[0][j] = t * (1.0 - t) / 2.0;
  }
  dir.sup_norms = {0.125};
  dir.max_norm = 0.125;
  CHECK(cone_check(dir, {default_window(kDirichlet)}).pass);

  DiscreteSolution rob = dir;
  for (int j = 0; j < n; ++j) {
    double t = rob.grid[j];
    rob.values[0][j] = t - t * t / 2.0;
  }
  rob.sup_norms = {0.5};
  rob.max_norm = 0.5;
  CHECK(cone_check(rob, {default_window(kRobin)}).pass);

  DiscreteSolution spike = dir;
  for (double& v : spike.values[0]) v = 0.001;
  spike.values[0][n / 10] = 1.0;  // sharp spike outside the window
  spike.sup_norms = {1.0};
  spike.max_norm = 1.0;
  CHECK(!cone_check(spike, {default_window(kDirichlet)}).pass);
}

TEST_CASE("verify_certificate reports confirmed and unconfirmed windows") {
  Certificate cert;
  cert.windows = {{0.1, 0.5}, {2.0, 3.0}};
  DiscreteSolution hit;
  hit.max_norm = 0.25;
  ConfirmationReport rep = verify_certificate(cert, {{hit, "picard"}});
  REQUIRE(rep.windows.size() == 2);
  CHECK(rep.windows[0].confirmed);
  CHECK(rep.windows[0].method == "picard");
  CHECK(!rep.windows[1].confirmed);
  CHECK(!rep.all_confirmed);
}

TEST_CASE("multistart finds and confirms the quadratic example certificate") {
  Program f = prog("lambda*u^2", {{"lambda", 256.0}});
  Constants c = constants_of(kDirichlet);
  ConditionContext ctx = make_context({f}, {c});
  std::vector<Rung> rungs = {
      {{ConditionType::KUpper}, 1.0 / 32.0, check_condition(ctx, {ConditionType::KUpper}, 1.0 / 32.0)},
      {{ConditionType::KLower}, 1.0, check_condition(ctx, {ConditionType::KLower}, 1.0)},
  };
  AssembleOutcome out = assemble(ctx, rungs);
  REQUIRE(out.certificate.has_value());

  MultistartOptions opts;
  opts.shoot.slope_lo = 1e-3;
  opts.shoot.slope_hi = 5.0;
  std::vector<FoundSolution> found =
      multistart_solve({f}, {kDirichlet}, &*out.certificate, opts);
  REQUIRE(!found.empty());
  ConfirmationReport rep = verify_certificate(*out.certificate, found);
  CHECK(rep.all_confirmed);
}
