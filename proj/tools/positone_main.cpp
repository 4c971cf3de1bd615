// positone: certifies existence and multiplicity of positive solutions
// of second-order two-point boundary value problems (and 2x2 systems) by
// verified cone fixed-point-index conditions, and cross-checks the
// certificates with a numerical Hammerstein solver.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "positone/report.hpp"

namespace {

using namespace positone;

struct CommonArgs {
  std::string problem_path;
  std::string format = "text";
  long budget = 0;  // 0 = use the problem file's budget
};

ProblemSetup load_setup(const CommonArgs& args) {
  ProblemFile pf = load_problem(args.problem_path);
  if (args.budget > 0) pf.budget = args.budget;
  return prepare(pf);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--problem", args.problem_path, "problem file (JSON)")->required();
  cmd->add_option("--format", args.format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--budget", args.budget, "override the subdivision budget");
}

int cmd_constants(const CommonArgs& args) {
  ProblemSetup setup = load_setup(args);
  if (args.format == "json")
    std::cout << constants_to_json(setup).dump(2) << "\n";
  else
    std::cout << constants_to_text(setup);
  return 0;
}

int cmd_check(const CommonArgs& args, const std::string& condition, double rho, int eq) {
  ProblemSetup setup = load_setup(args);
  ConditionKind kind = condition_from_name(condition, eq);
  ConditionResult res = check_condition(setup.ctx, kind, rho, setup.file.budget);
  if (args.format == "json") {
    nlohmann::json j = condition_result_to_json(res);
    j["condition"] = condition_name(kind);
    j["rho"] = rho;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << condition_result_to_text(kind, rho, res);
  }
  switch (res.verdict) {
    case Verdict::Pass: return 0;
    case Verdict::Undecided: return 2;
    case Verdict::Fail: return 3;
  }
  return 1;
}

int cmd_certify(const CommonArgs& args) {
  ProblemSetup setup = load_setup(args);
  CertifyRun run = run_certify(setup);
  if (args.format == "json")
    std::cout << certify_run_to_json(run).dump(2) << "\n";
  else
    std::cout << certify_run_to_text(run);
  return run.certificate ? 0 : 2;
}

int cmd_solve(const CommonArgs& args, const std::string& out_path) {
  ProblemSetup setup = load_setup(args);
  SolveRun run = run_solve(setup);
  std::string written;
  if (!run.solutions.empty()) {
    std::ofstream os(out_path);
    if (!os) throw ProblemError("cannot write '" + out_path + "'");
    write_solution_csv(os, run.solutions.front().first);
    written = out_path;
  }
  if (args.format == "json")
    std::cout << solve_run_to_json(run, written).dump(2) << "\n";
  else
    std::cout << solve_run_to_text(run, written);
  return 0;
}

int cmd_region(const CommonArgs& args, const std::string& out_path, int samples) {
  ProblemSetup setup = load_setup(args);
  std::vector<Rung> rungs;
  if (!setup.file.ladder.entries.empty()) {
    for (const LadderEntrySpec& e : setup.file.ladder.entries)
      rungs.push_back({condition_from_name(e.kind, e.eq), e.rho, {}});
  } else {
    CertifyRun run = run_certify(setup);
    if (run.certificate) rungs = run.certificate->rungs;
  }
  std::vector<RegionBand> bands = region_bands(setup, rungs);
  std::ofstream os(out_path);
  if (!os) throw ProblemError("cannot write '" + out_path + "'");
  write_region_csv(os, bands, samples);
  if (args.format == "json") {
    nlohmann::json jb = nlohmann::json::array();
    for (const RegionBand& b : bands)
      jb.push_back(nlohmann::json{{"id", b.id}, {"kind", b.kind}, {"u_lo", b.u_lo},
                                  {"u_hi", b.u_hi}, {"lower", b.lower}, {"upper", b.upper}});
    std::cout << nlohmann::json{{"bands", jb}, {"csv", out_path}}.dump(2) << "\n";
  } else {
    std::cout << bands.size() << " band" << (bands.size() == 1 ? "" : "s") << " written to "
              << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified positive solutions of two-point boundary value problems"};
  app.require_subcommand(1);

  CommonArgs constants_args, check_args, certify_args, solve_args, region_args;

  CLI::App* constants = app.add_subcommand("constants", "cone constants m, M, c per equation");
  add_common(constants, constants_args);

  CLI::App* check = app.add_subcommand("check", "check one condition at a radius");
  add_common(check, check_args);
  std::string condition;
  double rho = 0.0;
  int eq = 1;
  check->add_option("--condition", condition, "I1|I0|I0*|K_upper|K_lower")->required();
  check->add_option("--rho", rho, "radius")->required()->check(CLI::PositiveNumber);
  check->add_option("--eq", eq, "equation selector for I0*")->check(CLI::Range(1, 2));

  CLI::App* certify = app.add_subcommand("certify", "assemble an existence certificate");
  add_common(certify, certify_args);

  CLI::App* solve = app.add_subcommand("solve", "numerical solve and certificate cross-check");
  add_common(solve, solve_args);
  std::string solve_out = "solution.csv";
  solve->add_option("--out", solve_out, "solution CSV path");

  CLI::App* region = app.add_subcommand("region", "forbidden-region bands as CSV");
  add_common(region, region_args);
  std::string region_out = "region.csv";
  int samples = 257;
  region->add_option("--out", region_out, "region CSV path");
  region->add_option("--samples", samples, "u samples")->check(CLI::Range(2, 1000000));

  CLI11_PARSE(app, argc, argv);

  try {
    if (constants->parsed()) return cmd_constants(constants_args);
    if (check->parsed()) return cmd_check(check_args, condition, rho, eq);
    if (certify->parsed()) return cmd_certify(certify_args);
    if (solve->parsed()) return cmd_solve(solve_args, solve_out);
    if (region->parsed()) return cmd_region(region_args, region_out, samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
