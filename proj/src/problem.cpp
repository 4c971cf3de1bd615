#include "positone/problem.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace positone {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ProblemError(where + ": " + what);
}

double require_positive(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  double v = j.get<double>();
  if (!(v > 0.0)) fail(where, "must be positive");
  return v;
}

}  // namespace

ProblemFile parse_problem(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ProblemError(std::string("problem file is not valid JSON: ") + e.what());
  }

  ProblemFile pf;
  if (!doc.contains("equations") || !doc["equations"].is_array() ||
      doc["equations"].empty() || doc["equations"].size() > 2)
    fail("equations", "need an array of one or two equations");

  if (doc.contains("params")) {
    for (auto& [name, value] : doc["params"].items()) {
      if (!value.is_number()) fail("params." + name, "expected a number");
      pf.params[name] = value.get<double>();
    }
  }

  for (std::size_t i = 0; i < doc["equations"].size(); ++i) {
    const json& je = doc["equations"][i];
    std::string where = "equations[" + std::to_string(i) + "]";
    EquationSpec eq;
    if (!je.contains("bc") || !je["bc"].is_string()) fail(where + ".bc", "missing");
    try {
      eq.bc = bc_from_name(je["bc"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(where + ".bc", e.what());
    }
    if (!je.contains("f") || !je["f"].is_string()) fail(where + ".f", "missing");
    eq.f_text = je["f"].get<std::string>();
    try {
      eq.f = parse(eq.f_text);
    } catch (const ParseError& e) {
      fail(where + ".f",
           std::string(e.what()) + " at offset " + std::to_string(e.position()));
    }
    if (je.contains("window")) {
      const json& jw = je["window"];
      if (!jw.is_array() || jw.size() != 2) fail(where + ".window", "expected [a, b]");
      eq.window = {{jw[0].get<double>(), jw[1].get<double>()}};
    }
    pf.equations.push_back(std::move(eq));
  }

  if (doc.contains("mode")) {
    try {
      pf.mode = mode_from_name(doc["mode"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("mode", e.what());
    }
  }

  if (!doc.contains("ladder")) fail("ladder", "missing");
  const json& jl = doc["ladder"];
  if (jl.contains("entries")) {
    if (!jl["entries"].is_array()) fail("ladder.entries", "expected an array");
    double prev = 0.0;
    for (std::size_t i = 0; i < jl["entries"].size(); ++i) {
      const json& je = jl["entries"][i];
      std::string where = "ladder.entries[" + std::to_string(i) + "]";
      LadderEntrySpec entry;
      entry.rho = require_positive(je.at("rho"), where + ".rho");
      if (!(entry.rho > prev)) fail(where + ".rho", "radii must be strictly increasing");
      prev = entry.rho;
      entry.kind = je.at("kind").get<std::string>();
      try {
        condition_from_name(entry.kind);
      } catch (const std::invalid_argument& e) {
        fail(where + ".kind", e.what());
      }
      if (je.contains("eq")) entry.eq = je["eq"].get<int>();
      if (entry.eq != 1 && entry.eq != 2) fail(where + ".eq", "must be 1 or 2");
      pf.ladder.entries.push_back(std::move(entry));
    }
  } else if (jl.contains("auto")) {
    const json& ja = jl["auto"];
    if (!ja.is_array() || ja.size() != 2) fail("ladder.auto", "expected [rho_min, rho_max]");
    double lo = require_positive(ja[0], "ladder.auto[0]");
    double hi = require_positive(ja[1], "ladder.auto[1]");
    if (!(lo < hi)) fail("ladder.auto", "need rho_min < rho_max");
    pf.ladder.auto_range = {{lo, hi}};
    if (jl.contains("case")) {
      pf.ladder.target_case = jl["case"].get<std::string>();
      try {
        case_from_name(*pf.ladder.target_case);
      } catch (const std::invalid_argument& e) {
        fail("ladder.case", e.what());
      }
    }
    if (jl.contains("points_per_decade")) {
      pf.ladder.points_per_decade = jl["points_per_decade"].get<int>();
      if (pf.ladder.points_per_decade < 1) fail("ladder.points_per_decade", "must be positive");
    }
  } else {
    fail("ladder", "needs either \"entries\" or \"auto\"");
  }

  if (doc.contains("solver")) {
    const json& js = doc["solver"];
    if (js.contains("n")) pf.solver.n = js["n"].get<int>();
    if (js.contains("tol")) pf.solver.tol = require_positive(js["tol"], "solver.tol");
    if (js.contains("max_iter")) pf.solver.max_iter = js["max_iter"].get<int>();
    if (js.contains("relaxation")) pf.solver.relaxation = js["relaxation"].get<double>();
    if (pf.solver.n < 33) fail("solver.n", "must be at least 33");
    if (!(pf.solver.relaxation > 0.0 && pf.solver.relaxation <= 1.0))
      fail("solver.relaxation", "must lie in (0,1]");
  }

  if (doc.contains("slope_range")) {
    const json& jr = doc["slope_range"];
    if (!jr.is_array() || jr.size() != 2) fail("slope_range", "expected [lo, hi]");
    pf.slope_range = {{jr[0].get<double>(), jr[1].get<double>()}};
    if (!((*pf.slope_range)[0] < (*pf.slope_range)[1])) fail("slope_range", "need lo < hi");
  }

  if (doc.contains("budget")) {
    pf.budget = doc["budget"].get<long>();
    if (pf.budget < 1) fail("budget", "must be at least 1");
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

ProblemSetup prepare(const ProblemFile& pf) {
  ProblemSetup s;
  s.file = pf;
  for (const EquationSpec& eq : pf.equations) {
    KernelSpec k{eq.bc};
    s.kernels.push_back(k);
    try {
      s.programs.push_back(compile(*eq.f, pf.params));
    } catch (const EvalError& e) {
      throw ProblemError(std::string("nonlinearity '") + eq.f_text + "': " + e.what());
    }
    ConeWindow w = eq.window ? make_window(k, (*eq.window)[0], (*eq.window)[1])
                             : default_window(k);
    s.windows.push_back(w);
    s.constants.push_back(compute_constants(k, w));
  }
  int needed = 1;
  for (const Program& p : s.programs) needed = std::max(needed, p.dims());
  if (needed > static_cast<int>(s.programs.size()))
    throw ProblemError("nonlinearity uses variable 'v' but only one equation is given");
  if (pf.mode == Mode::Krasnoselskii && s.programs.size() != 1)
    throw ProblemError("krasnoselskii mode handles scalar problems only");
  s.ctx = make_context(s.programs, s.constants);
  return s;
}

namespace {

bool kind_matches_mode(const ConditionKind& k, Mode mode) {
  bool k_kind = k.type == ConditionType::KUpper || k.type == ConditionType::KLower;
  return k_kind == (mode == Mode::Krasnoselskii);
}

}  // namespace

CertifyRun run_certify(const ProblemSetup& setup) {
  CertifyRun run;
  const ProblemFile& pf = setup.file;
  const ConditionContext& ctx = setup.ctx;

  double rho_top = 0.0;
  for (const LadderEntrySpec& e : pf.ladder.entries) rho_top = std::max(rho_top, e.rho);
  if (pf.ladder.auto_range) rho_top = std::max(rho_top, (*pf.ladder.auto_range)[1]);

  // hypothesis check: f maps the touched domain into [0, inf)
  double reach = rho_top / ctx.c;
  for (std::size_t e = 0; e < setup.programs.size(); ++e) {
    Box box = ctx.system() ? Box::rect(Interval{0.0, reach}, Interval{0.0, reach})
                           : Box::line(Interval{0.0, reach});
    ConditionResult nn = check_nonnegativity(setup.programs[e], box, pf.budget);
    run.nonnegativity.push_back(nn);
    if (nn.verdict != Verdict::Pass) {
      run.inconclusive = nn.verdict == Verdict::Undecided;
      std::ostringstream os;
      os << "nonnegativity of f" << (ctx.system() ? std::to_string(e + 1) : "")
         << " over [0, " << reach << "] is " << verdict_name(nn.verdict);
      run.message = os.str();
      return run;
    }
  }

  std::vector<std::vector<Rung>> ladders;
  if (!pf.ladder.entries.empty()) {
    std::vector<Rung> rungs;
    for (const LadderEntrySpec& e : pf.ladder.entries) {
      ConditionKind kind = condition_from_name(e.kind, e.eq);
      if (!kind_matches_mode(kind, pf.mode))
        throw ProblemError("condition " + e.kind + " does not belong to mode '" +
                           mode_name(pf.mode) + "'");
      Rung r;
      r.kind = kind;
      r.rho = e.rho;
      r.result = check_condition(ctx, kind, e.rho, pf.budget);
      rungs.push_back(std::move(r));
    }
    ladders.push_back(std::move(rungs));
  } else {
    AutoLadderOptions opts;
    opts.rho_min = (*pf.ladder.auto_range)[0];
    opts.rho_max = (*pf.ladder.auto_range)[1];
    opts.points_per_decade = pf.ladder.points_per_decade;
    opts.budget = pf.budget;
    if (pf.ladder.target_case) opts.target = case_from_name(*pf.ladder.target_case);
    ladders = auto_ladder(ctx, pf.mode, opts);
    if (ladders.empty()) {
      run.message = "no ladder found in the search range";
      return run;
    }
  }

  std::vector<Certificate> certs;
  for (const auto& rungs : ladders) {
    AssembleOutcome out = assemble(ctx, rungs, pf.budget);
    if (out.certificate) certs.push_back(*out.certificate);
    run.inconclusive = run.inconclusive || out.inconclusive;
    if (!out.blocking.empty() && run.message.empty()) run.message = out.blocking;
    run.attempts.push_back(std::move(out));
  }
  run.certificate = best_certificate(std::move(certs));
  if (run.certificate) {
    run.inconclusive = false;
    run.message.clear();
  }
  return run;
}

SolveRun run_solve(const ProblemSetup& setup) {
  SolveRun out;
  out.certify = run_certify(setup);

  MultistartOptions opts;
  opts.picard = setup.file.solver;
  if (setup.file.slope_range) {
    opts.shoot.slope_lo = (*setup.file.slope_range)[0];
    opts.shoot.slope_hi = (*setup.file.slope_range)[1];
  }
  opts.shoot.n_output = setup.file.solver.n;
  const Certificate* cert =
      out.certify.certificate ? &*out.certify.certificate : nullptr;
  out.solutions = multistart_solve(setup.programs, setup.kernels, cert, opts);
  if (cert) out.confirmation = verify_certificate(*cert, out.solutions);
  return out;
}

}  // namespace positone
