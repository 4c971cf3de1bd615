#include "positone/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace positone {

using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json window_to_json(const ConeWindow& w) {
  return json{{"bc", bc_name(w.kernel.bc)}, {"a", w.a}, {"b", w.b}, {"c", w.c}};
}

ConeWindow window_from_json(const json& j) {
  ConeWindow w;
  w.kernel = KernelSpec{bc_from_name(j.at("bc").get<std::string>())};
  w.a = j.at("a").get<double>();
  w.b = j.at("b").get<double>();
  w.c = j.at("c").get<double>();
  return w;
}

json constants_entry_json(const Constants& k) {
  json j = window_to_json(k.window);
  j["m"] = k.m;
  j["M"] = k.M;
  return j;
}

Constants constants_entry_from_json(const json& j) {
  Constants k;
  k.window = window_from_json(j);
  k.m = j.at("m").get<double>();
  k.M = j.at("M").get<double>();
  return k;
}

}  // namespace

json constants_to_json(const ProblemSetup& setup) {
  json eqs = json::array();
  for (std::size_t i = 0; i < setup.constants.size(); ++i) {
    json e = constants_entry_json(setup.constants[i]);
    e["f"] = setup.file.equations[i].f_text;
    eqs.push_back(e);
  }
  return json{{"equations", eqs}, {"c", setup.ctx.c}};
}

std::string constants_to_text(const ProblemSetup& setup) {
  std::ostringstream os;
  for (std::size_t i = 0; i < setup.constants.size(); ++i) {
    const Constants& k = setup.constants[i];
    os << "equation " << i + 1 << " (" << bc_name(k.window.kernel.bc) << ")\n"
       << "  f      = " << setup.file.equations[i].f_text << "\n"
       << "  m      = " << g17(k.m) << "\n"
       << "  window = [" << g17(k.window.a) << ", " << g17(k.window.b) << "]\n"
       << "  c      = " << g17(k.window.c) << "\n"
       << "  M      = " << g17(k.M) << "\n";
  }
  os << "overall c = " << g17(setup.ctx.c) << "\n";
  return os.str();
}

json condition_result_to_json(const ConditionResult& r) {
  json j{{"verdict", verdict_name(r.verdict)},
         {"margin", r.margin},
         {"bound", r.bound},
         {"threshold", r.threshold},
         {"boxes_explored", r.boxes_explored}};
  if (!r.witness.empty()) j["witness"] = r.witness;
  if (!r.parts.empty()) {
    json parts = json::array();
    for (const ConditionResult& p : r.parts) parts.push_back(condition_result_to_json(p));
    j["parts"] = parts;
  }
  return j;
}

ConditionResult condition_result_from_json(const json& j) {
  ConditionResult r;
  std::string v = j.at("verdict").get<std::string>();
  r.verdict = v == "PASS" ? Verdict::Pass : v == "FAIL" ? Verdict::Fail : Verdict::Undecided;
  r.margin = j.at("margin").get<double>();
  r.bound = j.at("bound").get<double>();
  r.threshold = j.at("threshold").get<double>();
  r.boxes_explored = j.at("boxes_explored").get<long>();
  if (j.contains("witness")) r.witness = j["witness"].get<std::vector<double>>();
  if (j.contains("parts"))
    for (const json& p : j["parts"]) r.parts.push_back(condition_result_from_json(p));
  return r;
}

std::string condition_result_to_text(const ConditionKind& kind, double rho,
                                     const ConditionResult& r) {
  std::ostringstream os;
  os << condition_name(kind) << " at rho=" << g17(rho) << ": " << verdict_name(r.verdict)
     << "\n  threshold = " << g17(r.threshold) << "\n  bound     = " << g17(r.bound)
     << "\n  margin    = " << g17(r.margin) << "\n  boxes     = " << r.boxes_explored << "\n";
  if (!r.witness.empty()) {
    os << "  witness   = (";
    for (std::size_t i = 0; i < r.witness.size(); ++i)
      os << (i ? ", " : "") << g17(r.witness[i]);
    os << ")\n";
  }
  return os.str();
}

json certificate_to_json(const Certificate& cert) {
  json rungs = json::array();
  for (const Rung& r : cert.rungs) {
    json jr{{"kind", condition_name(r.kind)}, {"rho", r.rho},
            {"result", condition_result_to_json(r.result)}};
    if (r.kind.type == ConditionType::I0Star) jr["eq"] = r.kind.eq;
    rungs.push_back(jr);
  }
  json gaps = json::array();
  for (const GapCheck& g : cert.gaps)
    gaps.push_back(json{{"from", g.from}, {"to", g.to},
                        {"divide_by_c", g.divide_by_c}, {"satisfied", g.satisfied}});
  json windows = json::array();
  for (const auto& w : cert.windows) windows.push_back(json::array({w[0], w[1]}));
  json constants = json::array();
  for (const Constants& k : cert.constants) constants.push_back(constants_entry_json(k));
  return json{{"case", case_name(cert.tcase)},
              {"system", cert.system},
              {"solutions", cert.solutions},
              {"rungs", rungs},
              {"gaps", gaps},
              {"windows", windows},
              {"constants", constants},
              {"c", cert.c}};
}

Certificate certificate_from_json(const json& j) {
  Certificate cert;
  cert.tcase = case_from_name(j.at("case").get<std::string>());
  cert.system = j.at("system").get<bool>();
  cert.solutions = j.at("solutions").get<int>();
  for (const json& jr : j.at("rungs")) {
    Rung r;
    r.kind = condition_from_name(jr.at("kind").get<std::string>(),
                                 jr.contains("eq") ? jr["eq"].get<int>() : 1);
    r.rho = jr.at("rho").get<double>();
    r.result = condition_result_from_json(jr.at("result"));
    cert.rungs.push_back(std::move(r));
  }
  for (const json& jg : j.at("gaps")) {
    GapCheck g;
    g.from = jg.at("from").get<int>();
    g.to = jg.at("to").get<int>();
    g.divide_by_c = jg.at("divide_by_c").get<bool>();
    g.satisfied = jg.at("satisfied").get<bool>();
    cert.gaps.push_back(g);
  }
  for (const json& jw : j.at("windows"))
    cert.windows.push_back({jw[0].get<double>(), jw[1].get<double>()});
  for (const json& jk : j.at("constants"))
    cert.constants.push_back(constants_entry_from_json(jk));
  cert.c = j.at("c").get<double>();
  return cert;
}

json certify_run_to_json(const CertifyRun& run) {
  json j;
  j["certified"] = run.certificate.has_value();
  j["inconclusive"] = run.inconclusive;
  if (!run.message.empty()) j["message"] = run.message;
  if (run.certificate) j["certificate"] = certificate_to_json(*run.certificate);
  json nn = json::array();
  for (const ConditionResult& r : run.nonnegativity) nn.push_back(condition_result_to_json(r));
  j["nonnegativity"] = nn;
  return j;
}

std::string certify_run_to_text(const CertifyRun& run) {
  std::ostringstream os;
  if (!run.certificate) {
    os << (run.inconclusive ? "INCONCLUSIVE" : "NO CERTIFICATE");
    if (!run.message.empty()) os << ": " << run.message;
    os << "\n";
    return os.str();
  }
  const Certificate& c = *run.certificate;
  os << "CERTIFIED case " << case_name(c.tcase) << (c.system ? " (system)" : "") << ": at least "
     << c.solutions << " positive solution" << (c.solutions > 1 ? "s" : "") << "\n";
  for (const Rung& r : c.rungs)
    os << "  " << condition_name(r.kind) << " at rho=" << g17(r.rho) << " "
       << verdict_name(r.result.verdict) << " (margin " << g17(r.result.margin) << ")\n";
  for (std::size_t i = 0; i < c.windows.size(); ++i)
    os << "  solution " << i + 1 << ": norm in [" << g17(c.windows[i][0]) << ", "
       << g17(c.windows[i][1]) << "]\n";
  return os.str();
}

json solve_run_to_json(const SolveRun& run, const std::string& csv_path) {
  json sols = json::array();
  for (const auto& [sol, method] : run.solutions) {
    sols.push_back(json{{"method", method},
                        {"norm", sol.max_norm},
                        {"residual", sol.residual},
                        {"iterations", sol.iterations}});
  }
  json j{{"solutions", sols}, {"csv", csv_path}};
  if (run.confirmation) {
    json ws = json::array();
    for (const WindowConfirmation& w : run.confirmation->windows) {
      json jw{{"window", json::array({w.window[0], w.window[1]})},
              {"status", w.confirmed ? "confirmed" : "unconfirmed"}};
      if (w.confirmed) {
        jw["norm"] = w.norm;
        jw["method"] = w.method;
      }
      ws.push_back(jw);
    }
    j["confirmation"] = ws;
  }
  return j;
}

std::string solve_run_to_text(const SolveRun& run, const std::string& csv_path) {
  std::ostringstream os;
  os << "found " << run.solutions.size() << " numerical solution"
     << (run.solutions.size() == 1 ? "" : "s") << "\n";
  for (const auto& [sol, method] : run.solutions)
    os << "  " << method << ": norm " << g17(sol.max_norm) << ", residual "
       << g17(sol.residual) << "\n";
  if (run.confirmation) {
    for (const WindowConfirmation& w : run.confirmation->windows) {
      os << "  window [" << g17(w.window[0]) << ", " << g17(w.window[1]) << "]: "
         << (w.confirmed ? "confirmed" : "unconfirmed");
      if (w.confirmed) os << " by " << w.method << " (norm " << g17(w.norm) << ")";
      os << "\n";
    }
  }
  if (!csv_path.empty()) os << "solution written to " << csv_path << "\n";
  return os.str();
}

void write_solution_csv(std::ostream& os, const DiscreteSolution& sol) {
  os << "t,u";
  if (sol.values.size() > 1) os << ",v";
  os << "\n";
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    os << g17(sol.grid[i]);
    for (const auto& vals : sol.values) os << "," << g17(vals[i]);
    os << "\n";
  }
}

std::vector<RegionBand> region_bands(const ProblemSetup& setup,
                                     const std::vector<Rung>& rungs) {
  if (setup.ctx.system())
    throw ProblemError("region bands are defined for scalar problems only");
  const Constants& k = setup.constants[0];
  double c = setup.ctx.c;
  std::vector<RegionBand> bands;
  int id = 0;
  for (const Rung& r : rungs) {
    RegionBand b;
    b.id = id++;
    b.kind = condition_name(r.kind);
    switch (r.kind.type) {
      case ConditionType::I1:
      case ConditionType::KUpper:
        b.u_lo = 0.0;
        b.u_hi = r.rho;
        b.lower = k.m * r.rho;  // f must stay below m*rho here
        b.upper = std::numeric_limits<double>::infinity();
        break;
      case ConditionType::I0:
        b.u_lo = r.rho;
        b.u_hi = r.rho / c;
        b.lower = 0.0;  // f must stay above M*rho here
        b.upper = k.M * r.rho;
        break;
      case ConditionType::KLower:
        b.u_lo = c * r.rho;
        b.u_hi = r.rho;
        b.lower = 0.0;
        b.upper = k.M * r.rho;
        break;
      case ConditionType::I0Star:
        throw ProblemError("region bands are defined for scalar problems only");
    }
    bands.push_back(b);
  }
  return bands;
}

void write_region_csv(std::ostream& os, const std::vector<RegionBand>& bands, int samples) {
  os << "u,band_id,lower,upper,kind\n";
  if (bands.empty()) return;
  double u_max = 0.0;
  for (const RegionBand& b : bands) u_max = std::max(u_max, b.u_hi);
  for (int i = 0; i < samples; ++i) {
    double u = u_max * i / (samples - 1);
    for (const RegionBand& b : bands) {
      if (u < b.u_lo || u > b.u_hi) continue;
      os << g17(u) << "," << b.id << "," << g17(b.lower) << "," << g17(b.upper) << ","
         << b.kind << "\n";
    }
  }
}

}  // namespace positone
