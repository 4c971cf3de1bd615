#include "positone/solver.hpp"

#include <algorithm>
#include <cmath>

#include "positone/simd.hpp"

namespace positone {

namespace {

double clamp0(double x) { return x < 0.0 ? 0.0 : x; }

double eval_nonneg(const Program& f, std::span<const double> pt_raw, std::vector<double>& buf) {
  buf.assign(pt_raw.begin(), pt_raw.end());
  for (double& x : buf) x = clamp0(x);
  return f.eval(buf);
}

void fill_norms(DiscreteSolution& s) {
  s.sup_norms.clear();
  s.max_norm = 0.0;
  for (const auto& vals : s.values) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    s.sup_norms.push_back(m);
    s.max_norm = std::max(s.max_norm, m);
  }
}

double recompute_residual(const std::vector<Program>& fs,
                          const std::vector<HammersteinOperator>& ops,
                          const DiscreteSolution& s) {
  int n = static_cast<int>(s.grid.size());
  std::vector<double> g(n), img(n);
  std::vector<double> pt;
  double res = 0.0;
  for (std::size_t e = 0; e < fs.size(); ++e) {
    for (int i = 0; i < n; ++i) {
      std::vector<double> point(fs.size());
      for (std::size_t q = 0; q < fs.size(); ++q) point[q] = s.values[q][i];
      g[i] = eval_nonneg(fs[e], point, pt);
    }
    ops[e].apply(g, img);
    res = std::max(res, simd::max_abs_diff(s.values[e], img));
  }
  return res;
}

}  // namespace

HammersteinOperator::HammersteinOperator(KernelSpec k, int n) : kernel_(k), n_(n) {
  if (n < 33) throw std::invalid_argument("operator grid needs n >= 33");
  double h = 1.0 / (n - 1);
  nodes_.resize(n);
  for (int i = 0; i < n; ++i) nodes_[i] = i * h;
  weights_.resize(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> w = simpson_weights_split(n, j);
    double* row = weights_.data() + static_cast<std::size_t>(j) * n;
    for (int i = 0; i < n; ++i) row[i] = w[i] * eval_kernel(k, nodes_[j], nodes_[i]);
  }
}

void HammersteinOperator::apply(std::span<const double> g, std::span<double> out) const {
  for (int j = 0; j < n_; ++j) {
    std::span<const double> row{weights_.data() + static_cast<std::size_t>(j) * n_,
                                static_cast<std::size_t>(n_)};
    out[j] = simd::dot(row, g);
  }
}

std::vector<double> apply_T(const Program& f, KernelSpec k, std::span<const double> u) {
  HammersteinOperator op(k, static_cast<int>(u.size()));
  std::vector<double> g(u.size()), out(u.size());
  std::vector<double> buf;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double pt[1] = {u[i]};
    g[i] = eval_nonneg(f, pt, buf);
  }
  op.apply(g, out);
  return out;
}

PicardResult picard_solve(const std::vector<Program>& fs, const std::vector<KernelSpec>& ks,
                          std::vector<std::vector<double>> u0, const PicardOptions& opts) {
  if (fs.empty() || fs.size() != ks.size() || fs.size() != u0.size())
    throw std::invalid_argument("picard_solve needs matching equations, kernels and guesses");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0))
    throw std::invalid_argument("relaxation must lie in (0,1]");
  int n = opts.n;
  std::size_t ne = fs.size();

  std::vector<HammersteinOperator> ops;
  for (KernelSpec k : ks) ops.emplace_back(k, n);

  for (auto& u : u0)
    if (static_cast<int>(u.size()) != n)
      throw std::invalid_argument("initial guess size does not match the grid");

  PicardResult out;
  DiscreteSolution& s = out.solution;
  s.grid = ops[0].nodes();
  s.values = std::move(u0);

  std::vector<std::vector<double>> image(ne, std::vector<double>(n));
  std::vector<double> g(n), buf, point(ne);
  double omega = opts.relaxation;

  int it = 0;
  double res = 0.0;
  for (; it < opts.max_iter; ++it) {
    bool finite = true;
    for (std::size_t e = 0; e < ne && finite; ++e) {
      for (int i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < ne; ++q) point[q] = s.values[q][i];
        g[i] = eval_nonneg(fs[e], point, buf);
      }
      ops[e].apply(g, image[e]);
      for (double v : image[e])
        if (!std::isfinite(v)) { finite = false; break; }
    }
    if (!finite) break;  // diverging iteration, keep the last finite iterate
    res = 0.0;
    for (std::size_t e = 0; e < ne; ++e)
      res = std::max(res, simd::max_abs_diff(s.values[e], image[e]));
    if (res < opts.tol) break;
    for (std::size_t e = 0; e < ne; ++e)
      simd::axpby(1.0 - omega, s.values[e], omega, image[e], s.values[e]);
  }
  s.iterations = it;
  fill_norms(s);
  s.residual = recompute_residual(fs, ops, s);
  out.status = s.residual < opts.tol ? SolveStatus::Converged : SolveStatus::MaxIterations;
  return out;
}

namespace {

struct Trajectory {
  std::vector<double> u;
  double u_end = 0.0;
  double up_end = 0.0;
  double min_value = 0.0;
};

Trajectory integrate_ivp(const Program& f, double slope, int n_out, double target_step) {
  double h_node = 1.0 / (n_out - 1);
  int substeps = std::max(1, static_cast<int>(std::lround(h_node / target_step)));
  double dt = h_node / substeps;

  Trajectory tr;
  tr.u.resize(n_out);
  double y = 0.0, w = slope;
  tr.u[0] = 0.0;
  tr.min_value = 0.0;
  std::vector<double> buf;
  auto accel = [&](double yy) {
    double pt[1] = {yy};
    return -eval_nonneg(f, pt, buf);
  };
  for (int node = 1; node < n_out; ++node) {
    for (int s = 0; s < substeps; ++s) {
      double k1y = w, k1w = accel(y);
      double k2y = w + 0.5 * dt * k1w, k2w = accel(y + 0.5 * dt * k1y);
      double k3y = w + 0.5 * dt * k2w, k3w = accel(y + 0.5 * dt * k2y);
      double k4y = w + dt * k3w, k4w = accel(y + dt * k3y);
      y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    }
    tr.u[node] = y;
    tr.min_value = std::min(tr.min_value, y);
  }
  tr.u_end = y;
  tr.up_end = w;
  return tr;
}

}  // namespace

ShootResult shoot_solve(const Program& f, KernelSpec k, const ShootOptions& opts) {
  if (f.dims() != 1) throw std::invalid_argument("shooting handles scalar problems only");
  if (!(opts.slope_lo < opts.slope_hi))
    throw std::invalid_argument("slope bracket must be nonempty");

  auto miss = [&](const Trajectory& tr) {
    return k.bc == BcKind::DirichletDirichlet ? tr.u_end : tr.up_end;
  };

  ShootResult out;
  double lo = opts.slope_lo, hi = opts.slope_hi;
  Trajectory tlo = integrate_ivp(f, lo, opts.n_output, opts.step);
  Trajectory thi = integrate_ivp(f, hi, opts.n_output, opts.step);
  double flo = miss(tlo), fhi = miss(thi);
  // an endpoint already meeting the BC (e.g. linear eigenproblems hit it
  // for every slope) is accepted directly
  auto near_root = [](const Trajectory& tr, double m) {
    double sup = 0.0;
    for (double v : tr.u) sup = std::max(sup, std::abs(v));
    return std::abs(m) <= 1e-12 * std::max(1.0, sup);
  };
  if (near_root(tlo, flo)) {
    hi = lo;
    thi = tlo;
  } else if (near_root(thi, fhi)) {
    lo = hi;
  } else if (std::signbit(flo) == std::signbit(fhi)) {
    out.reason = "no sign change of the boundary miss in the slope bracket";
    return out;
  }

  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    Trajectory tm = integrate_ivp(f, mid, opts.n_output, opts.step);
    double fm = miss(tm);
    if (near_root(tm, fm)) { lo = hi = mid; thi = tm; break; }
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      thi = tm;
    }
  }

  double slope = hi;
  Trajectory best = integrate_ivp(f, slope, opts.n_output, opts.step);
  if (std::abs(miss(best)) > opts.bc_tol) {
    out.reason = "bisection did not meet the right boundary condition";
    return out;
  }
  if (best.min_value < -1e-8) {
    out.reason = "trajectory leaves the nonnegative cone";
    return out;
  }
  double sup = 0.0;
  for (double v : best.u) sup = std::max(sup, std::abs(v));
  if (sup <= 1e-6) {
    out.reason = "only the trivial solution in the bracket";
    return out;
  }

  DiscreteSolution s;
  s.grid.resize(opts.n_output);
  for (int i = 0; i < opts.n_output; ++i) s.grid[i] = static_cast<double>(i) / (opts.n_output - 1);
  for (double& v : best.u) v = clamp0(v);
  s.values = {best.u};
  fill_norms(s);
  std::vector<HammersteinOperator> ops;
  ops.emplace_back(k, opts.n_output);
  s.residual = recompute_residual({f}, ops, s);
  s.iterations = 0;
  out.found = true;
  out.solution = std::move(s);
  out.slope = slope;
  return out;
}

ConeCheckReport cone_check(const DiscreteSolution& sol, const std::vector<ConeWindow>& windows,
                           double tol) {
  if (windows.size() != sol.values.size())
    throw std::invalid_argument("one cone window per equation is required");
  ConeCheckReport rep;
  rep.pass = true;
  for (std::size_t e = 0; e < windows.size(); ++e) {
    const ConeWindow& w = windows[e];
    double min_in = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
      if (sol.grid[i] >= w.a && sol.grid[i] <= w.b)
        min_in = std::min(min_in, sol.values[e][i]);
    ConeCheckEq eq;
    eq.min_in_window = min_in;
    eq.required = w.c * sol.sup_norms[e] - tol * std::max(1.0, sol.sup_norms[e]);
    eq.pass = min_in >= eq.required;
    rep.pass = rep.pass && eq.pass;
    rep.eqs.push_back(eq);
  }
  return rep;
}

ConfirmationReport verify_certificate(const Certificate& cert,
                                      const std::vector<FoundSolution>& found) {
  ConfirmationReport rep;
  rep.all_confirmed = true;
  for (const auto& w : cert.windows) {
    WindowConfirmation wc;
    wc.window = w;
    double slack_lo = w[0] * 1e-3 + 1e-9;
    double slack_hi = w[1] * 1e-3 + 1e-9;
    for (const auto& [sol, method] : found) {
      if (sol.max_norm >= w[0] - slack_lo && sol.max_norm <= w[1] + slack_hi) {
        wc.confirmed = true;
        wc.norm = sol.max_norm;
        wc.method = method;
        break;
      }
    }
    rep.all_confirmed = rep.all_confirmed && wc.confirmed;
    rep.windows.push_back(wc);
  }
  return rep;
}

namespace {

std::vector<double> bump_profile(KernelSpec k, const std::vector<double>& nodes, double amp) {
  std::vector<double> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double t = nodes[i];
    // sup-1 profiles satisfying the left (and right) boundary conditions
    v[i] = k.bc == BcKind::DirichletDirichlet ? amp * 4.0 * t * (1.0 - t)
                                              : amp * t * (2.0 - t);
  }
  return v;
}

bool distinct(const DiscreteSolution& a, const DiscreteSolution& b) {
  if (a.grid.size() != b.grid.size()) return true;
  double scale = 1.0 + std::max(a.max_norm, b.max_norm);
  for (std::size_t e = 0; e < a.values.size(); ++e)
    if (simd::max_abs_diff(a.values[e], b.values[e]) > 1e-4 * scale) return true;
  return false;
}

}  // namespace

std::vector<FoundSolution> multistart_solve(const std::vector<Program>& fs,
                                            const std::vector<KernelSpec>& ks,
                                            const Certificate* cert,
                                            const MultistartOptions& opts) {
  std::vector<FoundSolution> found;
  auto consider = [&](DiscreteSolution&& s, const std::string& method) {
    if (s.max_norm <= 1e-6) return;  // trivial
    for (const auto& [have, m] : found)
      if (!distinct(have, s)) return;
    found.emplace_back(std::move(s), method);
  };

  std::vector<double> amplitudes;
  if (cert) {
    for (const auto& w : cert->windows) {
      double rho = std::sqrt(w[0] * w[1]);
      amplitudes.push_back(rho * cert->c);
      amplitudes.push_back(rho);
      amplitudes.push_back(rho / cert->c);
    }
  } else {
    amplitudes = {0.5, 1.0, 2.0};
  }

  HammersteinOperator probe(ks[0], opts.picard.n);
  for (double amp : amplitudes) {
    std::vector<std::vector<double>> u0;
    for (KernelSpec k : ks) u0.push_back(bump_profile(k, probe.nodes(), amp));
    PicardResult pr = picard_solve(fs, ks, std::move(u0), opts.picard);
    if (pr.status == SolveStatus::Converged) consider(std::move(pr.solution), "picard");
  }

  if (fs.size() == 1) {
    double lo = opts.shoot.slope_lo, hi = opts.shoot.slope_hi;
    int nb = std::max(1, opts.shoot_brackets);
    // geometric sub-brackets separate slope scales when the range spans
    // decades; linear split when the range touches zero
    bool geometric = lo > 0.0 && hi / lo > 4.0;
    auto edge = [&](int b) {
      double f = static_cast<double>(b) / nb;
      return geometric ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    };
    for (int b = 0; b < nb; ++b) {
      ShootOptions so = opts.shoot;
      so.slope_lo = edge(b);
      so.slope_hi = edge(b + 1);
      ShootResult sr = shoot_solve(fs[0], ks[0], so);
      if (sr.found) consider(std::move(sr.solution), "shooting");
    }
  }
  return found;
}

}  // namespace positone
