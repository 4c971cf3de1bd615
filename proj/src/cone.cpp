#include "positone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace positone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section refinement of an extremum bracket; fn is evaluated with
// "minimize" orientation (negate for maxima).
double golden_min(const std::function<double(double)>& fn, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fn(x2);
    }
  }
  return std::min({fn(lo), fn(hi), f1, f2});
}

// Grid scan plus golden-section polish around the best grid cell.
double grid_refined_min(const std::function<double(double)>& fn, double lo, double hi,
                        int grid_points) {
  double best = kInf;
  int best_i = 0;
  double step = (hi - lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    double t = i + 1 == grid_points ? hi : lo + i * step;
    double v = fn(t);
    if (v < best) { best = v; best_i = i; }
  }
  double rl = std::max(lo, lo + (best_i - 1) * step);
  double rh = std::min(hi, lo + (best_i + 1) * step);
  if (rh > rl) best = std::min(best, golden_min(fn, rl, rh));
  return best;
}

}  // namespace

double phi_upper(KernelSpec k, double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("phi_upper argument outside [0,1]");
  return k.bc == BcKind::DirichletDirichlet ? s * (1.0 - s) : s;
}

double cone_constant(KernelSpec k, double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0))
    throw std::invalid_argument("window must satisfy 0 <= a < b <= 1");
  if (k.bc == BcKind::DirichletDirichlet) return std::min(a, 1.0 - b);
  return a;
}

bool sandwich_holds(const ConeWindow& w, int samples, double tol) {
  for (int i = 0; i < samples; ++i) {
    double t = w.a + (w.b - w.a) * i / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      double s = static_cast<double>(j) / (samples - 1);
      double kv = eval_kernel(w.kernel, t, s);
      double phi = phi_upper(w.kernel, s);
      if (w.c * phi > kv + tol) return false;
    }
  }
  // upper envelope over the full square
  for (int i = 0; i < samples; ++i) {
    double t = static_cast<double>(i) / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      double s = static_cast<double>(j) / (samples - 1);
      if (eval_kernel(w.kernel, t, s) > phi_upper(w.kernel, s) + tol) return false;
    }
  }
  return true;
}

ConeWindow make_window(KernelSpec k, double a, double b) {
  double c = cone_constant(k, a, b);
  if (c <= 0.0) throw WindowError("window has vanishing cone constant");
  ConeWindow w{k, a, b, c};
  if (!sandwich_holds(w))
    throw WindowError("cone sandwich inequality failed on the sampling grid");
  return w;
}

ConeWindow default_window(KernelSpec k) {
  return k.bc == BcKind::DirichletDirichlet ? make_window(k, 0.25, 0.75)
                                            : make_window(k, 0.5, 1.0);
}

double m_constant(KernelSpec k, int grid_points) {
  if (grid_points < 3) throw std::invalid_argument("grid_points must be at least 3");
  auto neg_row = [k](double t) { return -kernel_row_integral(k, t, 0.0, 1.0); };
  double sup = -grid_refined_min(neg_row, 0.0, 1.0, grid_points);
  return 1.0 / sup;
}

double M_constant(KernelSpec k, double a, double b, int grid_points) {
  if (!(0.0 <= a && a < b && b <= 1.0))
    throw std::invalid_argument("window must satisfy 0 <= a < b <= 1");
  if (grid_points < 3) throw std::invalid_argument("grid_points must be at least 3");
  auto row = [k, a, b](double t) { return kernel_row_integral(k, t, a, b); };
  double inf = grid_refined_min(row, a, b, grid_points);
  if (inf <= 1e-300) return kInf;
  return 1.0 / inf;
}

Constants compute_constants(KernelSpec k, const ConeWindow& w) {
  return Constants{m_constant(k), M_constant(k, w.a, w.b), w};
}

WindowSearch optimize_window(KernelSpec k, int grid) {
  if (grid < 100) throw std::invalid_argument("window grid must be at least 100");
  WindowSearch best;
  best.constants.M = kInf;
  bool found = false;
  for (int ia = 0; ia < grid; ++ia) {
    double a = static_cast<double>(ia) / (grid - 1);
    for (int ib = ia + 1; ib < grid; ++ib) {
      double b = static_cast<double>(ib) / (grid - 1);
      double c = cone_constant(k, a, b);
      if (c <= 0.0) continue;
      double M = M_constant(k, a, b);
      ++best.windows_scanned;
      bool better = M < best.constants.M ||
                    (M == best.constants.M &&
                     (c > best.window.c || (c == best.window.c && a < best.window.a)));
      if (!found || better) {
        best.window = ConeWindow{k, a, b, c};
        best.constants = Constants{0.0, M, best.window};
        found = true;
      }
    }
  }
  if (!found) throw WindowError("no usable window on the grid");
  best.constants.m = m_constant(k);
  return best;
}

}  // namespace positone
