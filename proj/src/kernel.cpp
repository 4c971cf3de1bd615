#include "positone/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace positone {

std::string bc_name(BcKind bc) {
  return bc == BcKind::DirichletDirichlet ? "dirichlet-dirichlet" : "dirichlet-neumann";
}

BcKind bc_from_name(const std::string& name) {
  if (name == "dirichlet-dirichlet") return BcKind::DirichletDirichlet;
  if (name == "dirichlet-neumann") return BcKind::DirichletNeumann;
  throw std::invalid_argument("unknown boundary condition kind '" + name + "'");
}

double eval_kernel(KernelSpec k, double t, double s) {
  if (!(t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("kernel arguments outside the unit square");
  if (k.bc == BcKind::DirichletDirichlet)
    return s <= t ? s * (1.0 - t) : t * (1.0 - s);
  return s <= t ? s : t;
}

double kernel_row_integral(KernelSpec k, double t, double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0))
    throw std::invalid_argument("integration bounds must satisfy 0 <= a <= b <= 1");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("kernel row outside the unit interval");
  if (k.bc == BcKind::DirichletDirichlet) {
    // integral of s(1-t) below t and t(1-s) above t
    auto below = [t](double lo, double hi) { return (1.0 - t) * (hi * hi - lo * lo) / 2.0; };
    auto above = [t](double lo, double hi) {
      double p = 1.0 - lo, q = 1.0 - hi;
      return t * (p * p - q * q) / 2.0;
    };
    if (b <= t) return below(a, b);
    if (a >= t) return above(a, b);
    return below(a, t) + above(t, b);
  }
  // k(t,s) = min(s, t)
  auto below = [](double lo, double hi) { return (hi * hi - lo * lo) / 2.0; };
  if (b <= t) return below(a, b);
  if (a >= t) return t * (b - a);
  return below(a, t) + t * (b - t);
}

void accumulate_simpson_weights(std::vector<double>& w, int n, int j0, int j1) {
  double h = 1.0 / (n - 1);
  int m = j1 - j0;
  if (m <= 0) return;
  if (m == 1) {
    w[j0] += h / 2.0;
    w[j0 + 1] += h / 2.0;
    return;
  }
  int start = j0;
  if (m % 2 == 1) {
    // Simpson 3/8 on the first three intervals keeps fourth order
    w[start] += 3.0 * h / 8.0;
    w[start + 1] += 9.0 * h / 8.0;
    w[start + 2] += 9.0 * h / 8.0;
    w[start + 3] += 3.0 * h / 8.0;
    start += 3;
  }
  for (int j = start; j < j1; j += 2) {
    w[j] += h / 3.0;
    w[j + 1] += 4.0 * h / 3.0;
    w[j + 2] += h / 3.0;
  }
}

std::vector<double> simpson_weights_split(int n, int split_node) {
  std::vector<double> w(n, 0.0);
  accumulate_simpson_weights(w, n, 0, split_node);
  accumulate_simpson_weights(w, n, split_node, n - 1);
  return w;
}

namespace {

// Composite Simpson with an even panel count at roughly the grid
// resolution; the integrand is smooth inside each split piece.
double simpson_piece(KernelSpec k, double t, const std::function<double(double)>& y,
                     double a, double b, double h_target) {
  if (!(b > a)) return 0.0;
  int panels = 2 * std::max(1, static_cast<int>(std::ceil((b - a) / (2.0 * h_target))));
  double h = (b - a) / panels;
  double acc = 0.0;
  for (int i = 0; i <= panels; ++i) {
    double s = i == panels ? b : a + i * h;
    double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * eval_kernel(k, t, s) * y(s);
  }
  return acc * h / 3.0;
}

}  // namespace

GreenVerification verify_green(KernelSpec k, const std::function<double(double)>& y, int n) {
  if (n < 16) throw std::invalid_argument("verify_green needs n >= 16");
  double h = 1.0 / (n - 1);
  std::vector<double> yv(n);
  for (int i = 0; i < n; ++i) yv[i] = y(i * h);

  std::vector<double> u(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double t = j * h;
    u[j] = simpson_piece(k, t, y, 0.0, t, h) + simpson_piece(k, t, y, t, 1.0, h);
  }

  GreenVerification rep;
  rep.n = n;
  for (int j = 1; j + 1 < n; ++j) {
    double upp = (u[j - 1] - 2.0 * u[j] + u[j + 1]) / (h * h);
    rep.interior_residual = std::max(rep.interior_residual, std::abs(upp + yv[j]));
  }
  rep.bc_residual_left = std::abs(u[0]);
  if (k.bc == BcKind::DirichletDirichlet) {
    rep.bc_residual_right = std::abs(u[n - 1]);
  } else {
    // second-order one-sided derivative at t = 1
    double up1 = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    rep.bc_residual_right = std::abs(up1);
  }
  return rep;
}

}  // namespace positone
