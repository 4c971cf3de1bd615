#pragma once

#include <functional>
#include <string>
#include <vector>

namespace positone {

// Boundary-condition pair of the second-order problem u'' + f(u) = 0 on
// the unit interval. DirichletDirichlet is u(0)=u(1)=0;
// DirichletNeumann is the mixed pair u(0)=u'(1)=0.
enum class BcKind { DirichletDirichlet, DirichletNeumann };

struct KernelSpec {
  BcKind bc = BcKind::DirichletDirichlet;
  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

std::string bc_name(BcKind bc);       // "dirichlet-dirichlet" / "dirichlet-neumann"
BcKind bc_from_name(const std::string& name);

// Green's kernel k(t, s), nonnegative and continuous on the unit square,
// with a derivative kink along s = t.
double eval_kernel(KernelSpec k, double t, double s);

// Exact value of the partial integral of k(t, .) over [a, b], splitting
// the piecewise form at s = t.
double kernel_row_integral(KernelSpec k, double t, double a, double b);

struct GreenVerification {
  int n = 0;
  double interior_residual = 0.0;  // max |u''_fd + y| over interior nodes
  double bc_residual_left = 0.0;   // |u(0)|
  double bc_residual_right = 0.0;  // |u(1)| or |u'(1)| depending on the BC pair
};

// Checks that u(t) = integral of k(t,s) y(s) ds solves u'' + y = 0 with
// the kernel's boundary conditions: quadrature on an n-node uniform grid
// (composite Simpson, panels pinned at s = t), then second-order finite
// differences for u'' and the right derivative BC.
GreenVerification verify_green(KernelSpec k, const std::function<double(double)>& y,
                               int n = 201);

// Composite quadrature weights for nodes j0..j1 of an n-node uniform grid
// on [0,1]: Simpson pairs, with a 3/8 block (or a single trapezoid) when
// the interval count is odd. Accumulates into w.
void accumulate_simpson_weights(std::vector<double>& w, int n, int j0, int j1);

// Full weight row for integrating over [0,1] with the panel boundary
// pinned at node j.
std::vector<double> simpson_weights_split(int n, int split_node);

}  // namespace positone
