#pragma once

#include <span>
#include <string>
#include <utility>

#include "positone/certify.hpp"
#include "positone/cone.hpp"
#include "positone/expr.hpp"

namespace positone {

// Nodal approximation of a solution of u = Tu on a uniform grid.
// residual is ||u - Tu||_inf recomputed from the stored values.
struct DiscreteSolution {
  std::vector<double> grid;
  std::vector<std::vector<double>> values;  // one vector per equation
  std::vector<double> sup_norms;
  double max_norm = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Discretized integral operator: composite Simpson rows with the panel
// boundary pinned at s = t_j, folded with the kernel into a dense matrix
// so that applying T is a row-by-row dot product.
class HammersteinOperator {
 public:
  HammersteinOperator(KernelSpec k, int n);

  void apply(std::span<const double> g, std::span<double> out) const;
  int size() const { return n_; }
  const std::vector<double>& nodes() const { return nodes_; }
  KernelSpec kernel() const { return kernel_; }

 private:
  KernelSpec kernel_;
  int n_;
  std::vector<double> nodes_;
  std::vector<double> weights_;  // n x n row-major
};

// One application of T u(t) = integral k(t,s) f(u(s)) ds at the grid of u.
std::vector<double> apply_T(const Program& f, KernelSpec k, std::span<const double> u);

struct PicardOptions {
  int n = 201;
  double tol = 1e-10;
  int max_iter = 10000;
  double relaxation = 0.5;  // damping factor in (0, 1]
};

enum class SolveStatus { Converged, MaxIterations };

// Non-convergence is a reported outcome, not an error: the last iterate
// and its residual are returned either way.
struct PicardResult {
  SolveStatus status = SolveStatus::MaxIterations;
  DiscreteSolution solution;
};

PicardResult picard_solve(const std::vector<Program>& fs, const std::vector<KernelSpec>& ks,
                          std::vector<std::vector<double>> u0, const PicardOptions& opts);

struct ShootOptions {
  double slope_lo = 1e-6;
  double slope_hi = 50.0;
  double step = 1e-4;      // RK4 target step for u'' = -f(u)
  double bc_tol = 1e-6;    // accepted boundary miss of the returned solution
  int n_output = 201;
};

struct ShootResult {
  bool found = false;
  DiscreteSolution solution;
  double slope = 0.0;  // u'(0) of the returned trajectory
  std::string reason;  // set when not found
};

// Integrates the initial value problem from u(0)=0 and bisects on u'(0)
// against the right boundary condition (u(1)=0 or u'(1)=0). Trajectories
// are integrated with f clamped to u >= 0; a returned solution must be
// nonnegative and nontrivial.
ShootResult shoot_solve(const Program& f, KernelSpec k, const ShootOptions& opts);

struct ConeCheckEq {
  double min_in_window = 0.0;
  double required = 0.0;  // c * sup norm - tol
  bool pass = false;
};

struct ConeCheckReport {
  bool pass = false;
  std::vector<ConeCheckEq> eqs;
};

// Verifies min over grid nodes in [a,b] >= c * sup norm - tol, one
// window per equation.
ConeCheckReport cone_check(const DiscreteSolution& sol, const std::vector<ConeWindow>& windows,
                           double tol = 1e-6);

struct WindowConfirmation {
  std::array<double, 2> window{};
  bool confirmed = false;
  double norm = 0.0;        // norm of the matching solution when confirmed
  std::string method;       // "picard" or "shooting"
};

// Best-effort cross-check: a certificate window is confirmed when some
// numerically found solution's norm lies inside it (within a relative
// discretization allowance); an unmatched window is reported as
// unconfirmed, never as a refutation.
struct ConfirmationReport {
  std::vector<WindowConfirmation> windows;
  bool all_confirmed = false;
};

using FoundSolution = std::pair<DiscreteSolution, std::string>;  // solution, method

ConfirmationReport verify_certificate(const Certificate& cert,
                                      const std::vector<FoundSolution>& found);

struct MultistartOptions {
  PicardOptions picard;
  ShootOptions shoot;
  int shoot_brackets = 24;
};

// Damped Picard from bump profiles at amplitudes {c*rho, rho, rho/c}
// around each certified window (constant profiles when no certificate is
// given), plus the shooting oracle for scalar problems.
std::vector<FoundSolution> multistart_solve(const std::vector<Program>& fs,
                                            const std::vector<KernelSpec>& ks,
                                            const Certificate* cert,
                                            const MultistartOptions& opts);

}  // namespace positone
