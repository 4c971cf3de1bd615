#pragma once

#include <stdexcept>

#include "positone/kernel.hpp"

namespace positone {

class WindowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cone data for a window [a, b]: nonnegative functions whose minimum
// over [a, b] dominates c times their sup norm. c comes from the
// kernel-specific lower bound c * Phi(s) <= k(t, s) on [a, b] x [0, 1].
struct ConeWindow {
  KernelSpec kernel;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  friend bool operator==(const ConeWindow&, const ConeWindow&) = default;
};

struct Constants {
  double m = 0.0;  // 1/m = sup_t of the full row integral
  double M = 0.0;  // 1/M = inf over [a,b] of the windowed row integral
  ConeWindow window;
};

// Upper envelope Phi of the kernel: s(1-s) for Dirichlet-Dirichlet, s for
// Dirichlet-Neumann.
double phi_upper(KernelSpec k, double s);

// Closed-form cone constant for the window; 0 means the window is
// unusable and must be rejected by the caller.
double cone_constant(KernelSpec k, double a, double b);

// Validated window; throws WindowError when the cone constant vanishes
// or the sandwich inequality fails on a sampling grid.
ConeWindow make_window(KernelSpec k, double a, double b);

ConeWindow default_window(KernelSpec k);

// Dense check of c*Phi(s) <= k(t,s) <= Phi(s) for t in [a,b], s in [0,1].
bool sandwich_holds(const ConeWindow& w, int samples = 101, double tol = 1e-12);

// Scan grid plus golden-section refinement; the default resolution is
// already converged (values move by < 1e-9 relative under doubling).
double m_constant(KernelSpec k, int grid_points = 1001);
// Returns +infinity for a degenerate window whose row integral vanishes.
double M_constant(KernelSpec k, double a, double b, int grid_points = 1001);

Constants compute_constants(KernelSpec k, const ConeWindow& w);

struct WindowSearch {
  ConeWindow window;
  Constants constants;
  long windows_scanned = 0;
};

// Exhaustive grid search for the window minimizing M; ties broken by
// larger c, then smaller a.
WindowSearch optimize_window(KernelSpec k, int grid = 201);

}  // namespace positone
