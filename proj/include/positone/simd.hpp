#pragma once

#include <cstddef>
#include <span>

namespace positone::simd {

// Vector kernels behind the quadrature matvec, Picard updates and grid
// reductions. A backend is chosen once at startup from CPU features; the
// scalar implementations are the reference the variants are tested
// against. dot may reassociate the sum; the elementwise and min/max
// kernels are bit-identical across backends.
struct Ops {
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpby)(double alpha, const double* x, double beta, const double* y,
                double* out, std::size_t n);
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
  double (*min_element)(const double* x, std::size_t n);
  double (*max_element)(const double* x, std::size_t n);
  const char* name;
};

const Ops& scalar_ops();
const Ops& active_ops();
const char* active_backend();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active_ops().dot(x.data(), y.data(), x.size());
}

inline void axpby(double alpha, std::span<const double> x, double beta,
                  std::span<const double> y, std::span<double> out) {
  active_ops().axpby(alpha, x.data(), beta, y.data(), out.data(), x.size());
}

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  return active_ops().max_abs_diff(x.data(), y.data(), x.size());
}

inline double min_element(std::span<const double> x) {
  return active_ops().min_element(x.data(), x.size());
}

inline double max_element(std::span<const double> x) {
  return active_ops().max_element(x.data(), x.size());
}

}  // namespace positone::simd
