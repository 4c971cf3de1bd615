// NEON variants of the vector kernels (aarch64). Same contract as the
// AVX2 unit: elementwise and min/max kernels are bit-identical with the
// scalar reference, dot reassociates into two lanes.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "positone/simd.hpp"

namespace positone::simd::detail {

namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void axpby_neon(double alpha, const double* x, double beta, const double* y,
                double* out, std::size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  float64x2_t vb = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t t = vaddq_f64(vmulq_f64(va, vld1q_f64(x + i)),
                              vmulq_f64(vb, vld1q_f64(y + i)));
    vst1q_f64(out + i, t);
  }
  for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

double max_abs_diff_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vabdq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    acc = vmaxq_f64(acc, d);
  }
  double m = vmaxvq_f64(acc);
  for (; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double min_element_neon(const double* x, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 2) {
    float64x2_t acc = vld1q_f64(x);
    for (i = 2; i + 2 <= n; i += 2) acc = vminq_f64(acc, vld1q_f64(x + i));
    m = vminvq_f64(acc);
  }
  for (; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

double max_element_neon(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 2) {
    float64x2_t acc = vld1q_f64(x);
    for (i = 2; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(x + i));
    m = vmaxvq_f64(acc);
  }
  for (; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

constexpr Ops kNeonOps{dot_neon, axpby_neon, max_abs_diff_neon,
                       min_element_neon, max_element_neon, "neon"};

}  // namespace

const Ops& neon_ops() { return kNeonOps; }

}  // namespace positone::simd::detail
