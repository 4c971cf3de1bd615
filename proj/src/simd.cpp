#include "positone/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace positone::simd {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpby_scalar(double alpha, const double* x, double beta, const double* y,
                  double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double min_element_scalar(const double* x, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

double max_element_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

constexpr Ops kScalarOps{dot_scalar, axpby_scalar, max_abs_diff_scalar,
                         min_element_scalar, max_element_scalar, "scalar"};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

#if defined(POSITONE_HAVE_AVX2_TU)
namespace detail {
const Ops& avx2_ops();
}
#endif
#if defined(POSITONE_HAVE_NEON_TU)
namespace detail {
const Ops& neon_ops();
}
#endif

const Ops& active_ops() {
  static const Ops& selected = []() -> const Ops& {
#if defined(POSITONE_HAVE_AVX2_TU) && defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) return detail::avx2_ops();
#endif
#if defined(POSITONE_HAVE_NEON_TU) && defined(__aarch64__)
    return detail::neon_ops();
#endif
    return kScalarOps;
  }();
  return selected;
}

const char* active_backend() { return active_ops().name; }

}  // namespace positone::simd
