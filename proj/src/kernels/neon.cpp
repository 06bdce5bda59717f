// NEON variants for aarch64, where the 128-bit float64x2 unit is baseline.

#include "vrt/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace vrt::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) r += x[i];
  return r;
}

double sum_sq_dev_neon(const double* x, std::size_t n, double mean) {
  const float64x2_t vm = vdupq_n_f64(mean);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vm);
    acc = vfmaq_f64(acc, d, d);
  }
  double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    const double d = x[i] - mean;
    r += d * d;
  }
  return r;
}

void gemv_neon(const double* a, std::size_t rows, std::size_t cols,
               const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(a + r * cols, x, cols);
}

void syr_upper_neon(double* a, std::size_t n, double alpha, const double* v) {
  for (std::size_t r = 0; r < n; ++r) {
    const double s = alpha * v[r];
    double* row = a + r * n;
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t c = r;
    for (; c + 2 <= n; c += 2)
      vst1q_f64(row + c, vfmaq_f64(vld1q_f64(row + c), vs, vld1q_f64(v + c)));
    for (; c < n; ++c) row[c] += s * v[c];
  }
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table = {dot_neon,        axpy_neon,
                                    sum_neon,        sum_sq_dev_neon,
                                    gemv_neon,       syr_upper_neon};
  return &table;
}

}  // namespace vrt::kernels::detail

#else

namespace vrt::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace vrt::kernels::detail

#endif
