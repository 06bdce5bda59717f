#include "vrt/kernels.hpp"

namespace vrt::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double mean) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    acc += d * d;
  }
  return acc;
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r)
    y[r] = dot_scalar(a + r * cols, x, cols);
}

void syr_upper_scalar(double* a, std::size_t n, double alpha, const double* v) {
  for (std::size_t r = 0; r < n; ++r) {
    const double s = alpha * v[r];
    double* row = a + r * n;
    for (std::size_t c = r; c < n; ++c) row[c] += s * v[c];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {dot_scalar,        axpy_scalar,
                                    sum_scalar,        sum_sq_dev_scalar,
                                    gemv_scalar,       syr_upper_scalar};
  return table;
}

}  // namespace vrt::kernels::detail
