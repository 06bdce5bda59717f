#pragma once

#include <cstddef>

// Hot-loop arithmetic kernels. Every kernel has a scalar reference
// implementation plus SIMD variants (AVX2 on x86-64, NEON on aarch64)
// selected once at startup. The environment variable VRT_KERNELS
// (scalar|avx2|neon) or force_level() overrides the detected level;
// requesting an unsupported level falls back to scalar.
namespace vrt::kernels {

enum class Level { Scalar, Avx2, Neon };

Level active_level();
void force_level(Level level);
const char* level_name(Level level);

/// dot product sum_i a_i * b_i
double dot(const double* a, const double* b, std::size_t n);

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// sum_i x_i
double sum(const double* x, std::size_t n);

/// sum_i (x_i - mean)^2
double sum_sq_dev(const double* x, std::size_t n, double mean);

/// y = A x with A row-major (rows x cols)
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y);

/// Rank-1 symmetric update A += alpha * v v^T, upper triangle only,
/// A row-major n x n. The caller mirrors the triangle when needed.
void syr_upper(double* a, std::size_t n, double alpha, const double* v);

namespace detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_sq_dev)(const double*, std::size_t, double);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*syr_upper)(double*, std::size_t, double, const double*);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when unsupported
const KernelTable* neon_table();  // nullptr when unsupported

}  // namespace detail

}  // namespace vrt::kernels
