#include "vrt/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace vrt::kernels {
namespace {

using detail::KernelTable;

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level detect_level() {
  if (const char* env = std::getenv("VRT_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Level::Scalar;
    if (std::strcmp(env, "avx2") == 0 && detail::avx2_table() && cpu_has_avx2())
      return Level::Avx2;
    if (std::strcmp(env, "neon") == 0 && detail::neon_table())
      return Level::Neon;
    return Level::Scalar;
  }
  if (detail::neon_table()) return Level::Neon;
  if (detail::avx2_table() && cpu_has_avx2()) return Level::Avx2;
  return Level::Scalar;
}

struct Dispatch {
  Level level;
  const KernelTable* table;
};

Dispatch& dispatch() {
  static Dispatch d = [] {
    Dispatch init;
    init.level = detect_level();
    init.table = &detail::scalar_table();
    if (init.level == Level::Avx2) init.table = detail::avx2_table();
    if (init.level == Level::Neon) init.table = detail::neon_table();
    return init;
  }();
  return d;
}

}  // namespace

Level active_level() { return dispatch().level; }

void force_level(Level level) {
  const KernelTable* table = nullptr;
  switch (level) {
    case Level::Scalar: table = &detail::scalar_table(); break;
    case Level::Avx2:
      if (cpu_has_avx2()) table = detail::avx2_table();
      break;
    case Level::Neon: table = detail::neon_table(); break;
  }
  if (!table) {  // unsupported request: fall back to scalar
    level = Level::Scalar;
    table = &detail::scalar_table();
  }
  dispatch().level = level;
  dispatch().table = table;
}

const char* level_name(Level level) {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
    case Level::Neon: return "neon";
  }
  return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) {
  return dispatch().table->dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  dispatch().table->axpy(alpha, x, y, n);
}

double sum(const double* x, std::size_t n) { return dispatch().table->sum(x, n); }

double sum_sq_dev(const double* x, std::size_t n, double mean) {
  return dispatch().table->sum_sq_dev(x, n, mean);
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x,
          double* y) {
  dispatch().table->gemv(a, rows, cols, x, y);
}

void syr_upper(double* a, std::size_t n, double alpha, const double* v) {
  dispatch().table->syr_upper(a, n, alpha, v);
}

}  // namespace vrt::kernels
