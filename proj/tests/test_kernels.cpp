#include "vrt/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

namespace k = vrt::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-10 * std::max(1.0, scale);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels match straightforward loops") {
  std::mt19937_64 rng(7);
  k::force_level(k::Level::Scalar);
  for (std::size_t n : {0u, 1u, 3u, 8u, 17u}) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    double dot = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += a[i] * b[i];
      sum += a[i];
    }
    CHECK(k::dot(a.data(), b.data(), n) == doctest::Approx(dot).epsilon(1e-12));
    CHECK(k::sum(a.data(), n) == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("active level matches scalar reference on awkward sizes") {
  // Covers remainders around the 4-lane AVX2 and 2-lane NEON widths.
  const k::Level detected = [] {
    k::force_level(k::Level::Avx2);  // falls back to scalar when unsupported
    return k::active_level();
  }();
  INFO("active level: ", k::level_name(detected));

  std::mt19937_64 rng(42);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 31u,
                        64u, 100u, 1021u, 1024u}) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);

    k::force_level(k::Level::Scalar);
    const double dot_ref = k::dot(a.data(), b.data(), n);
    const double sum_ref = k::sum(a.data(), n);
    const double ssd_ref = k::sum_sq_dev(a.data(), n, 0.25);
    auto axpy_ref = b;
    k::axpy(1.5, a.data(), axpy_ref.data(), n);

    k::force_level(detected);
    CHECK(close(k::dot(a.data(), b.data(), n), dot_ref, std::sqrt(double(n)) + 1));
    CHECK(close(k::sum(a.data(), n), sum_ref, std::sqrt(double(n)) + 1));
    CHECK(close(k::sum_sq_dev(a.data(), n, 0.25), ssd_ref, double(n) + 1));
    auto axpy_simd = b;
    k::axpy(1.5, a.data(), axpy_simd.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(axpy_simd[i] == axpy_ref[i]);
  }
  k::force_level(detected);
}

TEST_CASE("gemv equivalence across levels") {
  std::mt19937_64 rng(3);
  const k::Level detected = k::active_level();
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1},
                            {3, 5},
                            {8, 8},
                            {13, 31},
                            {40, 111}}) {
    const auto a = random_vec(rng, rows * cols);
    const auto x = random_vec(rng, cols);
    std::vector<double> y_ref(rows), y_simd(rows);

    k::force_level(k::Level::Scalar);
    k::gemv(a.data(), rows, cols, x.data(), y_ref.data());
    k::force_level(detected);
    k::gemv(a.data(), rows, cols, x.data(), y_simd.data());
    for (std::size_t r = 0; r < rows; ++r)
      CHECK(close(y_simd[r], y_ref[r], std::sqrt(double(cols)) + 1));
  }
}

TEST_CASE("syr_upper equivalence and triangle discipline") {
  std::mt19937_64 rng(11);
  const k::Level detected = k::active_level();
  for (std::size_t n : {1u, 2u, 5u, 9u, 33u}) {
    const auto v = random_vec(rng, n);
    std::vector<double> a_ref(n * n, 0.5), a_simd(n * n, 0.5);

    k::force_level(k::Level::Scalar);
    k::syr_upper(a_ref.data(), n, 2.0, v.data());
    k::force_level(detected);
    k::syr_upper(a_simd.data(), n, 2.0, v.data());

    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        CHECK(close(a_simd[r * n + c], a_ref[r * n + c], 4.0));
        if (c < r)  // strict lower triangle untouched
          CHECK(a_ref[r * n + c] == 0.5);
      }
  }
}

TEST_CASE("forcing an unsupported level falls back to scalar") {
#if !defined(__aarch64__)
  k::force_level(k::Level::Neon);
  CHECK(k::active_level() == k::Level::Scalar);
#endif
  k::force_level(k::Level::Avx2);  // restore the best available
}

}  // TEST_SUITE
