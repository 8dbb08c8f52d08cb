#pragma once

#include <cstdint>
#include <utility>

#include "mpmm/matrix.hpp"
#include "mpmm/precision.hpp"

namespace mpmm {

/// xorshift64* stream. Fully pinned: the same seed yields the same matrices
/// on every platform. Seed 0 is remapped because the all-zero state is fixed.
class Prng64 {
 public:
  explicit Prng64(std::uint64_t seed)
      : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

  std::uint64_t next64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 2685821657736338717ULL;
  }

  std::uint64_t top53() { return next64() >> 11; }

  /// u = 2*(k/2^53) - 1 for a 53-bit draw k, formed as the exact dyadic
  /// (2k - 2^53)/2^53 and rounded once at ctx. Range [-1, 1).
  Scalar uniform(PrecisionContext ctx) {
    const std::int64_t num =
        static_cast<std::int64_t>(2 * top53()) - (std::int64_t{1} << 53);
    Scalar u(ctx);
    mpfr_set_si(u.raw(), num, PrecisionContext::rounding);
    mpfr_mul_2si(u.raw(), u.raw(), -53, PrecisionContext::rounding);
    return u;
  }

 private:
  std::uint64_t state_;
};

/// Matrix with entries drawn row-major from uniform(ctx).
inline Matrix gen_random(std::size_t rows, std::size_t cols, std::uint64_t seed,
                         PrecisionContext ctx) {
  Prng64 rng(seed);
  Matrix a(rows, cols, ctx);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a.at(i, j) = rng.uniform(ctx);
  return a;
}

struct BenchPair {
  Matrix a;
  Matrix b;
};

/// Deterministic benchmark operands: a_ij = sqrt(5)*(i+j-1) of shape m x l,
/// b_ij = sqrt(3)*(l-i+1) of shape l x n (the row count of B is l). Each
/// entry is the correctly-rounded root times an exact integer, so it carries
/// one extra rounding beyond the root itself.
inline BenchPair gen_bench_pair(std::size_t m, std::size_t l, std::size_t n,
                                PrecisionContext ctx) {
  const Scalar r5 = sqrt(Scalar(5L, ctx), ctx);
  const Scalar r3 = sqrt(Scalar(3L, ctx), ctx);
  Matrix a(m, l, ctx);
  Matrix b(l, n, ctx);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < l; ++j)
      mpfr_mul_si(a.at(i, j).raw(), r5.raw(), static_cast<long>(i + j + 1),
                  PrecisionContext::rounding);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mpfr_mul_si(b.at(i, j).raw(), r3.raw(), static_cast<long>(l - i),
                  PrecisionContext::rounding);
  return BenchPair{std::move(a), std::move(b)};
}

/// Closed form for an entry of the product of the benchmark pair:
/// c_ij = sqrt(15) * sum_{k=1..l} (i+k-1)(l-k+1), independent of j.
/// i is 1-based. The sum is exact in integers; the entry carries the rounding
/// of the root and of one product, both at ctx.
inline Scalar bench_oracle_entry(std::size_t i, std::size_t l, PrecisionContext ctx) {
  unsigned long long s = 0;
  for (std::size_t k = 1; k <= l; ++k)
    s += static_cast<unsigned long long>(i + k - 1) * (l - k + 1);
  const Scalar r15 = sqrt(Scalar(15L, ctx), ctx);
  Scalar c(ctx);
  mpfr_mul_ui(c.raw(), r15.raw(), static_cast<unsigned long>(s), PrecisionContext::rounding);
  return c;
}

/// Full m x n closed-form product of the benchmark pair at ctx. Rows are
/// constant across columns.
inline Matrix bench_reference(std::size_t m, std::size_t l, std::size_t n,
                              PrecisionContext ctx) {
  Matrix c(m, n, ctx);
  for (std::size_t i = 0; i < m; ++i) {
    Scalar e = bench_oracle_entry(i + 1, l, ctx);
    for (std::size_t j = 0; j < n; ++j)
      mpfr_set(c.at(i, j).raw(), e.raw(), PrecisionContext::rounding);
  }
  return c;
}

/// Lotkin matrix: first row all ones, a_ij = 1/(i+j-1) below it. Severely
/// ill-conditioned; each reciprocal is correctly rounded at ctx.
inline Matrix gen_lotkin(std::size_t n, PrecisionContext ctx) {
  Matrix a(n, n, ctx);
  mpfr_t den;
  mpfr_init2(den, 64);
  for (std::size_t j = 0; j < n; ++j) mpfr_set_ui(a.at(0, j).raw(), 1, PrecisionContext::rounding);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpfr_set_ui(den, static_cast<unsigned long>(i + j + 1), PrecisionContext::rounding);
      mpfr_ui_div(a.at(i, j).raw(), 1, den, PrecisionContext::rounding);
    }
  mpfr_clear(den);
  return a;
}

struct LinearSystem {
  Vector x_true;
  Vector b;
};

/// Known-solution system for A: x_true = [0, 1, ..., n-1] rounded at ctx and
/// b = A*x_true evaluated at ctx, so the right-hand side includes working
/// precision rounding just like the solver input it feeds.
inline LinearSystem gen_linear_system(const Matrix& a, PrecisionContext ctx) {
  Vector x;
  x.reserve(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Scalar e(ctx);
    mpfr_set_ui(e.raw(), static_cast<unsigned long>(j), PrecisionContext::rounding);
    x.push_back(std::move(e));
  }
  Vector b = mat_vec_mul(a, x, ctx);
  return LinearSystem{std::move(x), std::move(b)};
}

}  // namespace mpmm
