#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>

#include "mpmm/fastmm.hpp"
#include "mpmm/matrix.hpp"
#include "mpmm/opcounter.hpp"

namespace mpmm {

/// Packed LU output: U on and above the diagonal, the strictly-lower part
/// holds the multipliers of the unit-lower L (Doolittle convention).
struct LUFactors {
  std::size_t n;
  Matrix packed;

  long bits() const { return packed.bits(); }
};

/// Settings for blocked elimination: panel width K, the multiplication kernel
/// for the Schur update, and the recursion threshold handed to fast kernels.
/// The reproduction sweeps use K = alpha * n_min.
struct BlockLUConfig {
  std::size_t block_size = 32;
  Algorithm kernel = Algorithm::winograd;
  std::size_t n_min = 32;

  static BlockLUConfig with_alpha(std::size_t alpha, std::size_t n_min, Algorithm kernel) {
    return BlockLUConfig{alpha * n_min, kernel, n_min};
  }
};

namespace detail {

/// Right-looking elimination of the square region [p, p+k) of `a`, in place,
/// k-loop outermost, multipliers stored below the diagonal. Pivots are taken
/// as-is (no pivoting); an exact zero is a hard error carrying the 1-based
/// global pivot index.
inline void lu_inplace(Matrix& a, std::size_t p, std::size_t k, PrecisionContext ctx) {
  Scalar t(ctx);
  const std::size_t end = p + k;
  for (std::size_t d = p; d < end; ++d) {
    if (a.at(d, d).is_zero())
      throw SingularError("zero pivot at index " + std::to_string(d + 1), d + 1);
    for (std::size_t i = d + 1; i < end; ++i) {
      mpfr_div(a.at(i, d).raw(), a.at(i, d).raw(), a.at(d, d).raw(), PrecisionContext::rounding);
      for (std::size_t j = d + 1; j < end; ++j) {
        mpfr_mul(t.raw(), a.at(i, d).raw(), a.at(d, j).raw(), PrecisionContext::rounding);
        mpfr_sub(a.at(i, j).raw(), a.at(i, j).raw(), t.raw(), PrecisionContext::rounding);
      }
    }
  }
}

/// Forward substitution L11 * X = A12 in place: rows [p, p+k) of columns
/// [c0, c0+w), with unit-lower L11 read from the region [p, p+k)^2.
inline void trsm_unit_lower_inplace(Matrix& a, std::size_t p, std::size_t k, std::size_t c0,
                                    std::size_t w, PrecisionContext ctx) {
  Scalar t(ctx);
  for (std::size_t j = c0; j < c0 + w; ++j)
    for (std::size_t i = p; i < p + k; ++i)
      for (std::size_t s = p; s < i; ++s) {
        mpfr_mul(t.raw(), a.at(i, s).raw(), a.at(s, j).raw(), PrecisionContext::rounding);
        mpfr_sub(a.at(i, j).raw(), a.at(i, j).raw(), t.raw(), PrecisionContext::rounding);
      }
}

/// Right-side substitution X * U11 = A21 in place: rows [r0, r0+h) of columns
/// [p, p+k), with upper U11 read from the region [p, p+k)^2.
inline void trsm_upper_right_inplace(Matrix& a, std::size_t r0, std::size_t h, std::size_t p,
                                     std::size_t k, PrecisionContext ctx) {
  Scalar t(ctx);
  for (std::size_t i = r0; i < r0 + h; ++i)
    for (std::size_t j = p; j < p + k; ++j) {
      for (std::size_t s = p; s < j; ++s) {
        mpfr_mul(t.raw(), a.at(i, s).raw(), a.at(s, j).raw(), PrecisionContext::rounding);
        mpfr_sub(a.at(i, j).raw(), a.at(i, j).raw(), t.raw(), PrecisionContext::rounding);
      }
      if (a.at(j, j).is_zero())
        throw SingularError("zero pivot at index " + std::to_string(j + 1), j + 1);
      mpfr_div(a.at(i, j).raw(), a.at(i, j).raw(), a.at(j, j).raw(), PrecisionContext::rounding);
    }
}

inline Matrix schur_product(const Matrix& l21, const Matrix& u12, const BlockLUConfig& cfg,
                            PrecisionContext ctx, OpCounter* ops) {
  switch (cfg.kernel) {
    case Algorithm::simple:
      return mul_views(MatrixView(l21), MatrixView(u12), ctx, ops);
    case Algorithm::block:
      return block_mul_impl(l21, u12, cfg.n_min, ctx, ops);
    default: {
      FastMMResult r = fast_mul(l21, u12, FastMMConfig{cfg.kernel, cfg.n_min}, ctx);
      if (ops) *ops += r.ops;
      return std::move(r.c);
    }
  }
}

}  // namespace detail

/// Plain column-wise (unblocked) elimination of the whole matrix, at the
/// matrix's own precision.
inline LUFactors lu_columnwise(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("lu_columnwise: matrix must be square");
  Matrix packed = a;
  detail::lu_inplace(packed, 0, packed.rows(), packed.ctx());
  return LUFactors{packed.rows(), std::move(packed)};
}

/// Blocked elimination: factor the leading K x K corner column-wise, turn
/// A12 into U12 and A21 into L21 by triangular solves, subtract L21*U12 from
/// the trailing block with the configured kernel, then repeat on the trailing
/// block; a final panel narrower than K is finished column-wise. With
/// K >= n this degenerates bit-exactly to lu_columnwise. `schur_ops`, when
/// given, accumulates the scalar operations of the Schur-update multiplies
/// (the subtraction itself is not included).
inline LUFactors lu_blocked(const Matrix& a, const BlockLUConfig& cfg, PrecisionContext ctx,
                            OpCounter* schur_ops = nullptr) {
  if (a.rows() != a.cols()) throw DimensionError("lu_blocked: matrix must be square");
  if (a.bits() != ctx.bits())
    throw DomainError("lu_blocked: working context must match the matrix precision");
  if (cfg.block_size == 0) throw DimensionError("lu_blocked: block size must be at least 1");
  const std::size_t n = a.rows(), k = cfg.block_size;
  Matrix p = a;
  std::size_t off = 0;
  while (n - off > k) {
    detail::lu_inplace(p, off, k, ctx);
    const std::size_t rest = n - off - k;
    detail::trsm_unit_lower_inplace(p, off, k, off + k, rest, ctx);
    detail::trsm_upper_right_inplace(p, off + k, rest, off, k, ctx);
    Matrix l21 = MatrixView(p, off + k, off, rest, k).to_matrix();
    Matrix u12 = MatrixView(p, off, off + k, k, rest).to_matrix();
    Matrix prod = detail::schur_product(l21, u12, cfg, ctx, schur_ops);
    for (std::size_t i = 0; i < rest; ++i)
      for (std::size_t j = 0; j < rest; ++j)
        mpfr_sub(p.at(off + k + i, off + k + j).raw(), p.at(off + k + i, off + k + j).raw(),
                 prod.at(i, j).raw(), PrecisionContext::rounding);
    off += k;
  }
  detail::lu_inplace(p, off, n - off, ctx);
  return LUFactors{n, std::move(p)};
}

/// Solve L11 * U12 = A12, forward substitution column by column; L11 is
/// unit-lower so no division occurs.
inline Matrix trsm_unit_lower(const MatrixView& l11, const MatrixView& a12,
                              PrecisionContext ctx) {
  if (l11.rows() != l11.cols()) throw DimensionError("trsm_unit_lower: L11 must be square");
  if (l11.rows() != a12.rows()) throw DimensionError("trsm_unit_lower: row count mismatch");
  const std::size_t k = l11.rows(), w = a12.cols();
  Matrix x(k, w, ctx);
  Scalar t(ctx);
  for (std::size_t j = 0; j < w; ++j)
    for (std::size_t i = 0; i < k; ++i) {
      mpfr_ptr acc = x.at(i, j).raw();
      mpfr_set(acc, a12.at(i, j).raw(), PrecisionContext::rounding);
      for (std::size_t s = 0; s < i; ++s) {
        mpfr_mul(t.raw(), l11.at(i, s).raw(), x.at(s, j).raw(), PrecisionContext::rounding);
        mpfr_sub(acc, acc, t.raw(), PrecisionContext::rounding);
      }
    }
  return x;
}

/// Solve L21 * U11 = A21, right-side substitution row by row; U11's diagonal
/// divides, a zero there is a singular-pivot error.
inline Matrix trsm_upper_right(const MatrixView& a21, const MatrixView& u11,
                               PrecisionContext ctx) {
  if (u11.rows() != u11.cols()) throw DimensionError("trsm_upper_right: U11 must be square");
  if (a21.cols() != u11.rows()) throw DimensionError("trsm_upper_right: column count mismatch");
  const std::size_t h = a21.rows(), k = u11.rows();
  Matrix x(h, k, ctx);
  Scalar t(ctx);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      mpfr_ptr acc = x.at(i, j).raw();
      mpfr_set(acc, a21.at(i, j).raw(), PrecisionContext::rounding);
      for (std::size_t s = 0; s < j; ++s) {
        mpfr_mul(t.raw(), x.at(i, s).raw(), u11.at(s, j).raw(), PrecisionContext::rounding);
        mpfr_sub(acc, acc, t.raw(), PrecisionContext::rounding);
      }
      if (u11.at(j, j).is_zero())
        throw SingularError("zero pivot at index " + std::to_string(j + 1), j + 1);
      mpfr_div(acc, acc, u11.at(j, j).raw(), PrecisionContext::rounding);
    }
  return x;
}

/// Unit-lower L as an explicit matrix.
inline Matrix unpack_lower(const LUFactors& f) {
  Matrix l(f.n, f.n, f.packed.ctx());
  for (std::size_t i = 0; i < f.n; ++i) {
    mpfr_set_ui(l.at(i, i).raw(), 1, PrecisionContext::rounding);
    for (std::size_t j = 0; j < i; ++j)
      mpfr_set(l.at(i, j).raw(), f.packed.at(i, j).raw(), PrecisionContext::rounding);
  }
  return l;
}

/// Upper U (diagonal included) as an explicit matrix.
inline Matrix unpack_upper(const LUFactors& f) {
  Matrix u(f.n, f.n, f.packed.ctx());
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t j = i; j < f.n; ++j)
      mpfr_set(u.at(i, j).raw(), f.packed.at(i, j).raw(), PrecisionContext::rounding);
  return u;
}

/// Two triangular solves against packed factors: Ly = b (unit diagonal), then
/// Ux = y.
inline Vector lu_solve(const LUFactors& f, const Vector& b, PrecisionContext ctx) {
  const std::size_t n = f.n;
  if (b.size() != n) throw DimensionError("lu_solve: length mismatch");
  const Matrix& p = f.packed;
  Scalar t(ctx);
  Vector y;
  y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Scalar acc(ctx);
    mpfr_set(acc.raw(), b[i].raw(), PrecisionContext::rounding);
    for (std::size_t s = 0; s < i; ++s) {
      mpfr_mul(t.raw(), p.at(i, s).raw(), y[s].raw(), PrecisionContext::rounding);
      mpfr_sub(acc.raw(), acc.raw(), t.raw(), PrecisionContext::rounding);
    }
    y.push_back(std::move(acc));
  }
  Vector x(n, Scalar(ctx));
  for (std::size_t ii = n; ii-- > 0;) {
    Scalar acc(ctx);
    mpfr_set(acc.raw(), y[ii].raw(), PrecisionContext::rounding);
    for (std::size_t s = ii + 1; s < n; ++s) {
      mpfr_mul(t.raw(), p.at(ii, s).raw(), x[s].raw(), PrecisionContext::rounding);
      mpfr_sub(acc.raw(), acc.raw(), t.raw(), PrecisionContext::rounding);
    }
    if (p.at(ii, ii).is_zero())
      throw SingularError("zero pivot at index " + std::to_string(ii + 1), ii + 1);
    mpfr_div(acc.raw(), acc.raw(), p.at(ii, ii).raw(), PrecisionContext::rounding);
    x[ii] = std::move(acc);
  }
  return x;
}

/// Blocked factorization followed by the two substitutions.
inline Vector solve(const Matrix& a, const Vector& b, const BlockLUConfig& cfg,
                    PrecisionContext ctx) {
  LUFactors f = lu_blocked(a, cfg, ctx);
  return lu_solve(f, b, ctx);
}

/// Column-wise factorization followed by the two substitutions, at the
/// matrix's own precision.
inline Vector solve_columnwise(const Matrix& a, const Vector& b) {
  LUFactors f = lu_columnwise(a);
  return lu_solve(f, b, a.ctx());
}

/// Explicit inverse by column solves at ctx. The input is copied into ctx
/// first (exact whenever ctx carries at least the input's precision).
inline Matrix inverse(const Matrix& a, PrecisionContext ctx) {
  if (a.rows() != a.cols()) throw DimensionError("inverse: matrix must be square");
  const std::size_t n = a.rows();
  Matrix ahi(n, n, ctx);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mpfr_set(ahi.at(i, j).raw(), a.at(i, j).raw(), PrecisionContext::rounding);
  LUFactors f = lu_columnwise(ahi);
  Matrix inv(n, n, ctx);
  Vector e(n, Scalar(ctx));
  for (std::size_t j = 0; j < n; ++j) {
    mpfr_set_ui(e[j].raw(), 1, PrecisionContext::rounding);
    Vector x = lu_solve(f, e, ctx);
    for (std::size_t i = 0; i < n; ++i)
      mpfr_set(inv.at(i, j).raw(), x[i].raw(), PrecisionContext::rounding);
    mpfr_set_ui(e[j].raw(), 0, PrecisionContext::rounding);
  }
  return inv;
}

/// 1-norm condition number via the explicit inverse, all evaluated at the
/// elevated context ctx_hi.
inline Scalar cond_one(const Matrix& a, PrecisionContext ctx_hi) {
  const std::size_t n = a.rows();
  Matrix ahi(n, a.cols(), ctx_hi);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      mpfr_set(ahi.at(i, j).raw(), a.at(i, j).raw(), PrecisionContext::rounding);
  Scalar na = one_norm(ahi);
  Scalar ni = one_norm(inverse(a, ctx_hi));
  return mul(na, ni, ctx_hi);
}

/// Default elevated precision: twice the matrix's bits plus 64 guard bits,
/// clamped to the supported maximum.
inline Scalar cond_one(const Matrix& a) {
  const long hi = std::min(2 * a.bits() + 64, PrecisionContext::max_bits);
  return cond_one(a, PrecisionContext(hi));
}

/// Error summary of a computed solution against a known one. Components whose
/// reference is exactly zero are excluded from the relative maximum; the
/// largest absolute deviation over those components is reported separately.
struct SolutionError {
  Scalar max_rel;
  Scalar max_zero_abs;
  std::size_t zero_refs = 0;
};

inline SolutionError max_rel_error_solution(const Vector& xhat, const Vector& xtrue) {
  if (xhat.size() != xtrue.size()) throw DimensionError("solution error: length mismatch");
  if (xtrue.empty()) throw DimensionError("solution error: empty vectors");
  PrecisionContext ctx(xtrue.front().bits());
  SolutionError se{Scalar(ctx), Scalar(ctx), 0};
  Scalar t(ctx);
  bool any = false;
  for (std::size_t i = 0; i < xtrue.size(); ++i) {
    if (xtrue[i].is_zero()) {
      ++se.zero_refs;
      Scalar d = sub(xhat[i], xtrue[i], ctx);
      mpfr_abs(d.raw(), d.raw(), PrecisionContext::rounding);
      if (d > se.max_zero_abs) se.max_zero_abs = d;
      continue;
    }
    Scalar e = rel_error(xhat[i], xtrue[i]);
    if (!any || e > se.max_rel) se.max_rel = e;
    any = true;
  }
  if (!any) throw UndefinedMetricError("solution error: all reference components are zero");
  return se;
}

}  // namespace mpmm
