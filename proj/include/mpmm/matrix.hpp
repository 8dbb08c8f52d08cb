#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mpmm/errors.hpp"
#include "mpmm/opcounter.hpp"
#include "mpmm/precision.hpp"

namespace mpmm {

/// Dense row-major matrix of Scalars, all carrying the same mantissa length.
/// Element access is 0-based; the generator callbacks and the formulas in the
/// docs are 1-based.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, PrecisionContext ctx)
      : rows_(rows), cols_(cols), bits_(ctx.bits()) {
    if (rows == 0 || cols == 0)
      throw DimensionError("matrix dimensions must be at least 1x1");
    e_.reserve(rows * cols);
    for (std::size_t i = 0; i < rows * cols; ++i) e_.emplace_back(ctx);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  long bits() const { return bits_; }
  PrecisionContext ctx() const { return PrecisionContext(bits_); }

  Scalar& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

 private:
  std::size_t rows_, cols_;
  long bits_;
  std::vector<Scalar> e_;
};

using Vector = std::vector<Scalar>;

/// Read-only window into a parent matrix. Views never mutate their parent and
/// must not outlive it.
class MatrixView {
 public:
  MatrixView(const Matrix& parent, std::size_t i0, std::size_t j0, std::size_t h, std::size_t w)
      : m_(&parent), i0_(i0), j0_(j0), h_(h), w_(w) {
    if (h == 0 || w == 0) throw DimensionError("view must be at least 1x1");
    if (i0 + h > parent.rows() || j0 + w > parent.cols())
      throw DimensionError("view window exceeds parent matrix");
  }

  explicit MatrixView(const Matrix& parent) : MatrixView(parent, 0, 0, parent.rows(), parent.cols()) {}

  std::size_t rows() const { return h_; }
  std::size_t cols() const { return w_; }
  long bits() const { return m_->bits(); }

  const Scalar& at(std::size_t i, std::size_t j) const { return m_->at(i0_ + i, j0_ + j); }

  /// Window within this window, offsets relative to this view's origin.
  MatrixView sub(std::size_t i0, std::size_t j0, std::size_t h, std::size_t w) const {
    return MatrixView(*m_, i0_ + i0, j0_ + j0, h, w);
  }

  /// Fresh matrix holding a copy of the window, at the parent's precision.
  Matrix to_matrix() const {
    Matrix r(h_, w_, PrecisionContext(m_->bits()));
    for (std::size_t i = 0; i < h_; ++i)
      for (std::size_t j = 0; j < w_; ++j)
        mpfr_set(r.at(i, j).raw(), at(i, j).raw(), MPFR_RNDN);
    return r;
  }

 private:
  const Matrix* m_;
  std::size_t i0_, j0_, h_, w_;
};

/// Block grid for a product C = A*B tiled at edge n_min:
/// M x L blocks of A, L x N blocks of B. Edge blocks may be ragged.
struct BlockingScheme {
  std::size_t n_min;
  std::size_t row_blocks;    // M = ceil(m / n_min)
  std::size_t inner_blocks;  // L = ceil(l / n_min)
  std::size_t col_blocks;    // N = ceil(n / n_min)

  static BlockingScheme for_product(std::size_t m, std::size_t l, std::size_t n,
                                    std::size_t n_min) {
    if (n_min == 0) throw DimensionError("n_min must be at least 1");
    auto blocks = [n_min](std::size_t d) { return (d + n_min - 1) / n_min; };
    return BlockingScheme{n_min, blocks(m), blocks(l), blocks(n)};
  }
};

/// Element (i,j) = f(i,j) rounded at ctx; f receives 1-based indices.
inline Matrix mat_from_fn(std::size_t rows, std::size_t cols, PrecisionContext ctx,
                          const std::function<Scalar(std::size_t, std::size_t)>& f) {
  Matrix r(rows, cols, ctx);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      mpfr_set(r.at(i, j).raw(), f(i + 1, j + 1).raw(), PrecisionContext::rounding);
  return r;
}

namespace detail {

enum class Elementwise { add, sub };

inline void check_same_shape(std::size_t am, std::size_t an, std::size_t bm, std::size_t bn) {
  if (am != bm || an != bn)
    throw DimensionError("shape mismatch: " + std::to_string(am) + "x" + std::to_string(an) +
                         " vs " + std::to_string(bm) + "x" + std::to_string(bn));
}

/// Elementwise add/sub of two equally-shaped operands, rounded at ctx.
inline Matrix addsub(Elementwise op, const MatrixView& a, const MatrixView& b,
                     PrecisionContext ctx, OpCounter* ops = nullptr) {
  check_same_shape(a.rows(), a.cols(), b.rows(), b.cols());
  Matrix r(a.rows(), a.cols(), ctx);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (op == Elementwise::add)
        mpfr_add(r.at(i, j).raw(), a.at(i, j).raw(), b.at(i, j).raw(), PrecisionContext::rounding);
      else
        mpfr_sub(r.at(i, j).raw(), a.at(i, j).raw(), b.at(i, j).raw(), PrecisionContext::rounding);
    }
  if (ops) ops->addsub += static_cast<std::uint64_t>(a.rows()) * a.cols();
  return r;
}

/// c_ij = sum_k a_ik * b_kj with strict left-to-right accumulation in k; every
/// product and every addition is rounded at ctx. The first term initializes
/// the accumulator, so a length-l inner product costs l muls and l-1 adds.
inline Matrix mul_views(const MatrixView& a, const MatrixView& b, PrecisionContext ctx,
                        OpCounter* ops = nullptr) {
  if (a.cols() != b.rows())
    throw DimensionError("inner dimension mismatch: " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  const std::size_t m = a.rows(), l = a.cols(), n = b.cols();
  Matrix c(m, n, ctx);
  Scalar t(ctx);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpfr_ptr acc = c.at(i, j).raw();
      mpfr_mul(acc, a.at(i, 0).raw(), b.at(0, j).raw(), PrecisionContext::rounding);
      for (std::size_t k = 1; k < l; ++k) {
        mpfr_mul(t.raw(), a.at(i, k).raw(), b.at(k, j).raw(), PrecisionContext::rounding);
        mpfr_add(acc, acc, t.raw(), PrecisionContext::rounding);
      }
    }
  if (ops) {
    ops->mul += static_cast<std::uint64_t>(m) * l * n;
    ops->addsub += static_cast<std::uint64_t>(m) * n * (l - 1);
  }
  return c;
}

}  // namespace detail

/// Elementwise sum; operands must agree in shape and precision.
inline Matrix add(const Matrix& a, const Matrix& b) {
  if (a.bits() != b.bits()) throw DomainError("mat add: mixed precisions");
  return detail::addsub(detail::Elementwise::add, MatrixView(a), MatrixView(b), a.ctx());
}

/// Elementwise difference; operands must agree in shape and precision.
inline Matrix sub(const Matrix& a, const Matrix& b) {
  if (a.bits() != b.bits()) throw DomainError("mat sub: mixed precisions");
  return detail::addsub(detail::Elementwise::sub, MatrixView(a), MatrixView(b), a.ctx());
}

/// Three-loop inner-product multiplication, left-to-right in k.
inline Matrix simple_mul(const Matrix& a, const Matrix& b, PrecisionContext ctx) {
  return detail::mul_views(MatrixView(a), MatrixView(b), ctx);
}

inline Matrix simple_mul(const Matrix& a, const Matrix& b, PrecisionContext ctx, OpCounter& ops) {
  return detail::mul_views(MatrixView(a), MatrixView(b), ctx, &ops);
}

namespace detail {

inline Matrix block_mul_impl(const Matrix& a, const Matrix& b, std::size_t n_min,
                             PrecisionContext ctx, OpCounter* ops) {
  if (a.cols() != b.rows())
    throw DimensionError("inner dimension mismatch: " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  const std::size_t m = a.rows(), l = a.cols(), n = b.cols();
  const BlockingScheme g = BlockingScheme::for_product(m, l, n, n_min);
  Matrix c(m, n, ctx);
  for (std::size_t bi = 0; bi < g.row_blocks; ++bi) {
    const std::size_t i0 = bi * n_min, h = std::min(n_min, m - i0);
    for (std::size_t bj = 0; bj < g.col_blocks; ++bj) {
      const std::size_t j0 = bj * n_min, w = std::min(n_min, n - j0);
      for (std::size_t bk = 0; bk < g.inner_blocks; ++bk) {
        const std::size_t k0 = bk * n_min, d = std::min(n_min, l - k0);
        Matrix p = mul_views(MatrixView(a, i0, k0, h, d), MatrixView(b, k0, j0, d, w), ctx, ops);
        if (bk == 0) {
          for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j)
              mpfr_set(c.at(i0 + i, j0 + j).raw(), p.at(i, j).raw(), PrecisionContext::rounding);
        } else {
          for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j)
              mpfr_add(c.at(i0 + i, j0 + j).raw(), c.at(i0 + i, j0 + j).raw(), p.at(i, j).raw(),
                       PrecisionContext::rounding);
          if (ops) ops->addsub += static_cast<std::uint64_t>(h) * w;
        }
      }
    }
  }
  return c;
}

}  // namespace detail

/// Tiled multiplication over a BlockingScheme grid: block products use
/// simple_mul, block accumulation over k is left-to-right. Same operation
/// count as simple_mul; with a single block the result is bit-identical to it.
inline Matrix block_mul(const Matrix& a, const Matrix& b, std::size_t n_min,
                        PrecisionContext ctx) {
  return detail::block_mul_impl(a, b, n_min, ctx, nullptr);
}

inline Matrix block_mul(const Matrix& a, const Matrix& b, std::size_t n_min, PrecisionContext ctx,
                        OpCounter& ops) {
  return detail::block_mul_impl(a, b, n_min, ctx, &ops);
}

/// Maximum column sum of absolute values, accumulated top-to-bottom and
/// rounded at the matrix's own precision.
inline Scalar one_norm(const Matrix& a) {
  PrecisionContext ctx = a.ctx();
  Scalar best(ctx);
  Scalar colsum(ctx);
  Scalar t(ctx);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    mpfr_abs(colsum.raw(), a.at(0, j).raw(), PrecisionContext::rounding);
    for (std::size_t i = 1; i < a.rows(); ++i) {
      mpfr_abs(t.raw(), a.at(i, j).raw(), PrecisionContext::rounding);
      mpfr_add(colsum.raw(), colsum.raw(), t.raw(), PrecisionContext::rounding);
    }
    if (j == 0 || colsum > best) best = colsum;
  }
  return best;
}

/// Largest and smallest elementwise relative error of `approx` against `ref`.
/// Elements whose reference is exactly zero are skipped and counted.
struct RelErrorStats {
  Scalar max;
  Scalar min;
  std::size_t skipped_zero_refs = 0;
};

inline RelErrorStats max_rel_error(const Matrix& approx, const Matrix& ref) {
  detail::check_same_shape(approx.rows(), approx.cols(), ref.rows(), ref.cols());
  PrecisionContext ctx = ref.ctx();
  RelErrorStats stats{Scalar(ctx), Scalar(ctx), 0};
  bool any = false;
  for (std::size_t i = 0; i < ref.rows(); ++i)
    for (std::size_t j = 0; j < ref.cols(); ++j) {
      if (ref.at(i, j).is_zero()) {
        ++stats.skipped_zero_refs;
        continue;
      }
      Scalar e = rel_error(approx.at(i, j), ref.at(i, j));
      if (!any || e > stats.max) stats.max = e;
      if (!any || e < stats.min) stats.min = e;
      any = true;
    }
  if (!any) throw UndefinedMetricError("max_rel_error: all reference entries are zero");
  return stats;
}

/// b_i = sum_j a_ij * x_j, left-to-right in j, rounded at ctx per operation.
inline Vector mat_vec_mul(const Matrix& a, const Vector& x, PrecisionContext ctx) {
  if (x.size() != a.cols()) throw DimensionError("mat_vec_mul: length mismatch");
  Vector b;
  b.reserve(a.rows());
  Scalar t(ctx);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Scalar acc(ctx);
    mpfr_mul(acc.raw(), a.at(i, 0).raw(), x[0].raw(), PrecisionContext::rounding);
    for (std::size_t j = 1; j < a.cols(); ++j) {
      mpfr_mul(t.raw(), a.at(i, j).raw(), x[j].raw(), PrecisionContext::rounding);
      mpfr_add(acc.raw(), acc.raw(), t.raw(), PrecisionContext::rounding);
    }
    b.push_back(std::move(acc));
  }
  return b;
}

/// True iff shapes, precisions and element values all agree. Zeros compare
/// equal regardless of sign (a zero carries no sign in this value model).
inline bool equal_values(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.bits() != b.bits()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!(a.at(i, j) == b.at(i, j))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Text format: header "mpmat <m> <n> <bits>", then m lines of n hex-float
// literals separated by single spaces. Round trips bit-exactly.
// ---------------------------------------------------------------------------

inline void write_matrix(std::ostream& out, const Matrix& a) {
  out << "mpmat " << a.rows() << ' ' << a.cols() << ' ' << a.bits() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << to_hex(a.at(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write_matrix: stream failure");
}

inline Matrix read_matrix(std::istream& in) {
  std::string magic;
  std::size_t m = 0, n = 0;
  long bits = 0;
  if (!(in >> magic >> m >> n >> bits) || magic != "mpmat")
    throw IoError("read_matrix: bad header, expected 'mpmat <m> <n> <bits>'");
  if (m == 0 || n == 0) throw DimensionError("read_matrix: zero dimension in header");
  PrecisionContext ctx(bits);
  Matrix r(m, n, ctx);
  std::string tok;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!(in >> tok))
        throw IoError("read_matrix: unexpected end of input at element (" +
                      std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      r.at(i, j) = from_hex(tok, ctx);
    }
  return r;
}

}  // namespace mpmm
