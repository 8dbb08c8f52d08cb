#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mpmm/matrix.hpp"
#include "mpmm/opcounter.hpp"

namespace mpmm {

enum class Algorithm { simple, block, strassen, winograd };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::simple: return "simple";
    case Algorithm::block: return "block";
    case Algorithm::strassen: return "strassen";
    default: return "winograd";
  }
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "simple") return Algorithm::simple;
  if (s == "block") return Algorithm::block;
  if (s == "strassen") return Algorithm::strassen;
  if (s == "winograd") return Algorithm::winograd;
  throw DomainError("unknown algorithm '" + s + "'");
}

/// Recursion settings for the fast algorithms. Blocks whose minimal dimension
/// is at or below n_min are multiplied directly with simple_mul.
struct FastMMConfig {
  Algorithm algorithm = Algorithm::strassen;
  std::size_t n_min = 32;
};

struct FastMMResult {
  Matrix c;
  OpCounter ops;
};

/// Intermediates of the outermost recursion level, for test introspection.
/// Strassen fills products with P1..P7; the Winograd variant fills sums with
/// S1..S8, products with M1..M7 and t with T1, T2.
struct TopTrace {
  std::vector<Matrix> sums;
  std::vector<Matrix> products;
  std::vector<Matrix> t;
};

struct Dims3 {
  std::size_t m, l, n;
  friend bool operator==(const Dims3&, const Dims3&) = default;
};

/// One level of the recursion: dims seen on entry, dims after padding, and
/// whether the level is a direct-multiply base case. All seven children of a
/// split share the same dims, so a linear plan describes the whole tree.
struct RecursionLevel {
  std::size_t level;
  Dims3 before;
  Dims3 padded;
  bool base;
};

inline std::vector<RecursionLevel> recursion_plan(std::size_t m, std::size_t l, std::size_t n,
                                                  const FastMMConfig& cfg) {
  if (cfg.n_min == 0) throw DimensionError("n_min must be at least 1");
  std::vector<RecursionLevel> plan;
  std::size_t level = 0;
  for (;;) {
    if (std::min({m, l, n}) <= cfg.n_min) {
      plan.push_back(RecursionLevel{level, {m, l, n}, {m, l, n}, true});
      return plan;
    }
    const std::size_t pm = m + m % 2, pl = l + l % 2, pn = n + n % 2;
    plan.push_back(RecursionLevel{level, {m, l, n}, {pm, pl, pn}, false});
    m = pm / 2;
    l = pl / 2;
    n = pn / 2;
    ++level;
  }
}

namespace detail {

/// Zero matrix of shape pm x pn at the view's own precision with the view
/// copied bit-exactly into the top-left corner.
inline Matrix pad_operand(const MatrixView& a, std::size_t pm, std::size_t pn) {
  Matrix r(pm, pn, PrecisionContext(a.bits()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      mpfr_set(r.at(i, j).raw(), a.at(i, j).raw(), PrecisionContext::rounding);
  return r;
}

inline Matrix fast_mul_rec(const MatrixView& a, const MatrixView& b, const FastMMConfig& cfg,
                           PrecisionContext ctx, OpCounter& ops, TopTrace* trace) {
  const std::size_t m = a.rows(), l = a.cols(), n = b.cols();
  if (std::min({m, l, n}) <= cfg.n_min) return mul_views(a, b, ctx, &ops);

  const std::size_t pm = m + m % 2, pl = l + l % 2, pn = n + n % 2;
  std::optional<Matrix> ap, bp;
  if (pm != m || pl != l) ap.emplace(pad_operand(a, pm, pl));
  if (pl != l || pn != n) bp.emplace(pad_operand(b, pl, pn));
  const MatrixView av = ap ? MatrixView(*ap) : a;
  const MatrixView bv = bp ? MatrixView(*bp) : b;

  const std::size_t hm = pm / 2, hl = pl / 2, hn = pn / 2;
  const MatrixView a11 = av.sub(0, 0, hm, hl), a12 = av.sub(0, hl, hm, hl),
                   a21 = av.sub(hm, 0, hm, hl), a22 = av.sub(hm, hl, hm, hl);
  const MatrixView b11 = bv.sub(0, 0, hl, hn), b12 = bv.sub(0, hn, hl, hn),
                   b21 = bv.sub(hl, 0, hl, hn), b22 = bv.sub(hl, hn, hl, hn);

  auto rec = [&](const MatrixView& x, const MatrixView& y) {
    return fast_mul_rec(x, y, cfg, ctx, ops, nullptr);
  };
  auto mk = [&](Elementwise op, const MatrixView& x, const MatrixView& y) {
    return addsub(op, x, y, ctx, &ops);
  };
  constexpr auto Add = Elementwise::add;
  constexpr auto Sub = Elementwise::sub;

  Matrix c(pm, pn, ctx);
  auto place = [&](const Matrix& src, std::size_t i0, std::size_t j0) {
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j)
        mpfr_set(c.at(i0 + i, j0 + j).raw(), src.at(i, j).raw(), PrecisionContext::rounding);
  };

  if (cfg.algorithm == Algorithm::strassen) {
    Matrix sa = mk(Add, a11, a22);
    Matrix sb = mk(Add, b11, b22);
    Matrix p1 = rec(MatrixView(sa), MatrixView(sb));
    sa = mk(Add, a21, a22);
    Matrix p2 = rec(MatrixView(sa), b11);
    sb = mk(Sub, b12, b22);
    Matrix p3 = rec(a11, MatrixView(sb));
    sb = mk(Sub, b21, b11);
    Matrix p4 = rec(a22, MatrixView(sb));
    sa = mk(Add, a11, a12);
    Matrix p5 = rec(MatrixView(sa), b22);
    sa = mk(Sub, a21, a11);
    sb = mk(Add, b11, b12);
    Matrix p6 = rec(MatrixView(sa), MatrixView(sb));
    sa = mk(Sub, a12, a22);
    sb = mk(Add, b21, b22);
    Matrix p7 = rec(MatrixView(sa), MatrixView(sb));

    Matrix u = mk(Add, MatrixView(p1), MatrixView(p4));
    u = mk(Sub, MatrixView(u), MatrixView(p5));
    u = mk(Add, MatrixView(u), MatrixView(p7));
    place(u, 0, 0);
    place(mk(Add, MatrixView(p3), MatrixView(p5)), 0, hn);
    place(mk(Add, MatrixView(p2), MatrixView(p4)), hm, 0);
    Matrix v = mk(Add, MatrixView(p1), MatrixView(p3));
    v = mk(Sub, MatrixView(v), MatrixView(p2));
    v = mk(Add, MatrixView(v), MatrixView(p6));
    place(v, hm, hn);

    if (trace) {
      trace->products.push_back(std::move(p1));
      trace->products.push_back(std::move(p2));
      trace->products.push_back(std::move(p3));
      trace->products.push_back(std::move(p4));
      trace->products.push_back(std::move(p5));
      trace->products.push_back(std::move(p6));
      trace->products.push_back(std::move(p7));
    }
  } else {
    Matrix s1 = mk(Add, a21, a22);
    Matrix s2 = mk(Sub, MatrixView(s1), a11);
    Matrix s3 = mk(Sub, a11, a21);
    Matrix s4 = mk(Sub, a12, MatrixView(s2));
    Matrix s5 = mk(Sub, b12, b11);
    Matrix s6 = mk(Sub, b22, MatrixView(s5));
    Matrix s7 = mk(Sub, b22, b12);
    Matrix s8 = mk(Sub, MatrixView(s6), b21);

    Matrix m1 = rec(MatrixView(s2), MatrixView(s6));
    Matrix m2 = rec(a11, b11);
    Matrix m3 = rec(a12, b21);
    Matrix m4 = rec(MatrixView(s3), MatrixView(s7));
    Matrix m5 = rec(MatrixView(s1), MatrixView(s5));
    Matrix m6 = rec(MatrixView(s4), b22);
    Matrix m7 = rec(a22, MatrixView(s8));

    Matrix t1 = mk(Add, MatrixView(m1), MatrixView(m2));
    Matrix t2 = mk(Add, MatrixView(t1), MatrixView(m4));

    place(mk(Add, MatrixView(m2), MatrixView(m3)), 0, 0);
    Matrix u = mk(Add, MatrixView(t1), MatrixView(m5));
    u = mk(Add, MatrixView(u), MatrixView(m6));
    place(u, 0, hn);
    place(mk(Sub, MatrixView(t2), MatrixView(m7)), hm, 0);
    place(mk(Add, MatrixView(t2), MatrixView(m5)), hm, hn);

    if (trace) {
      trace->sums.push_back(std::move(s1));
      trace->sums.push_back(std::move(s2));
      trace->sums.push_back(std::move(s3));
      trace->sums.push_back(std::move(s4));
      trace->sums.push_back(std::move(s5));
      trace->sums.push_back(std::move(s6));
      trace->sums.push_back(std::move(s7));
      trace->sums.push_back(std::move(s8));
      trace->products.push_back(std::move(m1));
      trace->products.push_back(std::move(m2));
      trace->products.push_back(std::move(m3));
      trace->products.push_back(std::move(m4));
      trace->products.push_back(std::move(m5));
      trace->products.push_back(std::move(m6));
      trace->products.push_back(std::move(m7));
      trace->t.push_back(std::move(t1));
      trace->t.push_back(std::move(t2));
    }
  }

  if (pm != m || pn != n) {
    Matrix out(m, n, ctx);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        mpfr_set(out.at(i, j).raw(), c.at(i, j).raw(), PrecisionContext::rounding);
    return out;
  }
  return c;
}

}  // namespace detail

/// One zero row and/or column appended when the corresponding dimension is
/// odd; even dimensions are left as-is. Always returns a fresh copy.
inline Matrix pad_even(const Matrix& a) {
  return detail::pad_operand(MatrixView(a), a.rows() + a.rows() % 2, a.cols() + a.cols() % 2);
}

/// Recursive fast multiplication. Splits into quadrants while every dimension
/// exceeds cfg.n_min, padding odd dimensions with zeros at each level and
/// stripping them on return; base blocks go through simple_mul. The counter
/// tallies every scalar multiplication and addition/subtraction performed,
/// including those on padded zeros.
inline FastMMResult fast_mul(const Matrix& a, const Matrix& b, const FastMMConfig& cfg,
                             PrecisionContext ctx, TopTrace* trace = nullptr) {
  if (a.cols() != b.rows())
    throw DimensionError("inner dimension mismatch: " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  if (cfg.n_min == 0) throw DimensionError("n_min must be at least 1");
  if (cfg.algorithm != Algorithm::strassen && cfg.algorithm != Algorithm::winograd)
    throw DomainError("fast_mul: algorithm must be strassen or winograd");
  OpCounter ops;
  Matrix c = detail::fast_mul_rec(MatrixView(a), MatrixView(b), cfg, ctx, ops, trace);
  return FastMMResult{std::move(c), ops};
}

}  // namespace mpmm
