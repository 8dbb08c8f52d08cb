#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "mpmm/matgen.hpp"
#include "mpmm/matrix.hpp"

using namespace mpmm;

namespace {

Matrix ints(std::initializer_list<std::initializer_list<long>> rows, PrecisionContext ctx) {
  const std::size_t m = rows.size(), n = rows.begin()->size();
  Matrix a(m, n, ctx);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) mpfr_set_si(a.at(i, j++).raw(), v, MPFR_RNDN);
    ++i;
  }
  return a;
}

/// Integer entries in [-limit, limit], drawn from the pinned stream.
Matrix random_ints(std::size_t m, std::size_t n, Prng64& rng, long limit, PrecisionContext ctx) {
  Matrix a(m, n, ctx);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const long v = static_cast<long>(rng.next64() % (2 * limit + 1)) - limit;
      mpfr_set_si(a.at(i, j).raw(), v, MPFR_RNDN);
    }
  return a;
}

}  // namespace

TEST_CASE("matrix construction and shape errors") {
  PrecisionContext ctx(64);
  Matrix a(2, 3, ctx);
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a.bits() == 64);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(a.at(i, j).is_zero());
  CHECK_THROWS_AS(Matrix(0, 3, ctx), DimensionError);
  CHECK_THROWS_AS(Matrix(3, 0, ctx), DimensionError);
}

TEST_CASE("views window their parent") {
  PrecisionContext ctx(64);
  Matrix a = ints({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, ctx);
  MatrixView v(a, 1, 1, 2, 2);
  CHECK(v.rows() == 2);
  CHECK(v.at(0, 0) == Scalar(5L, ctx));
  CHECK(v.at(1, 1) == Scalar(9L, ctx));
  MatrixView w = v.sub(1, 0, 1, 2);
  CHECK(w.at(0, 0) == Scalar(8L, ctx));
  Matrix copy = w.to_matrix();
  CHECK(copy.rows() == 1);
  CHECK(copy.at(0, 1) == Scalar(9L, ctx));
  CHECK_THROWS_AS(MatrixView(a, 2, 2, 2, 2), DimensionError);
  CHECK_THROWS_AS(MatrixView(a, 0, 0, 0, 1), DimensionError);
}

TEST_CASE("blocking scheme counts ragged blocks") {
  const BlockingScheme g = BlockingScheme::for_product(100, 64, 33, 32);
  CHECK(g.row_blocks == 4);
  CHECK(g.inner_blocks == 2);
  CHECK(g.col_blocks == 2);
  CHECK_THROWS_AS(BlockingScheme::for_product(4, 4, 4, 0), DimensionError);
}

TEST_CASE("mat_from_fn passes 1-based indices") {
  PrecisionContext ctx(64);
  Matrix a = mat_from_fn(2, 3, ctx, [&](std::size_t i, std::size_t j) {
    return Scalar(static_cast<long>(10 * i + j), ctx);
  });
  CHECK(a.at(0, 0) == Scalar(11L, ctx));
  CHECK(a.at(1, 2) == Scalar(23L, ctx));
}

TEST_CASE("elementwise add and sub") {
  PrecisionContext ctx(64);
  Matrix a = ints({{1, 2}, {3, 4}}, ctx);
  Matrix b = ints({{10, 20}, {30, 40}}, ctx);
  CHECK(equal_values(add(a, b), ints({{11, 22}, {33, 44}}, ctx)));
  CHECK(equal_values(sub(b, a), ints({{9, 18}, {27, 36}}, ctx)));
  Matrix c(2, 3, ctx);
  CHECK_THROWS_AS(add(a, c), DimensionError);
  Matrix d(2, 2, PrecisionContext(128));
  CHECK_THROWS_AS(add(a, d), DomainError);
}

TEST_CASE("simple multiplication worked example with counts") {
  PrecisionContext ctx(64);
  Matrix a = ints({{1, 2}, {3, 4}}, ctx);
  Matrix b = ints({{5, 6}, {7, 8}}, ctx);
  OpCounter ops;
  Matrix c = simple_mul(a, b, ctx, ops);
  CHECK(equal_values(c, ints({{19, 22}, {43, 50}}, ctx)));
  CHECK(ops.mul == 8);
  CHECK(ops.addsub == 4);
  CHECK_THROWS_AS(simple_mul(a, Matrix(3, 2, ctx), ctx), DimensionError);
}

TEST_CASE("block equals simple bit-exactly on integer matrices") {
  PrecisionContext ctx(256);
  Prng64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng.next64() % 80;
    const std::size_t l = 1 + rng.next64() % 80;
    const std::size_t n = 1 + rng.next64() % 80;
    const std::size_t n_min = 1 + rng.next64() % 80;
    Matrix a = random_ints(m, l, rng, 1 << 20, ctx);
    Matrix b = random_ints(l, n, rng, 1 << 20, ctx);
    OpCounter so, bo;
    Matrix cs = simple_mul(a, b, ctx, so);
    Matrix cb = block_mul(a, b, n_min, ctx, bo);
    REQUIRE(equal_values(cs, cb));
    REQUIRE(so == bo);
    REQUIRE(so.mul == static_cast<std::uint64_t>(m) * l * n);
    REQUIRE(so.addsub == static_cast<std::uint64_t>(m) * n * (l - 1));
  }
}

TEST_CASE("block with one tile is the simple algorithm") {
  PrecisionContext ctx(128);
  const BenchPair p = gen_bench_pair(13, 9, 11, ctx);
  Matrix cs = simple_mul(p.a, p.b, ctx);
  Matrix cb = block_mul(p.a, p.b, 13, ctx);
  CHECK(equal_values(cs, cb));
}

TEST_CASE("one_norm takes the largest column sum") {
  PrecisionContext ctx(256);
  Matrix id = mat_from_fn(4, 4, ctx, [&](std::size_t i, std::size_t j) {
    return Scalar(i == j ? 1L : 0L, ctx);
  });
  CHECK(one_norm(id) == Scalar(1L, ctx));
  CHECK(one_norm(Matrix(3, 3, ctx)).is_zero());

  Matrix lot = gen_lotkin(3, ctx);
  Scalar expect = div(Scalar(11L, ctx), Scalar(6L, ctx), ctx);
  Scalar e = rel_error(one_norm(lot), expect);
  CHECK(e <= from_hex("0x1p-250", ctx));
}

TEST_CASE("relative-error extremes and zero-reference handling") {
  PrecisionContext ctx(128);
  Matrix a = ints({{1, 2}, {3, 4}}, ctx);
  const RelErrorStats same = max_rel_error(a, a);
  CHECK(same.max.is_zero());
  CHECK(same.min.is_zero());
  CHECK(same.skipped_zero_refs == 0);

  Matrix perturbed = a;
  mpfr_add(perturbed.at(0, 0).raw(), perturbed.at(0, 0).raw(), from_hex("0x1p-20", ctx).raw(),
           MPFR_RNDN);
  const RelErrorStats st = max_rel_error(perturbed, a);
  CHECK(st.max == from_hex("0x1p-20", ctx));
  CHECK(st.min.is_zero());

  Matrix ref = ints({{1, 0}, {3, 4}}, ctx);
  const RelErrorStats sk = max_rel_error(a, ref);
  CHECK(sk.skipped_zero_refs == 1);

  CHECK_THROWS_AS(max_rel_error(a, Matrix(2, 2, ctx)), UndefinedMetricError);
  CHECK_THROWS_AS(max_rel_error(a, Matrix(2, 3, ctx)), DimensionError);
}

TEST_CASE("one_norm is submultiplicative up to rounding") {
  PrecisionContext ctx(128), hi(256);
  Matrix a = gen_random(10, 10, 7, ctx);
  Matrix b = gen_random(10, 10, 8, ctx);
  Matrix ab = simple_mul(a, b, hi);
  Scalar lhs = one_norm(ab);
  Scalar rhs = mul(one_norm(a), one_norm(b), hi);
  Scalar slack = mul(rhs, from_hex("0x1p-100", hi), hi);
  CHECK(lhs <= add(rhs, slack, hi));
}

TEST_CASE("matrix-vector product") {
  PrecisionContext ctx(64);
  Matrix a = ints({{1, 1}, {1, 2}}, ctx);
  Vector x;
  x.emplace_back(0L, ctx);
  x.emplace_back(1L, ctx);
  Vector b = mat_vec_mul(a, x, ctx);
  CHECK(b[0] == Scalar(1L, ctx));
  CHECK(b[1] == Scalar(2L, ctx));
  Vector bad;
  bad.emplace_back(1L, ctx);
  CHECK_THROWS_AS(mat_vec_mul(a, bad, ctx), DimensionError);
}

TEST_CASE("text format round trips bit-exactly") {
  PrecisionContext ctx(192);
  Matrix a = gen_random(5, 3, 99, ctx);
  mpfr_set_zero(a.at(2, 1).raw(), 1);
  std::ostringstream os;
  write_matrix(os, a);
  const std::string text = os.str();
  CHECK(text.rfind("mpmat 5 3 192\n", 0) == 0);
  std::istringstream is(text);
  Matrix back = read_matrix(is);
  CHECK(equal_values(a, back));
  std::ostringstream os2;
  write_matrix(os2, back);
  CHECK(os2.str() == text);
}

TEST_CASE("text format rejects bad input") {
  {
    std::istringstream is("mpcat 2 2 64\n0x0p+0 0x0p+0\n0x0p+0 0x0p+0\n");
    CHECK_THROWS_AS(read_matrix(is), IoError);
  }
  {
    std::istringstream is("mpmat 2 2 64\n0x1p+0\n");
    CHECK_THROWS_AS(read_matrix(is), IoError);
  }
  {
    std::istringstream is("mpmat 2 2 64\n0x1p+0 zzz 0x1p+0 0x1p+0\n");
    CHECK_THROWS_AS(read_matrix(is), ParseError);
  }
  {
    std::istringstream is("mpmat 0 2 64\n");
    CHECK_THROWS_AS(read_matrix(is), DimensionError);
  }
  {
    std::istringstream is("mpmat 2 2 1\n0x1p+0 0x1p+0 0x1p+0 0x1p+0\n");
    CHECK_THROWS_AS(read_matrix(is), DomainError);
  }
}
