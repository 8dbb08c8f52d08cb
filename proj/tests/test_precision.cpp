#include <catch2/catch_amalgamated.hpp>

#include "mpmm/precision.hpp"

using namespace mpmm;

TEST_CASE("context accepts the documented bit range") {
  CHECK(PrecisionContext(2).bits() == 2);
  CHECK(PrecisionContext(128).bits() == 128);
  CHECK(PrecisionContext(1L << 20).bits() == 1L << 20);
  CHECK_THROWS_AS(PrecisionContext(1), DomainError);
  CHECK_THROWS_AS(PrecisionContext(0), DomainError);
  CHECK_THROWS_AS(PrecisionContext(-8), DomainError);
  CHECK_THROWS_AS(PrecisionContext((1L << 20) + 1), DomainError);
}

TEST_CASE("scalars carry the context precision") {
  PrecisionContext ctx(128);
  Scalar a(ctx);
  CHECK(a.bits() == 128);
  CHECK(a.is_zero());
  Scalar b(7L, ctx);
  CHECK(b.bits() == 128);
  Scalar c = b;
  CHECK(c.bits() == 128);
  CHECK(c == b);
  Scalar d = std::move(c);
  CHECK(d == b);
}

TEST_CASE("small integer arithmetic is exact") {
  PrecisionContext ctx(128);
  CHECK(add(Scalar(1L, ctx), Scalar(2L, ctx), ctx) == Scalar(3L, ctx));
  CHECK(sub(Scalar(10L, ctx), Scalar(4L, ctx), ctx) == Scalar(6L, ctx));
  CHECK(mul(Scalar(6L, ctx), Scalar(7L, ctx), ctx) == Scalar(42L, ctx));
  CHECK(div(Scalar(42L, ctx), Scalar(6L, ctx), ctx) == Scalar(7L, ctx));
}

TEST_CASE("multiplying by zero annihilates") {
  PrecisionContext ctx(64);
  for (long v : {1L, -3L, 1000000L}) {
    CHECK(mul(Scalar(v, ctx), Scalar(ctx), ctx).is_zero());
  }
}

TEST_CASE("a tail below the mantissa rounds away") {
  PrecisionContext lo(128), hi(512);
  Scalar tiny = from_hex("0x1p-200", hi);
  Scalar s = add(Scalar(1L, hi), tiny, lo);
  CHECK(s == Scalar(1L, lo));
  Scalar s_hi = add(Scalar(1L, hi), tiny, hi);
  CHECK(s_hi > Scalar(1L, hi));
}

TEST_CASE("division by zero is a singular operation") {
  PrecisionContext ctx(64);
  try {
    div(Scalar(1L, ctx), Scalar(ctx), ctx);
    FAIL("no exception");
  } catch (const SingularError& e) {
    CHECK(e.pivot_index == 0);
  }
}

TEST_CASE("square root basics") {
  PrecisionContext ctx(128);
  CHECK(sqrt(Scalar(4L, ctx), ctx) == Scalar(2L, ctx));
  CHECK(sqrt(Scalar(ctx), ctx).is_zero());
  CHECK_THROWS_AS(sqrt(Scalar(-1L, ctx), ctx), DomainError);
}

TEST_CASE("sqrt(5) squares back to 5 within two ulps") {
  PrecisionContext lo(128), hi(512);
  Scalar v = sqrt(Scalar(5L, lo), lo);
  Scalar v2 = mul(v, v, hi);
  Scalar diff = sub(v2, Scalar(5L, hi), hi);
  mpfr_abs(diff.raw(), diff.raw(), MPFR_RNDN);
  Scalar bound = ulp(Scalar(5L, lo), lo);
  mpfr_mul_ui(bound.raw(), bound.raw(), 2, MPFR_RNDN);
  CHECK(diff <= bound);
}

TEST_CASE("relative error at the reference precision") {
  PrecisionContext ctx(128);
  Scalar approx = add(Scalar(1L, ctx), from_hex("0x1p-20", ctx), ctx);
  Scalar e = rel_error(approx, Scalar(1L, ctx));
  CHECK(e == from_hex("0x1p-20", ctx));
  CHECK(e.bits() == 128);
  CHECK(rel_error(Scalar(5L, ctx), Scalar(5L, ctx)).is_zero());
  CHECK_THROWS_AS(rel_error(Scalar(1L, ctx), Scalar(ctx)), DomainError);
}

TEST_CASE("ulp spacing") {
  PrecisionContext ctx(128);
  Scalar u = ulp(Scalar(1L, ctx), ctx);
  CHECK(u == from_hex("0x1p-127", ctx));
  CHECK(ulp(Scalar(5L, ctx), ctx) == from_hex("0x1p-125", ctx));
}

TEST_CASE("hex formatting is canonical") {
  PrecisionContext ctx(128);
  CHECK(to_hex(Scalar(ctx)) == "0x0p+0");
  CHECK(to_hex(Scalar(1L, ctx)) == "0x1p+0");
  CHECK(to_hex(Scalar(-2L, ctx)) == "-0x1p+1");
  CHECK(to_hex(Scalar(0.5, ctx)) == "0x1p-1");
  CHECK(to_hex(Scalar(6.25, ctx)) == "0x1.9p+2");
  CHECK(to_hex(Scalar(-0.75, ctx)) == "-0x1.8p-1");
}

TEST_CASE("hex round trip is bit exact") {
  PrecisionContext ctx(128);
  std::vector<Scalar> vals;
  vals.push_back(Scalar(ctx));
  vals.push_back(Scalar(1L, ctx));
  vals.push_back(Scalar(-123456789L, ctx));
  vals.push_back(sqrt(Scalar(5L, ctx), ctx));
  vals.push_back(sqrt(Scalar(3L, ctx), ctx));
  vals.push_back(div(Scalar(1L, ctx), Scalar(3L, ctx), ctx));
  vals.push_back(from_hex("-0x1.fffffffffffffffep+1000", ctx));
  for (const Scalar& v : vals) {
    const std::string s = to_hex(v);
    Scalar back = from_hex(s, ctx);
    CHECK(back == v);
    CHECK(to_hex(back) == s);
  }
}

TEST_CASE("hex round trip at precision 2") {
  PrecisionContext tiny(2);
  Scalar v(3L, tiny);
  CHECK(from_hex(to_hex(v), tiny) == v);
}

TEST_CASE("hex parsing rejects malformed text") {
  PrecisionContext ctx(64);
  CHECK_THROWS_AS(from_hex("", ctx), ParseError);
  CHECK_THROWS_AS(from_hex("xyz", ctx), ParseError);
  CHECK_THROWS_AS(from_hex("0x", ctx), ParseError);
  CHECK_THROWS_AS(from_hex("0x1.gp+2", ctx), ParseError);
  CHECK_THROWS_AS(from_hex("0x1p", ctx), ParseError);
  CHECK_THROWS_AS(from_hex("0x1p+0z", ctx), ParseError);
  CHECK_THROWS_AS(from_hex("1.5", ctx), ParseError);
  try {
    from_hex("0x1p+0z", ctx);
  } catch (const ParseError& e) {
    CHECK(e.position == 6);
  }
}

TEST_CASE("decimal formatting with significant digits") {
  PrecisionContext ctx(128);
  CHECK(to_decimal(Scalar(3L, ctx), 3) == "3.00e+00");
  CHECK(to_decimal(Scalar(0.5, ctx), 3) == "5.00e-01");
  CHECK_THROWS_AS(to_decimal(Scalar(1L, ctx), 0), DomainError);
}
