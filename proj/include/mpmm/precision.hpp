#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "mpmm/errors.hpp"

namespace mpmm {

/// Mantissa length (in bits) governing every scalar operation performed under it.
/// Rounding is fixed to round-to-nearest, ties-to-even; there are no other modes.
class PrecisionContext {
 public:
  static constexpr long min_bits = 2;
  static constexpr long max_bits = 1L << 20;
  static constexpr mpfr_rnd_t rounding = MPFR_RNDN;

  explicit PrecisionContext(long bits) : bits_(bits) {
    if (bits < min_bits || bits > max_bits)
      throw DomainError("precision out of range [2, 2^20]: " + std::to_string(bits));
  }

  long bits() const { return static_cast<long>(bits_); }
  mpfr_prec_t prec() const { return bits_; }

  friend bool operator==(PrecisionContext a, PrecisionContext b) { return a.bits_ == b.bits_; }

 private:
  mpfr_prec_t bits_;
};

/// Arbitrary-precision floating-point value: sign, binary exponent, and a
/// normalized mantissa of exactly `bits()` bits. Immutable through the public
/// arithmetic API; every operation produces a fresh, correctly rounded value
/// at an explicitly named destination context.
class Scalar {
 public:
  explicit Scalar(PrecisionContext ctx) : owned_(true) {
    mpfr_init2(v_, ctx.prec());
    mpfr_set_zero(v_, +1);
  }

  Scalar(long value, PrecisionContext ctx) : owned_(true) {
    mpfr_init2(v_, ctx.prec());
    mpfr_set_si(v_, value, PrecisionContext::rounding);
  }

  Scalar(double value, PrecisionContext ctx) : owned_(true) {
    mpfr_init2(v_, ctx.prec());
    mpfr_set_d(v_, value, PrecisionContext::rounding);
  }

  Scalar(const Scalar& other) : owned_(true) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);  // same precision: exact
  }

  Scalar(Scalar&& other) noexcept : owned_(other.owned_) {
    v_[0] = other.v_[0];
    other.owned_ = false;
  }

  Scalar& operator=(const Scalar& other) {
    if (this != &other) {
      Scalar tmp(other);
      swap(tmp);
    }
    return *this;
  }

  Scalar& operator=(Scalar&& other) noexcept {
    if (this != &other) {
      if (owned_) mpfr_clear(v_);
      v_[0] = other.v_[0];
      owned_ = other.owned_;
      other.owned_ = false;
    }
    return *this;
  }

  ~Scalar() {
    if (owned_) mpfr_clear(v_);
  }

  void swap(Scalar& other) noexcept {
    std::swap(v_[0], other.v_[0]);
    std::swap(owned_, other.owned_);
  }

  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
  PrecisionContext ctx() const { return PrecisionContext(bits()); }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_negative() const { return mpfr_sgn(v_) < 0; }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
  bool owned_;
};

inline bool operator==(const Scalar& a, const Scalar& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
inline bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
inline bool operator<(const Scalar& a, const Scalar& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
inline bool operator<=(const Scalar& a, const Scalar& b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
inline bool operator>(const Scalar& a, const Scalar& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
inline bool operator>=(const Scalar& a, const Scalar& b) { return mpfr_greaterequal_p(a.raw(), b.raw()) != 0; }

namespace detail {

inline void require_finite(const Scalar& x, const char* op) {
  if (!x.is_finite()) throw DomainError(std::string(op) + ": non-finite operand");
}

}  // namespace detail

/// a + b, correctly rounded at ctx.
inline Scalar add(const Scalar& a, const Scalar& b, PrecisionContext ctx) {
  detail::require_finite(a, "add");
  detail::require_finite(b, "add");
  Scalar r(ctx);
  mpfr_add(r.raw(), a.raw(), b.raw(), PrecisionContext::rounding);
  return r;
}

/// a - b, correctly rounded at ctx.
inline Scalar sub(const Scalar& a, const Scalar& b, PrecisionContext ctx) {
  detail::require_finite(a, "sub");
  detail::require_finite(b, "sub");
  Scalar r(ctx);
  mpfr_sub(r.raw(), a.raw(), b.raw(), PrecisionContext::rounding);
  return r;
}

/// a * b, correctly rounded at ctx.
inline Scalar mul(const Scalar& a, const Scalar& b, PrecisionContext ctx) {
  detail::require_finite(a, "mul");
  detail::require_finite(b, "mul");
  Scalar r(ctx);
  mpfr_mul(r.raw(), a.raw(), b.raw(), PrecisionContext::rounding);
  return r;
}

/// a / b, correctly rounded at ctx. Throws SingularError for b == 0.
inline Scalar div(const Scalar& a, const Scalar& b, PrecisionContext ctx) {
  detail::require_finite(a, "div");
  detail::require_finite(b, "div");
  if (b.is_zero()) throw SingularError("singular scalar operation: division by zero");
  Scalar r(ctx);
  mpfr_div(r.raw(), a.raw(), b.raw(), PrecisionContext::rounding);
  return r;
}

/// Correctly rounded square root at ctx. Throws DomainError for negative input.
inline Scalar sqrt(const Scalar& a, PrecisionContext ctx) {
  detail::require_finite(a, "sqrt");
  if (a.is_negative()) throw DomainError("sqrt: negative operand");
  Scalar r(ctx);
  mpfr_sqrt(r.raw(), a.raw(), PrecisionContext::rounding);
  return r;
}

/// Exact negation at the operand's own precision.
inline Scalar neg(const Scalar& a) {
  Scalar r(a);
  mpfr_neg(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

/// Exact absolute value at the operand's own precision.
inline Scalar abs(const Scalar& a) {
  Scalar r(a);
  mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

/// |approx - reference| / |reference|, computed at the reference's precision.
/// The reference must be nonzero; use absolute error otherwise.
inline Scalar rel_error(const Scalar& approx, const Scalar& reference) {
  if (reference.is_zero())
    throw DomainError("rel_error: zero reference, use absolute error instead");
  PrecisionContext ctx = reference.ctx();
  Scalar d = sub(approx, reference, ctx);
  return div(abs(d), abs(reference), ctx);
}

/// One ulp of x at `bits` mantissa bits: 2^(e - bits) with x in [2^(e-1), 2^e).
inline Scalar ulp(const Scalar& x, PrecisionContext ctx) {
  if (x.is_zero()) throw DomainError("ulp: zero has no ulp");
  Scalar r(1L, ctx);
  mpfr_mul_2si(r.raw(), r.raw(), mpfr_get_exp(x.raw()) - ctx.bits(), MPFR_RNDN);
  return r;
}

// ---------------------------------------------------------------------------
// Text codec. Canonical form: [-]0x1.<hex fraction>p<signed decimal exponent>
// (zero prints as 0x0p+0). The leading digit is always 1, so the round trip is
// bit-exact at equal precision.
// ---------------------------------------------------------------------------

inline std::string to_hex(const Scalar& x) {
  detail::require_finite(x, "to_hex");
  bool negative = x.is_negative();
  if (x.is_zero()) return negative ? "-0x0p+0" : "0x0p+0";

  // x = z * 2^k with z an integer carrying the full mantissa.
  mpz_t z;
  mpz_init(z);
  mp_exp_t k = mpfr_get_z_2exp(z, x.raw());
  mpz_abs(z, z);
  // Shift so the bit length is 1 mod 4: the leading hex digit becomes 1 and
  // the remaining digits are whole nibbles of the fraction.
  std::size_t bl = mpz_sizeinbase(z, 2);
  unsigned shift = static_cast<unsigned>((4 - (bl - 1) % 4) % 4);
  mpz_mul_2exp(z, z, shift);
  long pexp = static_cast<long>(mpz_sizeinbase(z, 2)) - 1 + static_cast<long>(k) -
              static_cast<long>(shift);

  char* digits = mpz_get_str(nullptr, 16, z);
  std::string_view dv(digits);
  std::string out;
  out.reserve(dv.size() + 12);
  if (negative) out += '-';
  out += "0x";
  out += dv[0];  // always '1'
  std::size_t frac_end = dv.find_last_not_of('0');
  if (frac_end > 0) {
    out += '.';
    out.append(dv.substr(1, frac_end));
  }
  out += 'p';
  out += (pexp < 0 ? '-' : '+');
  out += std::to_string(pexp < 0 ? -pexp : pexp);

  void (*freefn)(void*, std::size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(digits, dv.size() + 1);
  mpz_clear(z);
  return out;
}

/// Parses a hex-float literal (grammar: sign? "0x" hexdigits ("." hexdigits)?
/// "p" sign? digits), rounding at ctx. Throws ParseError at the offending byte.
inline Scalar from_hex(std::string_view text, PrecisionContext ctx) {
  auto fail = [](const char* msg, std::size_t pos) {
    throw ParseError(std::string("hex-float: ") + msg, pos);
  };
  std::size_t i = 0;
  auto have = [&] { return i < text.size(); };
  if (have() && (text[i] == '+' || text[i] == '-')) ++i;
  if (!have() || text[i] != '0') fail("expected '0x'", i);
  ++i;
  if (!have() || (text[i] != 'x' && text[i] != 'X')) fail("expected '0x'", i);
  ++i;
  auto is_hex = [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; };
  std::size_t sig_start = i;
  while (have() && is_hex(text[i])) ++i;
  if (i == sig_start) fail("expected hex significand", i);
  if (have() && text[i] == '.') {
    ++i;
    std::size_t frac_start = i;
    while (have() && is_hex(text[i])) ++i;
    if (i == frac_start) fail("expected fraction digits after '.'", i);
  }
  if (!have() || (text[i] != 'p' && text[i] != 'P')) fail("expected 'p' exponent", i);
  ++i;
  if (have() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t exp_start = i;
  while (have() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == exp_start) fail("expected exponent digits", i);
  if (i != text.size()) fail("trailing characters", i);

  std::string buf(text);
  Scalar r(ctx);
  char* end = nullptr;
  mpfr_strtofr(r.raw(), buf.c_str(), &end, 16, PrecisionContext::rounding);
  if (end != buf.c_str() + buf.size())
    fail("unparsed input", static_cast<std::size_t>(end - buf.c_str()));
  return r;
}

/// Scientific-notation decimal with the given number of significant digits
/// (round to nearest). For bit-exact persistence use to_hex instead.
inline std::string to_decimal(const Scalar& x, int significant_digits) {
  if (significant_digits < 1) throw DomainError("to_decimal: need at least one digit");
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Re", significant_digits - 1, x.raw());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

inline double to_double(const Scalar& x) { return mpfr_get_d(x.raw(), MPFR_RNDN); }

}  // namespace mpmm
