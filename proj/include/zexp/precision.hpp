#pragma once

// Arbitrary-precision scalar type and decimal string conversions.
//
// Every value carries its own precision, fixed at construction from an
// explicit PrecisionConfig. No routine in this header (or anywhere else in
// the library) reads or writes a process-global precision, so results are
// bit-reproducible across runs and link units. All operations round to
// nearest with ties to even.

#include <cstdio>  // must precede mpfr.h so the formatted-output helpers are declared
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

#include "errors.hpp"

namespace zexp {

enum class Rounding { half_even };

// Working precision request in decimal digits. The binary precision backing
// a P-digit request is ceil(P*log2(10)) + 8 guard bits, enough that P
// significant decimal digits survive a round trip through binary.
class PrecisionConfig {
 public:
  static constexpr int kMinDigits = 30;
  static constexpr int kMaxDigits = 100000;

  PrecisionConfig() : PrecisionConfig(40) {}
  explicit PrecisionConfig(int digits, Rounding rounding = Rounding::half_even)
      : digits_(digits), rounding_(rounding) {
    if (digits < kMinDigits || digits > kMaxDigits) {
      throw DomainError("working precision must be between " +
                        std::to_string(kMinDigits) + " and " +
                        std::to_string(kMaxDigits) + " decimal digits, got " +
                        std::to_string(digits));
    }
  }

  int digits() const noexcept { return digits_; }
  Rounding rounding() const noexcept { return rounding_; }

  mpfr_prec_t bits() const noexcept {
    return static_cast<mpfr_prec_t>(std::ceil(digits_ * 3.32192809488736235)) + 8;
  }

  PrecisionConfig widened(int extra_digits) const {
    return PrecisionConfig(digits_ + extra_digits, rounding_);
  }

  friend bool operator==(const PrecisionConfig& a, const PrecisionConfig& b) {
    return a.digits_ == b.digits_ && a.rounding_ == b.rounding_;
  }

 private:
  int digits_;
  Rounding rounding_;
};

class HPReal {
  struct RawTag {};

 public:
  explicit HPReal(const PrecisionConfig& cfg) : digits_(cfg.digits()) {
    mpfr_init2(v_, cfg.bits());
    mpfr_set_zero(v_, +1);
  }

  HPReal(long value, const PrecisionConfig& cfg) : digits_(cfg.digits()) {
    mpfr_init2(v_, cfg.bits());
    mpfr_set_si(v_, value, MPFR_RNDN);
  }

  // Re-round an existing value under a new configuration. Widening is exact.
  HPReal(const HPReal& other, const PrecisionConfig& cfg) : digits_(cfg.digits()) {
    mpfr_init2(v_, cfg.bits());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  HPReal(const HPReal& other) : digits_(other.digits_) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  HPReal(HPReal&& other) noexcept : digits_(other.digits_) {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }

  HPReal& operator=(const HPReal& other) {
    if (this != &other) {
      HPReal tmp(other);
      swap(tmp);
    }
    return *this;
  }

  HPReal& operator=(HPReal&& other) noexcept {
    swap(other);
    return *this;
  }

  ~HPReal() { mpfr_clear(v_); }

  void swap(HPReal& other) noexcept {
    mpfr_swap(v_, other.v_);
    std::swap(digits_, other.digits_);
  }

  int digits() const noexcept { return digits_; }
  mpfr_prec_t precision_bits() const noexcept { return mpfr_get_prec(v_); }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }
  bool negative() const noexcept { return mpfr_sgn(v_) < 0; }
  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

  // Escape hatch for interop (test oracles set values from GMP rationals).
  mpfr_srcptr raw() const noexcept { return v_; }
  mpfr_ptr raw_mutable() noexcept { return v_; }

  friend HPReal operator+(const HPReal& a, const HPReal& b) {
    return binary(a, b, mpfr_add, "addition");
  }
  friend HPReal operator-(const HPReal& a, const HPReal& b) {
    return binary(a, b, mpfr_sub, "subtraction");
  }
  friend HPReal operator*(const HPReal& a, const HPReal& b) {
    return binary(a, b, mpfr_mul, "multiplication");
  }
  friend HPReal operator/(const HPReal& a, const HPReal& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    return binary(a, b, mpfr_div, "division");
  }
  friend HPReal operator-(const HPReal& a) {
    HPReal r(RawTag{}, mpfr_get_prec(a.v_), a.digits_);
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  HPReal& operator+=(const HPReal& o) { return *this = *this + o; }
  HPReal& operator-=(const HPReal& o) { return *this = *this - o; }
  HPReal& operator*=(const HPReal& o) { return *this = *this * o; }
  HPReal& operator/=(const HPReal& o) { return *this = *this / o; }

  HPReal mul_si(long f) const {
    HPReal r(RawTag{}, mpfr_get_prec(v_), digits_);
    mpfr_mul_si(r.v_, v_, f, MPFR_RNDN);
    r.ensure_finite("mul_si");
    return r;
  }

  HPReal div_si(long f) const {
    if (f == 0) throw DomainError("division by zero");
    HPReal r(RawTag{}, mpfr_get_prec(v_), digits_);
    mpfr_div_si(r.v_, v_, f, MPFR_RNDN);
    return r;
  }

  // Exact scaling by a power of two.
  HPReal mul_2si(long e) const {
    HPReal r(RawTag{}, mpfr_get_prec(v_), digits_);
    mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN);
    r.ensure_finite("mul_2si");
    return r;
  }

  // Fused accumulation: *this += x*y with a single rounding, into this
  // value's own precision. The workhorse of every inner product.
  void add_product(const HPReal& x, const HPReal& y) {
    mpfr_fma(v_, x.v_, y.v_, v_, MPFR_RNDN);
    ensure_finite("add_product");
  }

  // *this -= x*y with a single rounding (fms then exact negation).
  void sub_product(const HPReal& x, const HPReal& y) {
    mpfr_fms(v_, x.v_, y.v_, v_, MPFR_RNDN);
    mpfr_neg(v_, v_, MPFR_RNDN);
    ensure_finite("sub_product");
  }

  int cmp(const HPReal& o) const noexcept { return mpfr_cmp(v_, o.v_); }
  int cmpabs(const HPReal& o) const noexcept { return mpfr_cmpabs(v_, o.v_); }

  friend bool operator==(const HPReal& a, const HPReal& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const HPReal& a, const HPReal& b) { return a.cmp(b) != 0; }
  friend bool operator<(const HPReal& a, const HPReal& b) { return a.cmp(b) < 0; }
  friend bool operator<=(const HPReal& a, const HPReal& b) { return a.cmp(b) <= 0; }
  friend bool operator>(const HPReal& a, const HPReal& b) { return a.cmp(b) > 0; }
  friend bool operator>=(const HPReal& a, const HPReal& b) { return a.cmp(b) >= 0; }

  friend HPReal abs(const HPReal& a) {
    HPReal r(RawTag{}, mpfr_get_prec(a.v_), a.digits_);
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend HPReal sqrt(const HPReal& a) {
    if (a.sign() < 0) throw DomainError("sqrt of a negative value");
    HPReal r(RawTag{}, mpfr_get_prec(a.v_), a.digits_);
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend HPReal exp(const HPReal& a) {
    HPReal r(RawTag{}, mpfr_get_prec(a.v_), a.digits_);
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    r.ensure_finite("exp");
    return r;
  }

  friend HPReal log(const HPReal& a) {
    if (a.sign() <= 0) throw DomainError("log of a non-positive value");
    HPReal r(RawTag{}, mpfr_get_prec(a.v_), a.digits_);
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend HPReal pow_si(const HPReal& a, long e) {
    if (a.is_zero() && e < 0) throw DomainError("zero raised to a negative power");
    HPReal r(RawTag{}, mpfr_get_prec(a.v_), a.digits_);
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    r.ensure_finite("pow_si");
    return r;
  }

 private:
  HPReal(RawTag, mpfr_prec_t bits, int digits) : digits_(digits) {
    mpfr_init2(v_, bits);
  }

  static HPReal binary(const HPReal& a, const HPReal& b,
                       int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t),
                       const char* name) {
    HPReal r(RawTag{}, std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_)),
             std::max(a.digits_, b.digits_));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    r.ensure_finite(name);
    return r;
  }

  void ensure_finite(const char* op) const {
    if (mpfr_nan_p(v_)) throw DomainError(std::string(op) + " produced NaN");
    if (mpfr_inf_p(v_)) throw DomainError(std::string(op) + " overflowed");
  }

  mpfr_t v_;
  int digits_;
};

inline void swap(HPReal& a, HPReal& b) noexcept { a.swap(b); }

// Parse a plain decimal string: optional sign, digits with at most one
// point, optional e/E exponent. Whitespace, grouping characters, and
// fraction syntax such as "5/8" are rejected with the offending position.
inline HPReal parse_decimal(std::string_view text, const PrecisionConfig& cfg) {
  if (text.empty()) throw ParseError("empty decimal string", 0);
  std::size_t pos = 0;
  const std::size_t n = text.size();
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

  if (text[pos] == '+' || text[pos] == '-') ++pos;
  std::size_t int_digits = 0;
  while (pos < n && is_digit(text[pos])) {
    ++pos;
    ++int_digits;
  }
  std::size_t frac_digits = 0;
  if (pos < n && text[pos] == '.') {
    ++pos;
    while (pos < n && is_digit(text[pos])) {
      ++pos;
      ++frac_digits;
    }
  }
  if (int_digits + frac_digits == 0) {
    throw ParseError("expected a digit in '" + std::string(text) + "'", pos);
  }
  if (pos < n && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    if (pos < n && (text[pos] == '+' || text[pos] == '-')) ++pos;
    if (pos >= n || !is_digit(text[pos])) {
      throw ParseError("malformed exponent in '" + std::string(text) + "'", pos);
    }
    while (pos < n && is_digit(text[pos])) ++pos;
  }
  if (pos != n) {
    throw ParseError("unexpected character '" + std::string(1, text[pos]) +
                         "' in '" + std::string(text) + "'",
                     pos);
  }

  HPReal r(cfg);
  std::string buf(text);
  char* end = nullptr;
  mpfr_strtofr(r.raw_mutable(), buf.c_str(), &end, 10, MPFR_RNDN);
  if (end != buf.c_str() + buf.size()) {
    throw ParseError("could not consume entire decimal string '" + buf + "'",
                     static_cast<std::size_t>(end - buf.c_str()));
  }
  if (mpfr_nan_p(r.raw()) || mpfr_inf_p(r.raw())) {
    throw ParseError("decimal value out of representable range", 0);
  }
  return r;
}

namespace detail {

// Render |x| (non-zero, finite) as (mantissa digits, E) with the value equal
// to 0.mantissa * 10^E, mantissa holding exactly `digits` characters,
// correctly rounded half-even.
inline std::pair<std::string, long> decimal_parts(const HPReal& x, int digits) {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Re", digits - 1, x.raw());
  std::string s(raw);
  mpfr_free_str(raw);
  std::size_t start = (s[0] == '-') ? 1 : 0;
  std::size_t epos = s.find_first_of("eE", start);
  std::string man = s.substr(start, epos - start);
  long exp10 = std::strtol(s.c_str() + epos + 1, nullptr, 10);
  if (std::size_t dot = man.find('.'); dot != std::string::npos) man.erase(dot, 1);
  return {man, exp10 + 1};
}

}  // namespace detail

// Render x with the given count of significant digits, correctly rounded
// half-even. Values in a moderate exponent window come out in fixed
// notation with trailing zeros kept; everything else is scientific.
inline std::string format_decimal(const HPReal& x, int digits) {
  if (digits < 1) throw DomainError("format_decimal: digit count must be positive");
  if (digits > x.digits()) {
    throw DomainError("format_decimal: requested " + std::to_string(digits) +
                      " digits but the value carries only " +
                      std::to_string(x.digits()));
  }
  if (x.is_zero()) {
    return digits == 1 ? "0" : "0." + std::string(digits - 1, '0');
  }
  auto [man, E] = detail::decimal_parts(x, digits);
  std::string body;
  if (E >= -5 && E <= digits + 6) {
    if (E <= 0) {
      body = "0." + std::string(static_cast<std::size_t>(-E), '0') + man;
    } else if (E < digits) {
      body = man.substr(0, static_cast<std::size_t>(E)) + "." +
             man.substr(static_cast<std::size_t>(E));
    } else {
      body = man + std::string(static_cast<std::size_t>(E - digits), '0');
    }
  } else {
    body = man.substr(0, 1);
    if (digits > 1) body += "." + man.substr(1);
    body += "e" + std::to_string(E - 1);
  }
  return (x.negative() ? "-" : "") + body;
}

// Fixed-point rendering with exactly `fraction_digits` digits after the
// point (matching how reference energy tables are printed).
inline std::string format_fixed(const HPReal& x, int fraction_digits) {
  if (fraction_digits < 0) {
    throw DomainError("format_fixed: fraction digit count must be non-negative");
  }
  auto zeros_body = [&]() {
    return fraction_digits == 0 ? std::string("0")
                                : "0." + std::string(fraction_digits, '0');
  };
  if (x.is_zero()) return zeros_body();

  auto [probe_man, probe_E] = detail::decimal_parts(x, 2);
  (void)probe_man;
  long sig = probe_E + fraction_digits;
  if (sig < 1) {
    // Every significant digit sits right of the kept window; the result is
    // either all zeros or one unit in the last place.
    PrecisionConfig cfg(std::max(x.digits(), PrecisionConfig::kMinDigits));
    HPReal half = parse_decimal("5e-" + std::to_string(fraction_digits + 1), cfg);
    std::string sign = x.negative() ? "-" : "";
    if (abs(x) <= half) return zeros_body();
    if (fraction_digits == 0) return sign + "1";
    return sign + "0." + std::string(fraction_digits - 1, '0') + "1";
  }
  auto [man, E] = detail::decimal_parts(x, static_cast<int>(sig));
  if (E != probe_E && E + fraction_digits >= 1) {
    // Rounding at the probe width bumped across a decade the full-width
    // rounding does not; redo at the width the true exponent asks for. A
    // residual bump after this leaves a power of ten, which zero-padding
    // below renders exactly.
    sig = E + fraction_digits;
    std::tie(man, E) = detail::decimal_parts(x, static_cast<int>(sig));
  }
  std::string intpart, fracpart;
  if (E <= 0) {
    intpart = "0";
    fracpart = std::string(static_cast<std::size_t>(-E), '0') + man;
  } else if (static_cast<std::size_t>(E) >= man.size()) {
    intpart = man + std::string(static_cast<std::size_t>(E) - man.size(), '0');
  } else {
    intpart = man.substr(0, static_cast<std::size_t>(E));
    fracpart = man.substr(static_cast<std::size_t>(E));
  }
  if (static_cast<long>(fracpart.size()) < fraction_digits) {
    fracpart += std::string(fraction_digits - fracpart.size(), '0');
  }
  std::string body = intpart;
  if (fraction_digits > 0) body += "." + fracpart.substr(0, fraction_digits);
  return (x.negative() ? "-" : "") + body;
}

// Count of significant digits in a decimal string (leading zeros skipped,
// trailing zeros kept; an all-zero mantissa counts as one digit).
inline int count_significant_digits(std::string_view text) {
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
  int total = 0;
  bool seen_nonzero = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == 'e' || c == 'E') break;
    if (c == '.') continue;
    if (c < '0' || c > '9') {
      throw ParseError("unexpected character in decimal string", pos);
    }
    if (c != '0') seen_nonzero = true;
    if (seen_nonzero) ++total;
  }
  return seen_nonzero ? total : 1;
}

// How many leading significant digits two values share; used to gauge
// reproducibility between precision levels. Capped by the smaller of the
// two carried digit counts.
inline long matching_significant_digits(const HPReal& a, const HPReal& b) {
  long cap = std::min(a.digits(), b.digits());
  if (a == b) return cap;
  HPReal diff = abs(a - b);
  HPReal ref = (a.cmpabs(b) >= 0) ? abs(a) : abs(b);
  if (ref.is_zero()) return 0;
  HPReal rel = diff / ref;
  double lg = log(rel).to_double();
  long d = static_cast<long>(std::floor(-lg / std::log(10.0)));
  return std::clamp(d, 0L, cap);
}

inline std::ostream& operator<<(std::ostream& os, const HPReal& x) {
  return os << format_decimal(x, x.digits());
}

}  // namespace zexp
