#include <catch2/catch_amalgamated.hpp>

#include <zexp/precision.hpp>

#include <string>
#include <vector>

using namespace zexp;

TEST_CASE("precision config validates its range", "[precision]") {
  CHECK(PrecisionConfig().digits() == 40);
  CHECK(PrecisionConfig(30).digits() == 30);
  CHECK_THROWS_AS(PrecisionConfig(29), DomainError);
  CHECK_THROWS_AS(PrecisionConfig(0), DomainError);
  CHECK_THROWS_AS(PrecisionConfig(100001), DomainError);
  CHECK(PrecisionConfig(40).widened(10).digits() == 50);
  CHECK(PrecisionConfig(40).bits() >= 133 + 8);
}

TEST_CASE("parse_decimal accepts plain decimal forms", "[precision]") {
  PrecisionConfig cfg(40);
  CHECK(format_decimal(parse_decimal("-0.625", cfg), 3) == "-0.625");
  CHECK(format_decimal(parse_decimal("1e-3", cfg), 1) == "0.001");
  CHECK(format_decimal(parse_decimal("+2.5E+1", cfg), 2) == "25");
  CHECK(format_decimal(parse_decimal(".5", cfg), 1) == "0.5");
  CHECK(format_decimal(parse_decimal("7.", cfg), 1) == "7");
  CHECK(parse_decimal("0", cfg).is_zero());
}

TEST_CASE("parse_decimal rejects malformed strings with a position", "[precision]") {
  PrecisionConfig cfg(40);
  CHECK_THROWS_AS(parse_decimal("5/8", cfg), ParseError);
  try {
    parse_decimal("5/8", cfg);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("position 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_decimal("", cfg), ParseError);
  CHECK_THROWS_AS(parse_decimal("-", cfg), ParseError);
  CHECK_THROWS_AS(parse_decimal("1.2.3", cfg), ParseError);
  CHECK_THROWS_AS(parse_decimal("1e", cfg), ParseError);
  CHECK_THROWS_AS(parse_decimal("1e+", cfg), ParseError);
  CHECK_THROWS_AS(parse_decimal("0.157 666", cfg), ParseError);
  CHECK_THROWS_AS(parse_decimal("12a", cfg), ParseError);
}

TEST_CASE("25 significant digits survive a round trip at P=40", "[precision]") {
  PrecisionConfig cfg(40);
  const std::string e2 = "-0.1576664294691509410566793";
  HPReal x = parse_decimal(e2, cfg);
  CHECK(format_decimal(x, 25) == e2);
}

TEST_CASE("format_decimal fixture strings", "[precision]") {
  PrecisionConfig cfg(40);
  HPReal z1 = parse_decimal("-0.527751016544380", cfg);
  CHECK(format_decimal(z1, 15) == "-0.527751016544380");
  CHECK(format_decimal(parse_decimal("0.625", cfg), 3) == "0.625");
  CHECK(format_decimal(parse_decimal("0.625", cfg), 2) == "0.62");  // ties to even
  CHECK(format_decimal(parse_decimal("0.875", cfg), 2) == "0.88");
  CHECK(format_decimal(parse_decimal("123456", cfg), 3) == "123000");
  CHECK(format_decimal(parse_decimal("-93.906806515037549", cfg), 17) ==
        "-93.906806515037549");
  CHECK(format_decimal(parse_decimal("1e-30", cfg), 3) == "1.00e-30");
  CHECK(format_decimal(parse_decimal("0", cfg), 4) == "0.000");
  CHECK_THROWS_AS(format_decimal(z1, 0), DomainError);
  CHECK_THROWS_AS(format_decimal(z1, 41), DomainError);
}

TEST_CASE("format and parse round-trip assorted widths", "[precision]") {
  PrecisionConfig cfg(40);
  const std::vector<std::string> fixtures = {
      "1",      "-1",           "0.5",      "123.456",
      "0.0001", "-2.903724377", "99999999", "3.141592653589793238462643383279502884197",
  };
  for (const std::string& s : fixtures) {
    HPReal x = parse_decimal(s, cfg);
    int sig = count_significant_digits(s);
    HPReal y = parse_decimal(format_decimal(x, sig), cfg);
    CAPTURE(s);
    CHECK(x == y);
  }
}

TEST_CASE("format_fixed pins the fraction length", "[precision]") {
  PrecisionConfig cfg(40);
  CHECK(format_fixed(parse_decimal("-2.75", cfg), 4) == "-2.7500");
  CHECK(format_fixed(parse_decimal("-93.9068065150374", cfg), 15) ==
        "-93.906806515037400");
  CHECK(format_fixed(parse_decimal("0.00099", cfg), 3) == "0.001");
  CHECK(format_fixed(parse_decimal("0.00012", cfg), 3) == "0.000");
  CHECK(format_fixed(parse_decimal("-0.0006", cfg), 3) == "-0.001");
  CHECK(format_fixed(parse_decimal("9.99", cfg), 1) == "10.0");
  CHECK(format_fixed(parse_decimal("1250", cfg), 0) == "1250");
  CHECK(format_fixed(parse_decimal("0", cfg), 2) == "0.00");
  CHECK_THROWS_AS(format_fixed(parse_decimal("1", cfg), -1), DomainError);
}

TEST_CASE("arithmetic and guards", "[precision]") {
  PrecisionConfig cfg(40);
  HPReal a(3L, cfg), b(4L, cfg);
  CHECK((a + b) == HPReal(7L, cfg));
  CHECK((a - b) == HPReal(-1L, cfg));
  CHECK((a * b) == HPReal(12L, cfg));
  CHECK((b / a).mul_si(3) == b);
  CHECK(a.mul_2si(3) == HPReal(24L, cfg));
  CHECK(pow_si(a, 4) == HPReal(81L, cfg));
  CHECK(pow_si(a, -1).mul_si(3) == HPReal(1L, cfg));
  CHECK(abs(HPReal(-5L, cfg)) == HPReal(5L, cfg));
  CHECK(sqrt(HPReal(49L, cfg)) == HPReal(7L, cfg));

  HPReal zero(cfg);
  CHECK_THROWS_AS(a / zero, DomainError);
  CHECK_THROWS_AS(a.div_si(0), DomainError);
  CHECK_THROWS_AS(sqrt(HPReal(-1L, cfg)), DomainError);
  CHECK_THROWS_AS(log(zero), DomainError);
  CHECK_THROWS_AS(log(HPReal(-2L, cfg)), DomainError);
  CHECK_THROWS_AS(pow_si(zero, -1), DomainError);
}

TEST_CASE("fused accumulation rounds once", "[precision]") {
  PrecisionConfig cfg(40);
  HPReal acc(1L, cfg);
  HPReal x = parse_decimal("1e-45", cfg);
  HPReal one(1L, cfg);
  // plain (1 + 1e-45) - 1 loses the increment; fma keeps it through the
  // subtraction only if it was never rounded into acc, so this documents the
  // single-rounding contract instead: fma(x, 1, acc) == round(acc + x).
  HPReal viafma = acc;
  viafma.add_product(x, one);
  CHECK(viafma == acc + x);

  HPReal s(cfg);
  s.add_product(HPReal(6L, cfg), HPReal(7L, cfg));
  CHECK(s == HPReal(42L, cfg));
  s.sub_product(HPReal(2L, cfg), HPReal(21L, cfg));
  CHECK(s.is_zero());
}

TEST_CASE("comparisons are total and exact", "[precision]") {
  PrecisionConfig cfg(40);
  HPReal a = parse_decimal("1.25", cfg);
  HPReal b = parse_decimal("1.250", cfg);
  HPReal c = parse_decimal("-7", cfg);
  CHECK(a == b);
  CHECK(c < a);
  CHECK(a > c);
  CHECK(c.cmpabs(a) > 0);
  CHECK(a.cmp(c) > 0);
}

TEST_CASE("precision carries through mixed-precision operations", "[precision]") {
  PrecisionConfig lo(30), hi(60);
  HPReal a(1L, lo);
  HPReal b(3L, hi);
  HPReal q = a / b;
  CHECK(q.digits() == 60);
  CHECK(q.precision_bits() == PrecisionConfig(60).bits());
  HPReal narrowed(q, lo);
  CHECK(narrowed.digits() == 30);
  // widening is exact
  CHECK(HPReal(narrowed, hi) == narrowed);
}

TEST_CASE("count_significant_digits on typical table strings", "[precision]") {
  CHECK(count_significant_digits("-0.15766642946915") == 14);
  CHECK(count_significant_digits("0.625") == 3);
  CHECK(count_significant_digits("-1") == 1);
  CHECK(count_significant_digits("0.0001161792026") == 10);
  CHECK(count_significant_digits("0.000") == 1);
  CHECK(count_significant_digits("10e5") == 2);
  CHECK_THROWS_AS(count_significant_digits("0.1 5"), ParseError);
}

TEST_CASE("matching_significant_digits measures shared leading digits", "[precision]") {
  PrecisionConfig cfg(40);
  HPReal a = parse_decimal("0.15766642946915094", cfg);
  HPReal b = parse_decimal("0.15766642900000000", cfg);
  long m = matching_significant_digits(a, b);
  CHECK(m >= 8);
  CHECK(m <= 10);
  CHECK(matching_significant_digits(a, a) == 40);
  CHECK(matching_significant_digits(a, -a) == 0);
  PrecisionConfig lo(30);
  CHECK(matching_significant_digits(HPReal(a, lo), a) >= 28);
}

TEST_CASE("doubling precision refines rather than changes leading digits", "[precision]") {
  PrecisionConfig p40(40), p80(80);
  HPReal a40 = sqrt(HPReal(2L, p40));
  HPReal a80 = sqrt(HPReal(2L, p80));
  CHECK(matching_significant_digits(a40, a80) >= 38);
  CHECK(format_decimal(a80, 38) == format_decimal(HPReal(a40, p80), 38));
}
