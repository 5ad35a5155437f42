#include <catch2/catch_amalgamated.hpp>

#include <zexp/hylleraas.hpp>
#include <zexp/quadrature.hpp>

#include <algorithm>
#include <array>
#include <tuple>
#include <vector>

#include "oracle_rational.hpp"

using namespace zexp;

TEST_CASE("basis_size matches a direct enumeration count", "[hylleraas]") {
  CHECK(basis_size(0) == 1);
  CHECK(basis_size(1) == 3);
  CHECK(basis_size(2) == 7);
  CHECK(basis_size(8) == 95);
  CHECK_THROWS_AS(basis_size(-1), DomainError);

  for (int omega = 0; omega <= 12; ++omega) {
    long count = 0;
    for (int i = 0; i <= omega; ++i) {
      for (int j = i; i + j <= omega; ++j) {
        for (int k = 0; i + j + k <= omega; ++k) ++count;
      }
    }
    INFO("omega " << omega);
    CHECK(basis_size(omega) == count);
  }
}

TEST_CASE("enumerate_basis yields canonical terms in shell order",
          "[hylleraas]") {
  PrecisionConfig cfg(40);
  HPReal one(1, cfg);

  BasisSet b1 = enumerate_basis(1, one, cfg);
  REQUIRE(b1.size() == 3);
  CHECK(b1.terms()[0] == HylleraasTerm{0, 0, 0});
  CHECK(b1.terms()[1] == HylleraasTerm{0, 0, 1});
  CHECK(b1.terms()[2] == HylleraasTerm{0, 1, 0});
  CHECK(b1.omega() == 1);

  BasisSet b5 = enumerate_basis(5, one, cfg);
  REQUIRE(b5.size() == static_cast<std::size_t>(basis_size(5)));
  std::vector<std::tuple<int, int, int, int>> keys;
  for (const HylleraasTerm& t : b5.terms()) {
    CHECK(t.i <= t.j);
    CHECK(t.i + t.j + t.k <= 5);
    keys.emplace_back(t.i + t.j + t.k, t.i, t.j, t.k);
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());

  CHECK_THROWS_AS(enumerate_basis(-1, one, cfg), DomainError);
  CHECK_THROWS_AS(enumerate_basis(29, one, cfg), DomainError);
  CHECK_THROWS_AS(enumerate_basis(2, HPReal(cfg), cfg), DomainError);
  CHECK_THROWS_AS(enumerate_basis(2, HPReal(-1, cfg), cfg), DomainError);
}

TEST_CASE("radial_integral reproduces exact rational fixtures", "[hylleraas]") {
  PrecisionConfig cfg(40);
  HPReal two(2, cfg);
  HPReal three(3, cfg);

  auto close = [&](const HPReal& got, long num, long den) {
    HPReal want = oracle::hp_from_mpq(oracle::Rat(num, den), cfg);
    return matching_significant_digits(got, want) >= cfg.digits() - 2;
  };
  CHECK(close(radial_integral(0, 0, 0, two, two, cfg), 1, 8));
  CHECK(close(radial_integral(0, 0, -1, two, two, cfg), 5, 64));
  CHECK(close(radial_integral(-1, 0, 0, two, two, cfg), 1, 8));
  CHECK(close(radial_integral(1, 2, 1, two, three, cfg), 9844, 50625));
}

TEST_CASE("radial_integral is symmetric under particle exchange",
          "[hylleraas]") {
  PrecisionConfig cfg(40);
  HPReal a = parse_decimal("1.75", cfg);
  HPReal b = parse_decimal("2.5", cfg);
  for (int l = -1; l <= 3; ++l) {
    for (int m = -1; m <= 3; ++m) {
      for (int n = -1; n <= 3; ++n) {
        HPReal lhs = radial_integral(l, m, n, a, b, cfg);
        HPReal rhs = radial_integral(m, l, n, b, a, cfg);
        INFO("l=" << l << " m=" << m << " n=" << n);
        CHECK(lhs.cmp(rhs) == 0);
      }
    }
  }
}

TEST_CASE("radial_integral obeys the exponent scaling law", "[hylleraas]") {
  PrecisionConfig cfg(40);
  HPReal a(2, cfg);
  HPReal b(3, cfg);
  HPReal s(2, cfg);
  for (auto [l, m, n] : std::vector<std::array<int, 3>>{
           {0, 0, 0}, {1, 2, 1}, {-1, 2, 3}, {4, 4, 4}}) {
    HPReal base = radial_integral(l, m, n, a, b, cfg);
    HPReal scaled = radial_integral(l, m, n, s * a, s * b, cfg);
    HPReal predicted = base * pow_si(s, -(l + m + n + 6));
    INFO("l=" << l << " m=" << m << " n=" << n);
    CHECK(matching_significant_digits(scaled, predicted) >= cfg.digits() - 4);
  }
}

TEST_CASE("radial_integral rejects out-of-range arguments", "[hylleraas]") {
  PrecisionConfig cfg(40);
  HPReal two(2, cfg);
  CHECK_THROWS_AS(radial_integral(-2, 0, 0, two, two, cfg), DomainError);
  CHECK_THROWS_AS(radial_integral(0, -2, 0, two, two, cfg), DomainError);
  CHECK_THROWS_AS(radial_integral(0, 0, -2, two, two, cfg), DomainError);
  CHECK_THROWS_AS(radial_integral(0, 0, 0, HPReal(cfg), two, cfg), DomainError);
  CHECK_THROWS_AS(radial_integral(0, 0, 0, two, HPReal(-1, cfg), cfg),
                  DomainError);
}

TEST_CASE("radial_integral agrees with the independent series form",
          "[hylleraas]") {
  PrecisionConfig cfg(40);
  HPReal two(2, cfg);
  oracle::Rat w(2);
  for (int l = -1; l <= 4; ++l) {
    for (int m = -1; m <= 4; ++m) {
      for (int n = -1; n <= 4; ++n) {
        HPReal got = radial_integral(l, m, n, two, two, cfg);
        HPReal want = oracle::hp_from_mpq(oracle::integral_stu(l, m, n, w), cfg);
        INFO("l=" << l << " m=" << m << " n=" << n);
        CHECK(matching_significant_digits(got, want) >= cfg.digits() - 6);
      }
    }
  }
}

TEST_CASE("quadrature grid reproduces closed-form moments", "[hylleraas]") {
  PrecisionConfig cfg(40);
  HPReal a(2, cfg);
  HPReal b(3, cfg);
  const int target = 18;
  IntegralGrid grid = quadrature_integral_grid(2, a, b, cfg, target);
  CHECK(grid.max_power == 2);
  CHECK(grid.panels_used >= 1);
  for (int l = -1; l <= 2; ++l) {
    for (int m = -1; m <= 2; ++m) {
      for (int n = -1; n <= 2; ++n) {
        HPReal want = radial_integral(l, m, n, a, b, cfg);
        INFO("l=" << l << " m=" << m << " n=" << n);
        CHECK(matching_significant_digits(grid.at(l, m, n), want) >= target);
      }
    }
  }
  CHECK_THROWS_AS(grid.at(3, 0, 0), DomainError);
  CHECK_THROWS_AS(grid.at(-2, 0, 0), DomainError);
  CHECK_THROWS_AS(quadrature_integral_grid(9, a, b, cfg, target), DomainError);
  CHECK_THROWS_AS(quadrature_integral_grid(2, HPReal(cfg), b, cfg, target),
                  DomainError);
  CHECK_THROWS_AS(quadrature_integral_grid(2, a, b, cfg, 5), DomainError);
  CHECK_THROWS_AS(quadrature_integral_grid(2, a, b, cfg, 40), DomainError);
}
