#include <catch2/catch_amalgamated.hpp>

#include <zexp/perturbation.hpp>

#include <cstddef>
#include <vector>

#include "oracle_rational.hpp"

using namespace zexp;

namespace {

PerturbationState run_omega(int omega, int order, const PrecisionConfig& cfg,
                            const char* alpha_text = "1") {
  BasisSet basis = enumerate_basis(omega, parse_decimal(alpha_text, cfg), cfg);
  return run_recursion(assemble(basis), order);
}

}  // namespace

TEST_CASE("first orders are the hydrogenic energy and screening integral",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  HPReal tol = pow_si(HPReal(10, cfg), 8 - cfg.digits());
  for (int omega : {0, 1, 2, 3}) {
    PerturbationState st = run_omega(omega, 1, cfg);
    INFO("omega " << omega);
    CHECK(abs(st.energies[0] + HPReal(1, cfg)) <= tol);
    CHECK(abs(st.energies[1] - parse_decimal("0.625", cfg)) <= tol);
  }
}

TEST_CASE("small-basis energies match frozen exact rationals",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  PerturbationState st = run_omega(1, 3, cfg);
  REQUIRE(st.energies.size() == 4);
  HPReal e2 = oracle::hp_from_mpq(oracle::Rat(-1459, 9984), cfg);
  HPReal e3 = oracle::hp_from_mpq(oracle::Rat(605, 173056), cfg);
  CHECK(matching_significant_digits(st.energies[2], e2) >= cfg.digits() - 10);
  CHECK(matching_significant_digits(st.energies[3], e3) >= cfg.digits() - 10);
}

TEST_CASE("recursion matches an exact rational replay", "[perturbation]") {
  PrecisionConfig cfg(40);
  for (int omega : {1, 2}) {
    BasisSet basis = enumerate_basis(omega, HPReal(1, cfg), cfg);
    PerturbationState st = run_recursion(assemble(basis), 6);
    oracle::RecursionResult exact =
        oracle::recursion_exact(oracle::assemble_rational(basis.terms()), 6);
    REQUIRE(exact.energies.size() == st.energies.size());
    for (std::size_t n = 0; n < st.energies.size(); ++n) {
      INFO("omega " << omega << " order " << n);
      CHECK(matching_significant_digits(
                st.energies[n],
                oracle::hp_from_mpq(exact.energies[n], cfg)) >= 25);
    }
    const std::size_t M = basis.size();
    for (std::size_t n = 0; n < st.corrections.size(); ++n) {
      for (std::size_t t = 0; t < M; ++t) {
        HPReal want = oracle::hp_from_mpq(exact.corrections[n][t], cfg);
        INFO("omega " << omega << " order " << n << " component " << t);
        if (want.is_zero()) {
          CHECK(abs(st.corrections[n][t]) <=
                pow_si(HPReal(10, cfg), 10 - cfg.digits()));
        } else {
          CHECK(matching_significant_digits(st.corrections[n][t], want) >= 20);
        }
      }
    }
  }
}

TEST_CASE("corrections satisfy the order-by-order linear systems",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  PerturbationState st = run_omega(3, 5, cfg);
  HPReal scale = st.ops.S.max_abs() + st.ops.H0.max_abs() + st.ops.V.max_abs();
  HPReal gate = pow_si(HPReal(10, cfg), 10 - cfg.digits()) * scale;
  for (int n = 1; n <= 5; ++n) {
    INFO("order " << n);
    CHECK(recursion_residual(st, n) <= gate);
    CHECK(normalization_defect(st, n) <= gate);
  }
  CHECK_THROWS_AS(recursion_residual(st, 0), DomainError);
  CHECK_THROWS_AS(recursion_residual(st, 6), DomainError);
  CHECK_THROWS_AS(normalization_defect(st, 0), DomainError);
}

TEST_CASE("energies are stable against running to higher order",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  PerturbationState shorter = run_omega(2, 4, cfg);
  PerturbationState longer = run_omega(2, 9, cfg);
  for (std::size_t n = 0; n < shorter.energies.size(); ++n) {
    INFO("order " << n);
    CHECK(shorter.energies[n].cmp(longer.energies[n]) == 0);
  }
}

TEST_CASE("second order decreases with basis growth and bounds the limit",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  // Exact second-order limit, first digits; every variational value sits above.
  HPReal limit = parse_decimal("-0.15766642946915", cfg);
  HPReal previous(1, cfg);
  for (int omega : {1, 2, 3, 4}) {
    PerturbationState st = run_omega(omega, 2, cfg);
    const HPReal& e2 = st.energies[2];
    INFO("omega " << omega);
    CHECK(e2 >= limit);
    if (omega > 1) CHECK(e2 <= previous);
    previous = e2;
  }
}

TEST_CASE("second order is the minimum of its variational functional",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  PerturbationState st = run_omega(2, 2, cfg);
  const std::size_t M = st.ops.basis.size();
  const HPVector& c0 = st.corrections[0];
  const HPVector& c1 = st.corrections[1];

  auto functional = [&](const HPVector& c) {
    HPVector sc0 = matvec(st.ops.S, c0);
    HPVector vc0 = matvec(st.ops.V, c0);
    HPVector hc = matvec(st.ops.H0, c);
    HPVector sc = matvec(st.ops.S, c);
    HPReal e0 = st.energies[0];
    HPReal e1 = st.energies[1];
    HPReal quad = dot(c, hc) - e0 * dot(c, sc);
    HPReal lin = dot(c, vc0) - e1 * dot(c, sc0);
    return (quad + lin + lin) / dot(c0, sc0);
  };

  HPReal at_min = functional(c1);
  CHECK(abs(at_min - st.energies[2]) <=
        pow_si(HPReal(10, cfg), 8 - cfg.digits()));

  HPReal bump = parse_decimal("1e-5", cfg);
  for (std::size_t t = 1; t < M; ++t) {
    HPVector perturbed = c1;
    perturbed[t] += bump;
    INFO("perturbed component " << t);
    CHECK(functional(perturbed) >= st.energies[2]);
  }
}

TEST_CASE("recursion rejects unusable inputs", "[perturbation]") {
  PrecisionConfig cfg(40);
  BasisSet basis = enumerate_basis(2, HPReal(1, cfg), cfg);
  OperatorMatrices ops = assemble(basis);
  CHECK_THROWS_AS(run_recursion(std::move(ops), 0), DomainError);

  BasisSet off = enumerate_basis(2, parse_decimal("1.25", cfg), cfg);
  CHECK_THROWS_AS(run_recursion(assemble(off), 2), DomainError);
  try {
    run_recursion(assemble(off), 2);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("alpha = 1") != std::string::npos);
  }
}

TEST_CASE("a single-term basis truncates the series after first order",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  PerturbationState st = run_omega(0, 4, cfg);
  HPReal tol = pow_si(HPReal(10, cfg), 8 - cfg.digits());
  CHECK(abs(st.energies[0] + HPReal(1, cfg)) <= tol);
  CHECK(abs(st.energies[1] - parse_decimal("0.625", cfg)) <= tol);
  for (int n = 2; n <= 4; ++n) {
    INFO("order " << n);
    CHECK(st.energies[static_cast<std::size_t>(n)].is_zero());
  }
}

TEST_CASE("series export records provenance and trusted digits",
          "[perturbation]") {
  PrecisionConfig cfg(40);
  PerturbationState st = run_omega(2, 5, cfg);
  CoefficientSeries series = to_series(st);
  REQUIRE(series.order() == 5);
  CHECK(series.provenance().kind == ProvenanceKind::computed);
  CHECK(series.provenance().omega == 2);
  CHECK(series.provenance().digits == 40);
  for (int n = 0; n <= 5; ++n) {
    INFO("order " << n);
    CHECK(series.value(n).cmp(st.energies[static_cast<std::size_t>(n)]) == 0);
    CHECK(series.digits_trusted(n) >= 25);
  }
}
