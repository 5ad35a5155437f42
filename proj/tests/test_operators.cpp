#include <catch2/catch_amalgamated.hpp>

#include <zexp/operators.hpp>

#include <cstddef>

#include "oracle_rational.hpp"

using namespace zexp;

namespace {

OperatorMatrices assemble_omega(int omega, const std::string& alpha_text,
                                const PrecisionConfig& cfg) {
  HPReal alpha = parse_decimal(alpha_text, cfg);
  return assemble(enumerate_basis(omega, alpha, cfg));
}

}  // namespace

TEST_CASE("single-term matrices match hydrogenic closed forms", "[operators]") {
  PrecisionConfig cfg(40);
  HPReal tol = pow_si(HPReal(10, cfg), 6 - cfg.digits());

  for (const char* alpha_text : {"1", "2", "0.5"}) {
    OperatorMatrices ops = assemble_omega(0, alpha_text, cfg);
    REQUIRE(ops.S.rows() == 1);
    HPReal alpha = parse_decimal(alpha_text, cfg);
    INFO("alpha " << alpha_text);

    HPReal s00 = pow_si(alpha, -6).div_si(8);
    CHECK(abs(ops.S.at(0, 0) / s00 - HPReal(1, cfg)) <= tol);

    HPReal ratio_h = ops.H0.at(0, 0) / ops.S.at(0, 0);
    CHECK(abs(ratio_h - (alpha * alpha - alpha - alpha)) <= tol);

    HPReal ratio_v = ops.V.at(0, 0) / ops.S.at(0, 0);
    CHECK(abs(ratio_v - alpha.mul_si(5).div_si(8)) <= tol);
  }
}

TEST_CASE("assembled matrices match the exact rational oracle", "[operators]") {
  PrecisionConfig cfg(40);
  BasisSet basis = enumerate_basis(2, HPReal(1, cfg), cfg);
  OperatorMatrices ops = assemble(basis);
  oracle::RatOperators exact = oracle::assemble_rational(basis.terms());
  HPReal gate = pow_si(HPReal(10, cfg), 8 - cfg.digits());

  auto matches = [&](const HPReal& got, const oracle::Rat& want) {
    HPReal hw = oracle::hp_from_mpq(want, cfg);
    if (hw.is_zero()) return abs(got) <= gate;
    return matching_significant_digits(got, hw) >= 25;
  };

  const std::size_t M = basis.size();
  REQUIRE(M == 7);
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < M; ++c) {
      INFO("entry (" << r << "," << c << ")");
      CHECK(matches(ops.S.at(r, c), exact.S[r][c]));
      CHECK(matches(ops.H0.at(r, c), exact.H0[r][c]));
      CHECK(matches(ops.V.at(r, c), exact.V[r][c]));
    }
  }
}

TEST_CASE("assembled matrices are exactly symmetric", "[operators]") {
  PrecisionConfig cfg(40);
  OperatorMatrices ops = assemble_omega(3, "1", cfg);
  const std::size_t M = ops.S.rows();
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = r + 1; c < M; ++c) {
      CHECK(ops.S.at(r, c).cmp(ops.S.at(c, r)) == 0);
      CHECK(ops.H0.at(r, c).cmp(ops.H0.at(c, r)) == 0);
      CHECK(ops.V.at(r, c).cmp(ops.V.at(c, r)) == 0);
    }
  }
}

TEST_CASE("the hydrogenic ground state stays an eigenvector at alpha 1",
          "[operators]") {
  PrecisionConfig cfg(40);
  OperatorMatrices ops = assemble_omega(4, "1", cfg);
  HPReal gate = pow_si(HPReal(10, cfg), 8 - cfg.digits()) * ops.S.max_abs();

  // H0 phi_0 = -phi_0 at unit exponent, so row 0 of H0 must equal -row 0 of S.
  for (std::size_t c = 0; c < ops.S.cols(); ++c) {
    HPReal defect = ops.H0.at(0, c) + ops.S.at(0, c);
    INFO("column " << c);
    CHECK(abs(defect) <= gate);
  }
}

TEST_CASE("pencil ground value bounds the helium reference from above",
          "[operators]") {
  PrecisionConfig cfg(40);
  // Full Hamiltonian for Z = 2 in scaled units: 4 (H0 + lambda V), lambda = 1/2.
  HPReal reference = parse_decimal("-2.903724377034119", cfg);
  HPReal previous(1, cfg);
  for (int omega : {1, 2, 3}) {
    OperatorMatrices ops = assemble_omega(omega, "1", cfg);
    const std::size_t M = ops.S.rows();
    HPMatrix full(M, M, cfg);
    for (std::size_t r = 0; r < M; ++r) {
      for (std::size_t c = 0; c < M; ++c) {
        HPReal h = ops.V.at(r, c);
        h = h.div_si(2);
        h += ops.H0.at(r, c);
        full.at(r, c) = h.mul_si(4);
      }
    }
    HPReal ground = pencil_min_eigenvalue(full, ops.S);
    INFO("omega " << omega);
    CHECK(ground >= reference);
    if (omega > 1) CHECK(ground <= previous);
    previous = ground;
  }
  CHECK(previous - reference <= parse_decimal("5e-3", cfg));
}
