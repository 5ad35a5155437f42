#pragma once

// Rayleigh-Schrodinger recursion for the scaled-charge expansion. With the
// screened-hydrogenic splitting H = H0 + lambda V the energy series
// E~(lambda) = sum e_n lambda^n and correction vectors c^(n) obey, in the
// intermediate normalization c^(n).S.c^(0) = 0 for n >= 1,
//
//   e_n = (V c^(n-1))_0 / S_00,
//   (H0 - e_0 S) c^(n) = -V c^(n-1) + sum_{m=1..n} e_m S c^(n-m).
//
// The basis is ordered so that index 0 is the exact H0 ground state when the
// exponential parameter is 1, which makes H0 - e_0 S singular exactly in the
// direction of c^(0) = (1,0,..,0). The linear solves therefore run on the
// restricted system with row/column 0 deleted; that block is symmetric
// positive definite and is factored once.

#include <string>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "operators.hpp"

namespace zexp {

struct PerturbationState {
  OperatorMatrices ops;
  std::vector<HPReal> energies;      // e_0 .. e_N
  std::vector<HPVector> corrections; // c^(0) .. c^(N)
};

namespace detail {

// Restricted views drop basis index 0.
inline HPVector drop_head(const HPVector& v, const PrecisionConfig& cfg) {
  HPVector out;
  out.reserve(v.size() - 1);
  for (std::size_t t = 1; t < v.size(); ++t) out.push_back(HPReal(v[t], cfg));
  return out;
}

}  // namespace detail

inline PerturbationState run_recursion(OperatorMatrices ops, int max_order) {
  if (max_order < 1) {
    throw DomainError("max_order must be at least 1");
  }
  PerturbationState state{std::move(ops), {}, {}};
  const PrecisionConfig cfg = state.ops.basis.config();
  const std::size_t M = state.ops.basis.size();
  const HPMatrix& S = state.ops.S;
  const HPMatrix& H0 = state.ops.H0;
  const HPMatrix& V = state.ops.V;

  const HPReal& s00 = S.at(0, 0);
  HPReal e0 = H0.at(0, 0) / s00;

  // The recursion needs basis vector 0 to be an exact H0 eigenvector. That
  // holds only for exponential parameter 1; reject anything else up front
  // instead of producing quietly wrong coefficients.
  HPReal defect(cfg);
  for (std::size_t a = 0; a < M; ++a) {
    HPReal r = H0.at(a, 0);
    r.sub_product(e0, S.at(a, 0));
    if (abs(r).cmp(defect) > 0) defect = abs(r);
  }
  HPReal ten(10L, cfg);
  HPReal gate = pow_si(ten, 8 - cfg.digits()) * S.max_abs();
  if (defect.cmp(gate) > 0) {
    throw DomainError(
        "basis vector 0 is not an eigenvector of the unperturbed operator; "
        "the recursion requires exponential parameter alpha = 1");
  }

  state.energies.reserve(static_cast<std::size_t>(max_order) + 1);
  state.corrections.reserve(static_cast<std::size_t>(max_order) + 1);

  state.energies.push_back(e0);
  HPVector c0(M, HPReal(cfg));
  c0[0] = HPReal(1L, cfg);
  state.corrections.push_back(c0);

  // e_1 = V_00 / S_00 comes out of the generic order loop below.

  if (M == 1) {
    for (int n = 1; n <= max_order; ++n) {
      if (n == 1) {
        state.energies.push_back(V.at(0, 0) / s00);
      } else {
        state.energies.push_back(HPReal(cfg));
      }
      state.corrections.push_back(HPVector(1, HPReal(cfg)));
    }
    return state;
  }

  const std::size_t R = M - 1;
  HPMatrix A(R, R, cfg);
  for (std::size_t a = 0; a < R; ++a) {
    for (std::size_t b = 0; b < R; ++b) {
      HPReal entry = H0.at(a + 1, b + 1);
      entry.sub_product(e0, S.at(a + 1, b + 1));
      A.at(a, b) = std::move(entry);
    }
  }
  CholeskyFactor restricted = [&]() {
    try {
      return CholeskyFactor(A);
    } catch (const NotPositiveDefiniteError& e) {
      throw DegenerateBasisError(
          std::string("restricted shifted operator is not positive definite "
                      "(near-dependent basis, try a smaller omega): ") +
          e.what());
    }
  }();

  // Cached products S c^(m), stored full-length.
  std::vector<HPVector> s_times_c;
  s_times_c.push_back(matvec(S, c0));

  for (int n = 1; n <= max_order; ++n) {
    const HPVector& prev = state.corrections.back();
    HPVector vprev = matvec(V, prev);
    HPReal en = vprev[0] / s00;
    state.energies.push_back(en);

    // rhs = -V c^(n-1) + sum_{m=1..n} e_m S c^(n-m), restricted rows.
    HPVector rhs(M, HPReal(cfg));
    for (std::size_t a = 0; a < M; ++a) {
      rhs[a] = -vprev[a];
      for (int m = 1; m <= n; ++m) {
        rhs[a].add_product(state.energies[static_cast<std::size_t>(m)],
                           s_times_c[static_cast<std::size_t>(n - m)][a]);
      }
    }

    HPVector rhs_r = detail::drop_head(rhs, cfg);
    HPVector y = restricted.solve(rhs_r);

    HPVector cn(M, HPReal(cfg));
    for (std::size_t t = 0; t < R; ++t) cn[t + 1] = y[t];
    // Intermediate normalization fixes the head component:
    // c^(n).S.c^(0) = 0  =>  c_0 = -(sum_{j>=1} S_0j c_j) / S_00.
    HPReal head(cfg);
    for (std::size_t j = 1; j < M; ++j) {
      head.add_product(S.at(0, j), cn[j]);
    }
    cn[0] = -(head / s00);

    s_times_c.push_back(matvec(S, cn));
    state.corrections.push_back(std::move(cn));
  }
  return state;
}

// Residual of the order-n linear equation, for tests: max-norm of
// (H0 - e_0 S) c^(n) + V c^(n-1) - sum e_m S c^(n-m).
inline HPReal recursion_residual(const PerturbationState& st, int n) {
  if (n < 1 || static_cast<std::size_t>(n) >= st.corrections.size()) {
    throw DomainError("residual order out of range");
  }
  const PrecisionConfig cfg = st.ops.basis.config();
  const std::size_t M = st.ops.basis.size();
  HPVector lhs = matvec(st.ops.H0, st.corrections[static_cast<std::size_t>(n)]);
  HPVector sc = matvec(st.ops.S, st.corrections[static_cast<std::size_t>(n)]);
  HPVector vc = matvec(st.ops.V, st.corrections[static_cast<std::size_t>(n) - 1]);
  std::vector<HPVector> smc;
  smc.reserve(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m) {
    smc.push_back(matvec(st.ops.S,
                         st.corrections[static_cast<std::size_t>(n - m)]));
  }
  HPReal worst(cfg);
  for (std::size_t a = 0; a < M; ++a) {
    HPReal r = lhs[a];
    r.sub_product(st.energies[0], sc[a]);
    r = r + vc[a];
    for (int m = 1; m <= n; ++m) {
      r.sub_product(st.energies[static_cast<std::size_t>(m)],
                    smc[static_cast<std::size_t>(m) - 1][a]);
    }
    if (abs(r).cmp(worst) > 0) worst = abs(r);
  }
  return worst;
}

// Intermediate-normalization defect |c^(n).S.c^(0)| for tests.
inline HPReal normalization_defect(const PerturbationState& st, int n) {
  if (n < 1 || static_cast<std::size_t>(n) >= st.corrections.size()) {
    throw DomainError("normalization order out of range");
  }
  HPVector sc0 = matvec(st.ops.S, st.corrections[0]);
  return abs(dot(st.corrections[static_cast<std::size_t>(n)], sc0));
}

// Convert a recursion run into an exchange series. The whole recursion is
// re-run at widened precision and per-order agreement between the two runs
// determines how many digits each coefficient can be trusted to.
inline CoefficientSeries to_series(const PerturbationState& st) {
  const PrecisionConfig cfg = st.ops.basis.config();
  const int omega = st.ops.basis.omega();
  const int max_order = static_cast<int>(st.energies.size()) - 1;

  PrecisionConfig wide = cfg.widened(10);
  HPReal alpha_wide(st.ops.basis.alpha(), wide);
  BasisSet wide_basis = enumerate_basis(omega, alpha_wide, wide);
  PerturbationState check = run_recursion(assemble(wide_basis), max_order);

  std::vector<CoefficientEntry> entries;
  entries.reserve(st.energies.size());
  for (int n = 0; n <= max_order; ++n) {
    const HPReal& v = st.energies[static_cast<std::size_t>(n)];
    long trusted = matching_significant_digits(
        v, check.energies[static_cast<std::size_t>(n)]);
    entries.push_back(CoefficientEntry{n, v, trusted});
  }
  Provenance prov;
  prov.kind = ProvenanceKind::computed;
  prov.omega = omega;
  prov.alpha = format_decimal(st.ops.basis.alpha(), 10);
  prov.digits = cfg.digits();
  return CoefficientSeries(std::move(entries), std::move(prov));
}

}  // namespace zexp
