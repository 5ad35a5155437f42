#pragma once

// Explicitly correlated exponential-polynomial basis for S states of a
// two-electron atom, and the closed-form radial integral every matrix
// element reduces to.
//
// A basis term (i,j,k) stands for the symmetrized function
//
//     phi = (r1^i r2^j + r1^j r2^i) r12^k exp(-alpha (r1 + r2)) / w,
//
// with w = 2 when i = j and w = 1 otherwise, restricted to i <= j and
// i + j + k <= omega.
//
// After the angular variables are integrated out, every matrix element is a
// combination of
//
//     I(l,m,n; a,b) = int dr1 dr2 dr12  r1^(l+1) r2^(m+1) r12^(n+1)
//                     exp(-a r1 - b r2)
//
// over the wedge |r1 - r2| <= r12 <= r1 + r2. The constant angular factor
// 8 pi^2 is divided out of every matrix uniformly, so it never appears.
// Because the integrand carries powers l+1, m+1, n+1, the integral is finite
// for all indices >= -1.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "precision.hpp"

namespace zexp {

struct HylleraasTerm {
  int i = 0;
  int j = 0;
  int k = 0;

  friend bool operator==(const HylleraasTerm& a, const HylleraasTerm& b) {
    return a.i == b.i && a.j == b.j && a.k == b.k;
  }
};

// Closed-form count of canonical terms with i <= j and i + j + k <= omega.
inline long basis_size(int omega) {
  if (omega < 0) throw DomainError("basis_size: omega must be non-negative");
  long w = omega;
  return (w + 2) * (w + 4) * (2 * w + 3) / 24;
}

class BasisSet {
 public:
  BasisSet(int omega, HPReal alpha, std::vector<HylleraasTerm> terms,
           const PrecisionConfig& cfg)
      : omega_(omega), alpha_(std::move(alpha)), terms_(std::move(terms)), cfg_(cfg) {}

  int omega() const noexcept { return omega_; }
  const HPReal& alpha() const noexcept { return alpha_; }
  const std::vector<HylleraasTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const PrecisionConfig& config() const noexcept { return cfg_; }

 private:
  int omega_;
  HPReal alpha_;
  std::vector<HylleraasTerm> terms_;
  PrecisionConfig cfg_;
};

// Enumerate the basis ordered by (i+j+k, i, j, k) ascending. Term 0 is
// always (0,0,0), the unperturbed hydrogenic product state.
inline BasisSet enumerate_basis(int omega, const HPReal& alpha,
                                const PrecisionConfig& cfg) {
  if (omega < 0 || omega > 28) {
    throw DomainError("enumerate_basis: omega must be in [0, 28], got " +
                      std::to_string(omega));
  }
  if (alpha.sign() <= 0) {
    throw DomainError("enumerate_basis: alpha must be positive");
  }
  std::vector<HylleraasTerm> terms;
  terms.reserve(static_cast<std::size_t>(basis_size(omega)));
  for (int shell = 0; shell <= omega; ++shell) {
    for (int i = 0; 2 * i <= shell; ++i) {
      for (int j = i; i + j <= shell; ++j) {
        terms.push_back(HylleraasTerm{i, j, shell - i - j});
      }
    }
  }
  return BasisSet(omega, HPReal(alpha, cfg), std::move(terms), cfg);
}

namespace detail {

// W(p,a; q,b) = int_0^inf dy y^q e^(-b y) int_0^y dx x^p e^(-a x).
//
// The textbook finite form (q!/b^(q+1) minus a partial sum) cancels
// catastrophically for large p, so this evaluates the equivalent positive
// tail series
//
//     W = p!/a^(p+1) * sum_(s>p) a^s (q+s)! / (s! (a+b)^(q+s+1)),
//
// whose term ratio tends to a/(a+b) < 1. Every summand is positive, so the
// accumulated relative error stays at a few ulps. The loop stops once the
// geometric bound on the remaining tail drops below the target precision.
inline HPReal nested_exponential_moment(long p, const HPReal& a, long q,
                                        const HPReal& b, const PrecisionConfig& cfg) {
  const HPReal ab = a + b;
  HPReal term = pow_si(a, p + 1) / pow_si(ab, q + p + 2);
  for (long s = p + 2; s <= q + p + 1; ++s) term = term.mul_si(s);  // (q+p+1)!/(p+1)!
  HPReal sum = term;

  // Terms start decreasing once s exceeds roughly a*q/b.
  double ad = a.to_double(), bd = b.to_double();
  long s_decreasing = static_cast<long>(ad * static_cast<double>(q) / bd) + 2;
  const long guard_bits = static_cast<long>(cfg.bits()) + 6;

  long s = p + 1;
  for (long iter = 0; iter < 1000000; ++iter) {
    term = term * a;
    term = term.mul_si(q + s + 1).div_si(s + 1) / ab;
    sum += term;
    ++s;
    if (s >= s_decreasing && term < sum.mul_2si(-guard_bits)) {
      // Remaining tail is below term * r / (1 - r) with the current ratio r < 1.
      HPReal r = (a.mul_si(q + s + 1)).div_si(s + 1) / ab;
      if (r < HPReal(1, cfg)) {
        HPReal bound = term * r / (HPReal(1, cfg) - r);
        if (bound < sum.mul_2si(-guard_bits)) break;
      }
    }
    if (iter == 999999) {
      throw DomainError("nested exponential moment series did not converge");
    }
  }

  HPReal fact_p(1, cfg);
  for (long t = 2; t <= p; ++t) fact_p = fact_p.mul_si(t);
  return fact_p / pow_si(a, p + 1) * sum;
}

}  // namespace detail

// I(l,m,n; alpha,beta) over the wedge domain. Splitting the wedge at
// r1 = r2 and expanding (y +- x)^(n+2) binomially gives
//
//   I = (2/N) * sum over odd k in [1, N] of C(N,k) *
//       [ W(l+1+k, alpha; m+1+N-k, beta) + W(m+1+k, beta; l+1+N-k, alpha) ],
//
// with N = n + 2. All summands are positive: no cancellation anywhere.
inline HPReal radial_integral(int l, int m, int n, const HPReal& alpha,
                              const HPReal& beta, const PrecisionConfig& cfg) {
  auto check_index = [](int v, const char* name) {
    if (v < -1) {
      throw DomainError(std::string("radial_integral: index ") + name +
                        " must be >= -1, got " + std::to_string(v));
    }
  };
  check_index(l, "l");
  check_index(m, "m");
  check_index(n, "n");
  if (alpha.sign() <= 0 || beta.sign() <= 0) {
    throw DomainError("radial_integral: exponents must be positive");
  }
  const long N = n + 2;
  if (N > 62) {
    throw DomainError("radial_integral: correlation power too large for exact "
                      "binomial coefficients");
  }

  HPReal sum(cfg);
  long long binom = N;  // C(N, 1)
  for (long k = 1; k <= N; k += 2) {
    HPReal w1 = detail::nested_exponential_moment(l + 1 + k, alpha, m + 1 + N - k,
                                                  beta, cfg);
    HPReal w2 = detail::nested_exponential_moment(m + 1 + k, beta, l + 1 + N - k,
                                                  alpha, cfg);
    HPReal bracket = w1 + w2;
    sum += bracket.mul_si(static_cast<long>(binom));
    if (k + 2 <= N) {
      binom = static_cast<long long>(static_cast<__int128>(binom) * (N - k) / (k + 1));
      binom = static_cast<long long>(static_cast<__int128>(binom) * (N - k - 1) / (k + 2));
    }
  }
  return sum.mul_si(2).div_si(N);
}

}  // namespace zexp
