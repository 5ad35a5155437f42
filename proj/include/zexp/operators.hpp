#pragma once

// Assembly of the overlap, unperturbed-Hamiltonian, and electron-repulsion
// matrices over a Hylleraas basis.
//
// Working in the scaled coordinates where the nucleus has unit charge, the
// matrix elements are
//
//     S[a][b]  = <phi_a | phi_b>
//     H0[a][b] = <phi_a | -1/2 (Lap1 + Lap2) - 1/r1 - 1/r2 | phi_b>
//     V[a][b]  = <phi_a | 1/r12 | phi_b>
//
// The kinetic part uses the gradient (weak) form, which for S states reads
//
//     <f| -1/2 (Lap1+Lap2) |g> = 1/2 int (grad1 f . grad1 g + grad2 f . grad2 g)
//
// with, in the internal coordinates (r1, r2, r12),
//
//     grad1 f . grad1 g = f_r1 g_r1 + f_r12 g_r12
//         + (r1^2 + r12^2 - r2^2)/(2 r1 r12) (f_r1 g_r12 + f_r12 g_r1).
//
// Expanding on primitives u = r1^i r2^j r12^k E, v = r1^p r2^q r12^t E with
// E = exp(-alpha(r1+r2)) turns every pairing into a short list of monomials
// r1^l r2^m r12^n with exact rational coefficients times powers of alpha.
// Coefficients stay exact integers/rationals until the single multiply by
// the cached radial integral at the end. All integrals carry exponents
// (2 alpha, 2 alpha), and every surviving monomial has l, m, n >= -1.

#include <array>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hylleraas.hpp"
#include "linalg.hpp"
#include "precision.hpp"

namespace zexp {

namespace detail {

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }
  explicit Rational(long long n) : num(n), den(1) {}

  void normalize() {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      den = 1;
      return;
    }
    long long g = std::gcd(std::llabs(num), den);
    num /= g;
    den /= g;
  }

  bool is_zero() const noexcept { return num == 0; }

  Rational& operator+=(const Rational& o) {
    num = num * o.den + o.num * den;
    den = den * o.den;
    normalize();
    return *this;
  }

  Rational operator-() const { return Rational(-num, den); }
};

struct MonomialKey {
  int l = 0;
  int m = 0;
  int n = 0;
  int alpha_power = 0;

  friend bool operator<(const MonomialKey& a, const MonomialKey& b) {
    if (a.l != b.l) return a.l < b.l;
    if (a.m != b.m) return a.m < b.m;
    if (a.n != b.n) return a.n < b.n;
    return a.alpha_power < b.alpha_power;
  }
};

// Monomial sums keep exact rational coefficients; entries that cancel to
// zero are erased so no spurious key (possibly with an out-of-domain power)
// survives.
using MonomialSum = std::map<MonomialKey, Rational>;

inline void accumulate(MonomialSum& dst, int l, int m, int n, int alpha_power,
                       Rational c) {
  if (c.is_zero()) return;
  MonomialKey key{l, m, n, alpha_power};
  auto it = dst.find(key);
  if (it == dst.end()) {
    dst.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) dst.erase(it);
}

inline void merge_scaled(MonomialSum& dst, const MonomialSum& src, int num,
                         int den) {
  for (const auto& [key, c] : src) {
    accumulate(dst, key.l, key.m, key.n, key.alpha_power,
               Rational(c.num * num, c.den * den));
  }
}

struct Primitive {
  int i = 0;
  int j = 0;
  int k = 0;
};

inline MonomialSum overlap_monomials(const Primitive& u, const Primitive& v) {
  MonomialSum out;
  accumulate(out, u.i + v.i, u.j + v.j, u.k + v.k, 0, Rational(1));
  return out;
}

inline MonomialSum repulsion_monomials(const Primitive& u, const Primitive& v) {
  MonomialSum out;
  accumulate(out, u.i + v.i, u.j + v.j, u.k + v.k - 1, 0, Rational(1));
  return out;
}

inline MonomialSum attraction_monomials(const Primitive& u, const Primitive& v) {
  MonomialSum out;
  accumulate(out, u.i + v.i - 1, u.j + v.j, u.k + v.k, 0, Rational(-1));
  accumulate(out, u.i + v.i, u.j + v.j - 1, u.k + v.k, 0, Rational(-1));
  return out;
}

// grad1 u . grad1 v expanded to monomials. The mixed-derivative weight
// (r1^2 + r12^2 - r2^2)/(2 r1 r12) contributes the three bracketed shifts.
inline MonomialSum gradient_axis1(const Primitive& u, const Primitive& v) {
  const int i = u.i, k = u.k, p = v.i, t = v.k;
  const int J = u.j + v.j;
  MonomialSum out;

  // radial x radial
  accumulate(out, i + p - 2, J, k + t, 0, Rational(static_cast<long long>(i) * p));
  accumulate(out, i + p - 1, J, k + t, 1, Rational(-(i + p)));
  accumulate(out, i + p, J, k + t, 2, Rational(1));
  // correlation x correlation
  accumulate(out, i + p, J, k + t - 2, 0, Rational(static_cast<long long>(k) * t));
  // mixed
  const Rational c1(static_cast<long long>(i) * t + static_cast<long long>(k) * p, 2);
  const Rational c2(-(k + t), 2);
  accumulate(out, i + p, J, k + t - 2, 0, c1);
  accumulate(out, i + p - 2, J, k + t, 0, c1);
  accumulate(out, i + p - 2, J + 2, k + t - 2, 0, -c1);
  accumulate(out, i + p + 1, J, k + t - 2, 1, c2);
  accumulate(out, i + p - 1, J, k + t, 1, c2);
  accumulate(out, i + p - 1, J + 2, k + t - 2, 1, -c2);
  return out;
}

inline MonomialSum swap_particles(const MonomialSum& src) {
  MonomialSum out;
  for (const auto& [key, c] : src) {
    accumulate(out, key.m, key.l, key.n, key.alpha_power, c);
  }
  return out;
}

inline MonomialSum kinetic_monomials(const Primitive& u, const Primitive& v) {
  MonomialSum g = gradient_axis1(u, v);
  Primitive us{u.j, u.i, u.k};
  Primitive vs{v.j, v.i, v.k};
  MonomialSum g2 = swap_particles(gradient_axis1(us, vs));
  MonomialSum out;
  merge_scaled(out, g, 1, 2);
  merge_scaled(out, g2, 1, 2);
  return out;
}

inline std::vector<Primitive> expand_term(const HylleraasTerm& t) {
  if (t.i == t.j) return {Primitive{t.i, t.j, t.k}};
  return {Primitive{t.i, t.j, t.k}, Primitive{t.j, t.i, t.k}};
}

// Memoized radial integrals at exponents (2 alpha, 2 alpha).
class IntegralCache {
 public:
  IntegralCache(const HPReal& alpha, const PrecisionConfig& cfg)
      : two_alpha_(alpha + alpha), cfg_(cfg) {}

  const HPReal& get(int l, int m, int n) {
    std::array<int, 3> key{l, m, n};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    HPReal value = radial_integral(l, m, n, two_alpha_, two_alpha_, cfg_);
    return cache_.emplace(key, std::move(value)).first->second;
  }

  std::size_t size() const noexcept { return cache_.size(); }

 private:
  HPReal two_alpha_;
  PrecisionConfig cfg_;
  std::map<std::array<int, 3>, HPReal> cache_;
};

inline HPReal evaluate_monomials(const MonomialSum& sum,
                                 const std::array<HPReal, 3>& alpha_powers,
                                 IntegralCache& cache, const PrecisionConfig& cfg) {
  HPReal acc(cfg);
  for (const auto& [key, c] : sum) {
    if (key.l < -1 || key.m < -1 || key.n < -1) {
      throw DomainError("operator expansion produced an out-of-domain power ("
                        + std::to_string(key.l) + "," + std::to_string(key.m) +
                        "," + std::to_string(key.n) + ")");
    }
    HPReal term = cache.get(key.l, key.m, key.n) * alpha_powers[key.alpha_power];
    term = term.mul_si(c.num).div_si(c.den);
    acc += term;
  }
  return acc;
}

}  // namespace detail

struct OperatorMatrices {
  BasisSet basis;
  HPMatrix S;   // overlap
  HPMatrix H0;  // kinetic plus nuclear attraction
  HPMatrix V;   // electron repulsion
};

// Build all three matrices in one sweep over the upper triangle; each
// symmetric pair of entries is written from the single computed value, so
// the matrices are symmetric exactly, entry for entry.
inline OperatorMatrices assemble(const BasisSet& basis) {
  const PrecisionConfig& cfg = basis.config();
  const std::size_t M = basis.size();
  if (M == 0) throw DomainError("assemble: empty basis");

  detail::IntegralCache cache(basis.alpha(), cfg);
  const std::array<HPReal, 3> alpha_powers{
      HPReal(1, cfg), basis.alpha(), basis.alpha() * basis.alpha()};

  HPMatrix S(M, M, cfg), H0(M, M, cfg), V(M, M, cfg);
  for (std::size_t b = 0; b < M; ++b) {
    const auto prims_b = detail::expand_term(basis.terms()[b]);
    for (std::size_t a = 0; a <= b; ++a) {
      const auto prims_a = detail::expand_term(basis.terms()[a]);
      detail::MonomialSum s_mon, v_mon, h_mon;
      for (const auto& pu : prims_a) {
        for (const auto& pv : prims_b) {
          detail::merge_scaled(s_mon, detail::overlap_monomials(pu, pv), 1, 1);
          detail::merge_scaled(v_mon, detail::repulsion_monomials(pu, pv), 1, 1);
          detail::merge_scaled(h_mon, detail::kinetic_monomials(pu, pv), 1, 1);
          detail::merge_scaled(h_mon, detail::attraction_monomials(pu, pv), 1, 1);
        }
      }
      HPReal s_val = detail::evaluate_monomials(s_mon, alpha_powers, cache, cfg);
      HPReal v_val = detail::evaluate_monomials(v_mon, alpha_powers, cache, cfg);
      HPReal h_val = detail::evaluate_monomials(h_mon, alpha_powers, cache, cfg);
      S.at(b, a) = s_val;
      S.at(a, b) = std::move(s_val);
      V.at(b, a) = v_val;
      V.at(a, b) = std::move(v_val);
      H0.at(b, a) = h_val;
      H0.at(a, b) = std::move(h_val);
    }
  }
  return OperatorMatrices{basis, std::move(S), std::move(H0), std::move(V)};
}

}  // namespace zexp
