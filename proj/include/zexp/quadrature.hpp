#pragma once

// Numerical cross-check for the closed-form radial integral: nested
// Gauss-Legendre quadrature over the wedge domain, refined until the whole
// requested grid of (l,m,n) moments stabilizes. This path shares no algebra
// with radial_integral (no binomial split, no factorial series); it exists
// purely to verify it and is never called by the assembly.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "precision.hpp"

namespace zexp {

namespace detail {

struct GaussLegendreRule {
  std::vector<HPReal> nodes;  // on (-1, 1), ascending
  std::vector<HPReal> weights;
};

// Nodes as roots of the Legendre polynomial, polished by Newton iteration
// from double-precision seeds; weights 2 / ((1-x^2) P'(x)^2).
inline GaussLegendreRule gauss_legendre_rule(int order, const PrecisionConfig& cfg) {
  GaussLegendreRule rule;
  rule.nodes.reserve(order);
  rule.weights.reserve(order);
  const HPReal one(1, cfg);
  for (int i = 0; i < order; ++i) {
    double seed = -std::cos(3.14159265358979323846 * (i + 0.75) / (order + 0.5));
    HPReal x = parse_decimal(std::to_string(seed), cfg);
    HPReal dp(cfg);
    for (int iter = 0; iter < 60; ++iter) {
      HPReal p0(1, cfg), p1 = x;
      for (int d = 2; d <= order; ++d) {
        HPReal p2 = (x * p1).mul_si(2 * d - 1) - p0.mul_si(d - 1);
        p0 = std::move(p1);
        p1 = p2.div_si(d);
      }
      // P'(x) = order (x P(x) - P_(order-1)(x)) / (x^2 - 1)
      dp = (x * p1 - p0).mul_si(order) / (x * x - one);
      HPReal dx = p1 / dp;
      x -= dx;
      if (dx.is_zero() || abs(dx) < abs(x).mul_2si(-(cfg.bits() + 2))) break;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(HPReal(2, cfg) / ((one - x * x) * dp * dp));
  }
  return rule;
}

// Upper cutoff R with r^p exp(-c r) negligible beyond it at the target digits.
inline double exponential_cutoff(double c, int max_power, int target_digits) {
  double T = (target_digits + 10) * 2.302585092994046;
  double R = T / c;
  for (int t = 0; t < 6; ++t) {
    R = (T + (max_power + 2) * std::log(R)) / c;
  }
  return R * 1.05;
}

}  // namespace detail

struct IntegralGrid {
  int max_power = 0;
  std::vector<HPReal> values;
  int panels_used = 0;

  const HPReal& at(int l, int m, int n) const {
    const int span = max_power + 2;
    if (l < -1 || m < -1 || n < -1 || l > max_power || m > max_power ||
        n > max_power) {
      throw DomainError("IntegralGrid: index out of range");
    }
    return values[static_cast<std::size_t>((l + 1) +
                                           span * ((m + 1) + span * (n + 1)))];
  }
};

// All moments I(l,m,n; alpha,beta) for -1 <= l,m,n <= max_power, by nested
// quadrature: composite Gauss-Legendre panels on r1, on r2 (split at
// r2 = r1, where the wedge width has a kink), and a short rule on r12
// across [|r1-r2|, r1+r2] (the r12 integrand is a low-degree polynomial,
// which the short rule integrates exactly). The panel count doubles until
// the whole grid is stable to the requested digits.
inline IntegralGrid quadrature_integral_grid(int max_power, const HPReal& alpha,
                                             const HPReal& beta,
                                             const PrecisionConfig& cfg,
                                             int target_digits) {
  if (max_power < -1 || max_power > 8) {
    throw DomainError("quadrature_integral_grid: max_power must be in [-1, 8]");
  }
  if (alpha.sign() <= 0 || beta.sign() <= 0) {
    throw DomainError("quadrature_integral_grid: exponents must be positive");
  }
  if (target_digits < 6 || target_digits > cfg.digits() - 6) {
    throw DomainError("quadrature_integral_grid: target digits must be in [6, P-6]");
  }

  const int span = max_power + 2;
  const std::size_t bins = static_cast<std::size_t>(span) * span * span;
  const int gl_order = 32;
  const int r12_order = 8;
  const detail::GaussLegendreRule base = detail::gauss_legendre_rule(gl_order, cfg);
  const detail::GaussLegendreRule short12 = detail::gauss_legendre_rule(r12_order, cfg);

  const double R1 =
      detail::exponential_cutoff(alpha.to_double(), max_power + 2, target_digits);
  const double R2 =
      detail::exponential_cutoff(beta.to_double(), max_power + 2, target_digits);
  const HPReal hp_R1 = parse_decimal(std::to_string(R1), cfg);
  const HPReal hp_R2 = parse_decimal(std::to_string(R2), cfg);

  auto panel_points = [&](const HPReal& lo, const HPReal& hi, int count,
                          std::vector<std::pair<HPReal, HPReal>>& out) {
    out.clear();
    if ((hi - lo).sign() <= 0) return;
    HPReal width = (hi - lo).div_si(count);
    for (int p = 0; p < count; ++p) {
      HPReal a = lo + width.mul_si(p);
      HPReal mid = a + width.div_si(2);
      HPReal hw = width.div_si(2);
      for (int g = 0; g < gl_order; ++g) {
        out.emplace_back(mid + hw * base.nodes[g], hw * base.weights[g]);
      }
    }
  };

  auto evaluate = [&](int panels) {
    std::vector<HPReal> acc(bins, HPReal(cfg));
    std::vector<HPReal> pow1(static_cast<std::size_t>(span), HPReal(cfg));
    std::vector<HPReal> pow2(static_cast<std::size_t>(span), HPReal(cfg));
    std::vector<HPReal> mom(static_cast<std::size_t>(span), HPReal(cfg));
    std::vector<std::pair<HPReal, HPReal>> outer, inner_lo, inner_hi;

    panel_points(HPReal(cfg), hp_R1, panels, outer);
    for (const auto& [r1, w1] : outer) {
      pow1[0] = exp(-(alpha * r1)) * w1;  // r1^(l+1) weight at l = -1
      for (int t = 1; t < span; ++t) pow1[t] = pow1[t - 1] * r1;

      HPReal split = r1 < hp_R2 ? r1 : hp_R2;
      panel_points(HPReal(cfg), split, panels, inner_lo);
      panel_points(split, hp_R2, panels, inner_hi);

      auto inner_loop = [&](const std::vector<std::pair<HPReal, HPReal>>& pts) {
        for (const auto& [r2, w2] : pts) {
          pow2[0] = exp(-(beta * r2)) * w2;
          for (int t = 1; t < span; ++t) pow2[t] = pow2[t - 1] * r2;

          HPReal lo = abs(r1 - r2);
          HPReal hi = r1 + r2;
          HPReal mid = (lo + hi).div_si(2);
          HPReal hw = (hi - lo).div_si(2);
          for (int t = 0; t < span; ++t) mom[t] = HPReal(cfg);
          for (int g = 0; g < r12_order; ++g) {
            HPReal r12 = mid + hw * short12.nodes[g];
            HPReal w12 = hw * short12.weights[g];
            mom[0] += w12;
            for (int t = 1; t < span; ++t) {
              w12 = w12 * r12;
              mom[t] += w12;
            }
          }

          for (int nn = 0; nn < span; ++nn) {
            for (int mm = 0; mm < span; ++mm) {
              HPReal f = pow2[mm] * mom[nn];
              for (int ll = 0; ll < span; ++ll) {
                acc[static_cast<std::size_t>(ll) +
                    static_cast<std::size_t>(span) *
                        (static_cast<std::size_t>(mm) +
                         static_cast<std::size_t>(span) * nn)]
                    .add_product(pow1[ll], f);
              }
            }
          }
        }
      };
      inner_loop(inner_lo);
      inner_loop(inner_hi);
    }
    return acc;
  };

  HPReal tol = pow_si(HPReal(10, cfg), -target_digits - 2);
  std::vector<HPReal> prev = evaluate(4);
  for (int panels = 8; panels <= 32; panels *= 2) {
    std::vector<HPReal> cur = evaluate(panels);
    bool converged = true;
    for (std::size_t t = 0; t < bins; ++t) {
      HPReal diff = abs(cur[t] - prev[t]);
      HPReal scale = abs(cur[t]);
      if (scale.is_zero()) scale = HPReal(1, cfg);
      if (diff > scale * tol) {
        converged = false;
        break;
      }
    }
    if (converged) {
      IntegralGrid grid;
      grid.max_power = max_power;
      grid.values = std::move(cur);
      grid.panels_used = panels;
      return grid;
    }
    prev = std::move(cur);
  }
  throw DomainError("quadrature_integral_grid: refinement did not converge");
}

}  // namespace zexp
