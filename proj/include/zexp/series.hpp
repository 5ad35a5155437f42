#pragma once

// Summation of the coefficient series to physical energies and radius of
// convergence estimation from coefficient ratios.
//
// E(Z) = Z^2 * sum_n e_n lambda^n with lambda = 1/Z. The partial sum is
// evaluated by Horner's scheme in lambda and the Z^2 factor applied last.
// The reported tail bound is a declared heuristic, a geometric tail fitted
// from the last two coefficients:
//
//   tail = Z^2 * |e_N| * lambda^(N+1) / (1 - lambda*rho),  rho = |e_N/e_{N-1}|,
//
// with the denominator clamped from below so the bound stays finite and
// positive when lambda*rho approaches or exceeds 1.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"
#include "precision.hpp"

namespace zexp {

struct ChargeSpec {
  std::string label;  // input text, kept for reporting
  HPReal z;
  HPReal lambda;
};

inline ChargeSpec make_charge_rational(long num, long den, const PrecisionConfig& cfg) {
  if (num <= 0 || den <= 0) {
    throw DomainError("nuclear charge must be positive");
  }
  HPReal z(num, cfg);
  z = z.div_si(den);
  HPReal lambda(den, cfg);
  lambda = lambda.div_si(num);
  std::string label = den == 1 ? std::to_string(num)
                               : std::to_string(num) + "/" + std::to_string(den);
  return ChargeSpec{std::move(label), std::move(z), std::move(lambda)};
}

inline ChargeSpec make_charge_integer(long z, const PrecisionConfig& cfg) {
  return make_charge_rational(z, 1, cfg);
}

inline ChargeSpec make_charge_decimal(const std::string& text, const PrecisionConfig& cfg) {
  HPReal z = parse_decimal(text, cfg);
  if (z.sign() <= 0) {
    throw DomainError("nuclear charge must be positive, got " + text);
  }
  HPReal one(1L, cfg);
  return ChargeSpec{text, z, one / z};
}

struct IndexWindow {
  int lo = 0;
  int hi = 0;
};

enum class RadiusMethod { ratio, domb_sykes };

inline const char* radius_method_name(RadiusMethod m) {
  return m == RadiusMethod::ratio ? "ratio" : "domb-sykes";
}

struct RadiusEstimate {
  HPReal lambda_star;
  RadiusMethod method;
  IndexWindow window;
  HPReal residual;
  std::optional<HPReal> gamma;  // singularity exponent, domb-sykes only
};

struct EnergyResult {
  HPReal energy;
  int order_used = 0;
  HPReal tail_bound;
  ChargeSpec charge;
  bool outside_radius = false;
};

inline EnergyResult sum_energy(const CoefficientSeries& series, const ChargeSpec& charge,
                               const PrecisionConfig& cfg,
                               const std::optional<RadiusEstimate>& radius = std::nullopt) {
  const int N = series.order();
  const HPReal& lambda = charge.lambda;

  HPReal acc(series.value(N), cfg);
  for (int n = N - 1; n >= 0; --n) {
    HPReal next(series.value(n), cfg);
    next.add_product(acc, lambda);
    acc = std::move(next);
  }
  HPReal z2 = charge.z * charge.z;
  HPReal energy = z2 * acc;

  HPReal denom(1L, cfg);
  if (N >= 1 && series.value(N - 1).sign() != 0) {
    HPReal rho = abs(series.value(N) / series.value(N - 1));
    denom.sub_product(lambda, rho);
  } else if (N >= 1) {
    // previous coefficient vanished, the ratio heuristic degenerates; fall
    // through to the clamp below
    denom = HPReal(cfg);
  }
  HPReal floor = HPReal(1L, cfg).mul_2si(-8);
  if (denom.cmp(floor) < 0) denom = floor;

  HPReal tail = abs(series.value(N)) * pow_si(lambda, N + 1);
  tail = tail * z2 / denom;

  bool outside = radius.has_value() && lambda.cmp(radius->lambda_star) >= 0;
  return EnergyResult{std::move(energy), N, std::move(tail), charge, outside};
}

namespace detail {

inline void check_ratio_window(const CoefficientSeries& series, const IndexWindow& w) {
  if (w.lo < 1 || w.hi > series.order() || w.lo > w.hi) {
    throw DomainError("ratio window [" + std::to_string(w.lo) + "," +
                      std::to_string(w.hi) + "] is outside series orders 1.." +
                      std::to_string(series.order()));
  }
  if (w.hi - w.lo + 1 < 3) {
    throw DomainError("ratio window must contain at least 3 orders");
  }
  for (int n = w.lo - 1; n <= w.hi; ++n) {
    if (series.value(n).sign() == 0) {
      throw DomainError("zero coefficient e_" + std::to_string(n) +
                        " inside the ratio window");
    }
  }
}

}  // namespace detail

// lambda* as the mean of |e_{n-1}/e_n| over the window; the residual is the
// largest deviation of a single inverse ratio from that mean.
inline RadiusEstimate ratio_radius(const CoefficientSeries& series, const IndexWindow& window,
                                   const PrecisionConfig& cfg) {
  detail::check_ratio_window(series, window);
  std::vector<HPReal> inv;
  inv.reserve(static_cast<std::size_t>(window.hi - window.lo + 1));
  for (int n = window.lo; n <= window.hi; ++n) {
    inv.push_back(abs(series.value(n - 1) / series.value(n)));
  }
  HPReal mean(cfg);
  for (const HPReal& r : inv) mean = mean + r;
  mean = mean.div_si(static_cast<long>(inv.size()));
  HPReal residual(cfg);
  for (const HPReal& r : inv) {
    HPReal d = abs(r - mean);
    if (d.cmp(residual) > 0) residual = d;
  }
  return RadiusEstimate{mean, RadiusMethod::ratio, window, residual, std::nullopt};
}

// Least-squares fit of y_n = |e_n/e_{n-1}| against 1/n,
//
//   y_n = A + C/n,  A = 1/lambda*,  C = -A*(1+gamma),
//
// so a function with a (1 - lambda/lambda*)^gamma singularity is recovered
// with both its radius and exponent. The residual is the worst-case fit
// deviation over the window.
inline RadiusEstimate domb_sykes_radius(const CoefficientSeries& series,
                                        const IndexWindow& window,
                                        const PrecisionConfig& cfg) {
  detail::check_ratio_window(series, window);
  HPReal sx(cfg), sy(cfg), sxx(cfg), sxy(cfg);
  std::vector<std::pair<HPReal, HPReal>> pts;
  pts.reserve(static_cast<std::size_t>(window.hi - window.lo + 1));
  for (int n = window.lo; n <= window.hi; ++n) {
    HPReal x = HPReal(1L, cfg).div_si(n);
    HPReal y = abs(series.value(n) / series.value(n - 1));
    sx = sx + x;
    sy = sy + y;
    sxx.add_product(x, x);
    sxy.add_product(x, y);
    pts.emplace_back(std::move(x), std::move(y));
  }
  HPReal count(static_cast<long>(pts.size()), cfg);
  HPReal det = count * sxx;
  det.sub_product(sx, sx);
  if (det.sign() == 0) {
    throw DomainError("rank-deficient ratio fit");
  }
  HPReal a = sxx * sy;
  a.sub_product(sx, sxy);
  a = a / det;
  HPReal c = count * sxy;
  c.sub_product(sx, sy);
  c = c / det;

  if (a.sign() <= 0) {
    throw DomainError("fitted asymptotic ratio is not positive; the series does "
                      "not look like a finite-radius power series on this window");
  }
  HPReal residual(cfg);
  for (const auto& [x, y] : pts) {
    HPReal fit = a;
    fit.add_product(c, x);
    HPReal d = abs(y - fit);
    if (d.cmp(residual) > 0) residual = d;
  }
  HPReal lambda_star = HPReal(1L, cfg) / a;
  HPReal gamma = -(c / a) - HPReal(1L, cfg);
  return RadiusEstimate{std::move(lambda_star), RadiusMethod::domb_sykes, window,
                        std::move(residual), std::move(gamma)};
}

}  // namespace zexp
