#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lrv/autodiff.hpp"
#include "lrv/param_domain.hpp"

namespace lrv::models {

// Three-asset Black-Scholes basket, parameter point
// p = (xi_1..3, T, r, delta_1..3, sigma_1..3, rho_1..3, K[, B]).
struct BasketParams {
  std::array<double, 3> spot{};
  double maturity = 1.0;
  double rate = 0.0;
  std::array<double, 3> dividend{};
  std::array<double, 3> vol{};
  std::array<double, 3> rho{};
  double strike = 100.0;
  double barrier = 0.0;
  bool has_barrier = false;

  static BasketParams worst_of_from_point(std::span<const double> p) {
    if (p.size() != 15) throw std::invalid_argument("BasketParams: expected 15 coordinates");
    BasketParams b;
    b.spot = {p[0], p[1], p[2]};
    b.maturity = p[3];
    b.rate = p[4];
    b.dividend = {p[5], p[6], p[7]};
    b.vol = {p[8], p[9], p[10]};
    b.rho = {p[11], p[12], p[13]};
    b.strike = p[14];
    return b;
  }

  static BasketParams barrier_from_point(std::span<const double> p) {
    if (p.size() != 16) throw std::invalid_argument("BasketParams: expected 16 coordinates");
    BasketParams b = worst_of_from_point(p.first(15));
    b.strike = p[14];
    b.barrier = p[15];
    b.has_barrier = true;
    return b;
  }
};

// Closed-form lower-triangular factor with L(rho) L(rho)^T = Q(rho).
// Requires region_check(rho).
inline std::array<std::array<double, 3>, 3> cholesky_l(const std::array<double, 3>& rho) {
  if (!region_check(rho)) {
    throw std::domain_error("cholesky_l: rho outside the admissible region");
  }
  const double r1 = rho[0], r2 = rho[1], r3 = rho[2];
  const double s1 = std::sqrt(1.0 - r1 * r1);
  const double t = (r3 - r1 * r2) / s1;
  const double s2 = std::sqrt(correlation_pivot(r1, r2, r3));
  return {{{1.0, 0.0, 0.0}, {r1, s1, 0.0}, {r2, t, s2}}};
}

namespace detail {

// <L(rho) w, e_i> for the lower-triangular factor.
template <class S>
std::array<S, 3> correlate(const std::array<std::array<double, 3>, 3>& L,
                           std::span<const S> w) {
  std::array<S, 3> z;
  z[0] = ad::affine(w[0], L[0][0], 0.0);
  z[1] = L[1][0] * w[0] + L[1][1] * w[1];
  z[2] = L[2][0] * w[0] + L[2][1] * w[1] + L[2][2] * w[2];
  return z;
}

}  // namespace detail

// Discounted worst-of put payoff: exp(-rT) max{K - min_i X_i, 0} with
// X_i = xi_i exp([r - delta_i - sigma_i^2/2] T + sqrt(T) sigma_i <L(rho)w, e_i>).
template <class S>
S worst_of_put_payoff(const BasketParams& p, std::span<const S> w) {
  const auto L = cholesky_l(p.rho);
  const auto z = detail::correlate(L, w);
  const double sqT = std::sqrt(p.maturity);
  S worst;
  for (int i = 0; i < 3; ++i) {
    const double drift = (p.rate - p.dividend[i] - 0.5 * p.vol[i] * p.vol[i]) * p.maturity;
    S xi = ad::affine(ad::exp(ad::affine(z[i], sqT * p.vol[i], drift)), p.spot[i], 0.0);
    worst = (i == 0) ? xi : ad::vmin(worst, xi);
  }
  const double disc = std::exp(-p.rate * p.maturity);
  return ad::affine(ad::max0(p.strike - worst), disc, 0.0);
}

// Exact log-Euler GBM path on N steps; w has length 3N, path gets N+1 price
// triples with path[0] = xi.
template <class S>
std::vector<std::array<S, 3>> barrier_path(const BasketParams& p, std::span<const S> w, int steps) {
  if (static_cast<int>(w.size()) != 3 * steps) {
    throw std::invalid_argument("barrier_path: noise length must be 3*steps");
  }
  const auto L = cholesky_l(p.rho);
  const double dt = p.maturity / steps;
  const double sq = std::sqrt(dt);
  std::vector<std::array<S, 3>> path(steps + 1);
  for (int i = 0; i < 3; ++i) path[0][i] = S(p.spot[i]);
  for (int n = 1; n <= steps; ++n) {
    const auto z = detail::correlate(L, w.subspan(3 * (n - 1), 3));
    for (int i = 0; i < 3; ++i) {
      const double drift = dt * (p.rate - p.dividend[i] - 0.5 * p.vol[i] * p.vol[i]);
      path[n][i] = path[n - 1][i] * ad::exp(ad::affine(z[i], sq * p.vol[i], drift));
    }
  }
  return path;
}

// Knock-in probability along a discrete path, by Brownian-bridge crossing
// factors between consecutive monitoring times:
//   T_i = 1 if min{x_i, y_i} < B, else exp(-2 ln(x_i/B) ln(y_i/B) / (sigma_i^2 T/N)),
//   U = 1 - max_i T_i,  Lw = max{1 - sum_i T_i, 0},
//   P = (2 - prod U - prod Lw) / 2.
// The branch on min{x_i, y_i} is taken on values and treated as locally
// constant under differentiation.
template <class S>
S bridge_crossing_prob(const BasketParams& p, std::span<const std::array<S, 3>> path) {
  const int steps = static_cast<int>(path.size()) - 1;
  const double dt = p.maturity / steps;
  S prod_u = S(1.0);
  S prod_l = S(1.0);
  for (int n = 1; n <= steps; ++n) {
    const auto& x = path[n - 1];
    const auto& y = path[n];
    std::array<S, 3> t;
    for (int i = 0; i < 3; ++i) {
      if (std::min(ad::value(x[i]), ad::value(y[i])) < p.barrier) {
        t[i] = S(1.0);
      } else {
        const double c = -2.0 / (p.vol[i] * p.vol[i] * dt);
        t[i] = ad::exp(ad::affine(ad::log(x[i] / p.barrier) * ad::log(y[i] / p.barrier), c, 0.0));
      }
    }
    prod_u = prod_u * (1.0 - ad::vmax(t[0], ad::vmax(t[1], t[2])));
    prod_l = prod_l * ad::max0(1.0 - (t[0] + t[1] + t[2]));
  }
  return (2.0 - prod_u - prod_l) / 2.0;
}

// Knock-in average-basket put: P * exp(-rT) max{K - mean(X_N), 0}.
template <class S>
S barrier_avg_put_payoff(const BasketParams& p, std::span<const S> w, int steps) {
  const auto path = barrier_path(p, w, steps);
  S prob = bridge_crossing_prob<S>(p, std::span<const std::array<S, 3>>(path));
  const auto& xT = path[steps];
  S avg = (xT[0] + xT[1] + xT[2]) / 3.0;
  const double disc = std::exp(-p.rate * p.maturity);
  return prob * ad::affine(ad::max0(p.strike - avg), disc, 0.0);
}

}  // namespace lrv::models
