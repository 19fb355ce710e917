#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "lrv/autodiff.hpp"
#include "lrv/normal.hpp"

namespace lrv::models {

// European call in the Black-Scholes model, parameter point
// p = (xi, T, r, sigma, K).
struct BsCallParams {
  double spot = 100.0;      // xi
  double maturity = 1.0;    // T
  double rate = 0.0;        // r
  double vol = 0.2;         // sigma
  double strike = 100.0;    // K

  static BsCallParams from_point(std::span<const double> p) {
    if (p.size() != 5) throw std::invalid_argument("BsCallParams: expected 5 coordinates");
    return {p[0], p[1], p[2], p[3], p[4]};
  }
};

// Discounted call payoff along the terminal-price map
// X = xi * exp((r - sigma^2/2) T + sigma sqrt(T) w).
template <class S>
S bs_call_payoff(const BsCallParams& p, const S& w) {
  const double drift = (p.rate - 0.5 * p.vol * p.vol) * p.maturity;
  const double volT = p.vol * std::sqrt(p.maturity);
  const double disc = std::exp(-p.rate * p.maturity);
  S x = ad::affine(ad::exp(ad::affine(w, volT, drift)), p.spot, -p.strike);
  return ad::affine(ad::max0(x), disc, 0.0);
}

// Antithetic payoff, even in w.
template <class S>
S bs_call_payoff_antithetic(const BsCallParams& p, const S& w) {
  return (bs_call_payoff(p, w) + bs_call_payoff(p, -w)) / 2.0;
}

// Closed-form price (normal CDF branch for K > 0, linear branch otherwise).
inline double bs_call_exact(const BsCallParams& p) {
  const double disc = std::exp(-p.rate * p.maturity);
  if (p.strike <= 0.0) return p.spot - p.strike * disc;
  const double sT = p.vol * std::sqrt(p.maturity);
  const double lg = std::log(p.spot / p.strike);
  const double d1 = ((p.rate + 0.5 * p.vol * p.vol) * p.maturity + lg) / sT;
  const double d2 = ((p.rate - 0.5 * p.vol * p.vol) * p.maturity + lg) / sT;
  return p.spot * normal_cdf(d1) - p.strike * disc * normal_cdf(d2);
}

}  // namespace lrv::models
