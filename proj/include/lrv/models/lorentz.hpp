#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

#include "lrv/autodiff.hpp"

namespace lrv::models {

// Stochastic Lorentz equation, parameter point p = (T, alpha_1..3, beta_1..3, x_1..3).
struct LorentzParams {
  double horizon = 1.0;             // T
  std::array<double, 3> alpha{};    // drift parameters
  std::array<double, 3> noise{};    // beta, additive noise scales
  std::array<double, 3> x0{};       // initial state
  int steps = 25;                   // N

  static LorentzParams from_point(std::span<const double> p, int steps = 25) {
    if (p.size() != 10) throw std::invalid_argument("LorentzParams: expected 10 coordinates");
    return {p[0], {p[1], p[2], p[3]}, {p[4], p[5], p[6]}, {p[7], p[8], p[9]}, steps};
  }
};

// mu_alpha(x) = (alpha1 (x2 - x1), alpha2 x1 - x2 - x1 x3, x1 x2 - alpha3 x3).
template <class S>
std::array<S, 3> lorentz_drift(const std::array<double, 3>& alpha, const std::array<S, 3>& x) {
  std::array<S, 3> mu;
  mu[0] = alpha[0] * (x[1] - x[0]);
  mu[1] = alpha[1] * x[0] - x[1] - x[0] * x[2];
  mu[2] = x[0] * x[1] - alpha[2] * x[2];
  return mu;
}

// Heun step with additive noise:
//   X_n = X_{n-1} + sqrt(T/N) (beta . w_n)
//         + (T/2N) [mu(X_{n-1}) + mu(X_{n-1} + (T/N) mu(X_{n-1}) + sqrt(T/N)(beta . w_n))].
template <class S>
std::array<S, 3> lorentz_heun_terminal(const LorentzParams& p, std::span<const S> w) {
  if (static_cast<int>(w.size()) != 3 * p.steps) {
    throw std::invalid_argument("lorentz_heun_terminal: noise length must be 3*steps");
  }
  const double h = p.horizon / p.steps;
  const double sq = std::sqrt(h);
  std::array<S, 3> x{S(p.x0[0]), S(p.x0[1]), S(p.x0[2])};
  for (int n = 0; n < p.steps; ++n) {
    std::array<S, 3> dw;
    for (int i = 0; i < 3; ++i) dw[i] = ad::affine(w[3 * n + i], sq * p.noise[i], 0.0);
    const auto m1 = lorentz_drift(p.alpha, x);
    std::array<S, 3> pred;
    for (int i = 0; i < 3; ++i) pred[i] = x[i] + h * m1[i] + dw[i];
    const auto m2 = lorentz_drift(p.alpha, pred);
    for (int i = 0; i < 3; ++i) x[i] = x[i] + dw[i] + (0.5 * h) * (m1[i] + m2[i]);
  }
  return x;
}

// Phi_0(p, w) = ||X_N||^2; Phi_1 averages the payoff at +/-w.
template <class S>
S lorentz_payoff(const LorentzParams& p, std::span<const S> w, bool antithetic) {
  const auto xT = lorentz_heun_terminal(p, w);
  S g = xT[0] * xT[0] + xT[1] * xT[1] + xT[2] * xT[2];
  if (!antithetic) return g;
  thread_local std::vector<S> neg;
  neg.assign(w.begin(), w.end());
  for (S& v : neg) v = -v;
  const auto xm = lorentz_heun_terminal(p, std::span<const S>(neg));
  S gm = xm[0] * xm[0] + xm[1] * xm[1] + xm[2] * xm[2];
  return (g + gm) / 2.0;
}

}  // namespace lrv::models
