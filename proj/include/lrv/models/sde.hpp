#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lrv/autodiff.hpp"

namespace lrv::models {

// Terminal value of the Euler-Maruyama recursion for an additive-noise SDE,
//   X_n = X_{n-1} + (T/N) mu(X_{n-1}) + sqrt(T/N) w_n,
// with w of length N*d. Drift is a callable mapping (span<const S> x,
// span<S> out).
template <class S, class Drift>
std::vector<S> euler_maruyama_terminal(const Drift& mu, std::span<const double> x0, double horizon,
                                       std::span<const S> w, int steps) {
  const int d = static_cast<int>(x0.size());
  if (static_cast<int>(w.size()) != steps * d) {
    throw std::invalid_argument("euler_maruyama_terminal: noise length must be steps*dim");
  }
  const double h = horizon / steps;
  const double sq = std::sqrt(h);
  std::vector<S> x(x0.begin(), x0.end());
  std::vector<S> drift(d);
  for (int n = 0; n < steps; ++n) {
    mu(std::span<const S>(x), std::span<S>(drift));
    for (int i = 0; i < d; ++i) {
      x[i] = x[i] + h * drift[i] + ad::affine(w[n * d + i], sq, 0.0);
    }
  }
  return x;
}

}  // namespace lrv::models
