#include "lrv/eval.hpp"

#include <cmath>

namespace lrv {

double binomial_tail_half(int n, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  const double log_half_n = -n * std::log(2.0);
  double tail = 0.0;
  for (int j = k; j <= n; ++j) {
    const double log_c =
        std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    tail += std::exp(log_c + log_half_n);
  }
  return std::min(1.0, tail);
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace lrv
