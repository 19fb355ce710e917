#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lrv/autodiff.hpp"

namespace lrv::models {

// Semilinear heat equation kernel for multilevel Picard evaluation. The
// space-time point (t, x) is templated on the scalar type because the
// re-parameterization map feeds transported points (which depend on the
// trainable variables) back into the kernel.
//
//   phi(p, w, v) = g(x + sqrt(T - t) w1) + (T - t) f(v)
//   P(p, w)      = (t + w2 (T - t), x + sqrt(w2 (T - t)) w1)
//
// with w = (w1 in R^d, w2 in [0,1]), g(x) = ||x||^2 and f either zero or
// v -> f_scale * max{v, 0}.
struct HeatMlpModel {
  enum class Nonlinearity { Zero, ReluScaled };

  double terminal_time = 1.0;  // T
  int dim = 1;                 // d
  Nonlinearity f_kind = Nonlinearity::Zero;
  double f_scale = 1.0;

  template <class S>
  struct State {
    S t;
    std::vector<S> x;
  };

  // Per-sample block layout: d normals followed by one uniform coordinate.
  int sample_dim() const { return dim + 1; }
  int uniform_coord() const { return dim; }

  State<double> state_from_point(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != dim + 1) {
      throw std::invalid_argument("HeatMlpModel: expected 1+d coordinates");
    }
    State<double> s;
    s.t = p[0];
    s.x.assign(p.begin() + 1, p.end());
    return s;
  }

  template <class S>
  State<S> lift(const State<double>& s) const {
    State<S> out;
    out.t = S(s.t);
    out.x.assign(s.x.begin(), s.x.end());
    return out;
  }

  template <class S>
  S phi(const State<S>& p, std::span<const S> w, const S& v) const {
    S tau = terminal_time - p.t;
    S sq = ad::sqrt(tau);
    S g = S(0.0);
    for (int i = 0; i < dim; ++i) {
      S y = p.x[i] + sq * w[i];
      g += y * y;
    }
    switch (f_kind) {
      case Nonlinearity::Zero:
        return g;
      case Nonlinearity::ReluScaled:
        return g + tau * (f_scale * ad::max0(v));
    }
    return g;
  }

  template <class S>
  State<S> transport(const State<S>& p, std::span<const S> w) const {
    S tau = terminal_time - p.t;
    S dt = w[dim] * tau;
    S sq = ad::sqrt(dt);
    State<S> out;
    out.t = p.t + dt;
    out.x.resize(dim);
    for (int i = 0; i < dim; ++i) out.x[i] = p.x[i] + sq * w[i];
    return out;
  }

  // Exact solution when f is identically zero: ||x||^2 + d (T - t).
  double exact_zero_f(const State<double>& p) const {
    double g = 0.0;
    for (double xi : p.x) g += xi * xi;
    return g + dim * (terminal_time - p.t);
  }
};

}  // namespace lrv::models
