#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lrv/normal.hpp"
#include "lrv/parallel.hpp"
#include "lrv/param_domain.hpp"
#include "lrv/rng.hpp"
#include "lrv/sobol.hpp"

namespace lrv {

// Sampled L1/L2/Linf errors over the parameter domain with standard-error
// estimates from the same sample.
struct ErrorReport {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  std::int64_t n_eval = 0;
  double se_l1 = 0.0;
  double se_l2 = 0.0;
  double wall_clock = 0.0;
};

// Empirical errors between two functions of the parameter point over n
// uniform samples. Approx/Ref: double(const double* p). The point set is
// drawn once from the stream, so comparisons against the same stream state
// are paired; reductions are chunked in fixed order for reproducibility.
template <class A, class R>
ErrorReport estimate_errors(const A& approx, const R& ref, const ParameterDomain& domain,
                            std::int64_t n, RngStream& stream, int workers = 1) {
  if (n < 1) throw std::invalid_argument("estimate_errors: n must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const int p_dim = domain.dim();
  std::vector<double> points(n * p_dim);
  for (std::int64_t i = 0; i < n; ++i) {
    domain.sample(stream, std::span<double>(points.data() + i * p_dim, p_dim));
  }

  constexpr std::int64_t kChunk = 256;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
  struct Partial {
    double abs_sum = 0.0, sq_sum = 0.0, quad_sum = 0.0, max_abs = 0.0;
  };
  std::vector<Partial> parts(n_chunks);
  parallel_for_chunks(n_chunks, workers, [&](std::int64_t c) {
    Partial acc;
    const std::int64_t hi = std::min(n, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < hi; ++i) {
      const double* p = points.data() + i * p_dim;
      const double e = approx(p) - ref(p);
      const double a = std::fabs(e);
      acc.abs_sum += a;
      acc.sq_sum += e * e;
      acc.quad_sum += e * e * e * e;
      if (a > acc.max_abs) acc.max_abs = a;
    }
    parts[c] = acc;
  });

  Partial tot;
  for (const Partial& p : parts) {
    tot.abs_sum += p.abs_sum;
    tot.sq_sum += p.sq_sum;
    tot.quad_sum += p.quad_sum;
    if (p.max_abs > tot.max_abs) tot.max_abs = p.max_abs;
  }

  ErrorReport r;
  r.n_eval = n;
  const double nn = static_cast<double>(n);
  r.l1 = tot.abs_sum / nn;
  const double mean_sq = tot.sq_sum / nn;
  r.l2 = std::sqrt(mean_sq);
  r.linf = tot.max_abs;
  const double var_abs = std::max(0.0, mean_sq - r.l1 * r.l1);
  r.se_l1 = std::sqrt(var_abs / nn);
  const double var_sq = std::max(0.0, tot.quad_sum / nn - mean_sq * mean_sq);
  const double se_mean_sq = std::sqrt(var_sq / nn);
  r.se_l2 = r.l2 > 0.0 ? se_mean_sq / (2.0 * r.l2) : 0.0;
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Standard or antithetic MC estimate with M samples of `sample_dim` normals.
// Kernel: double(const double* p, const double* w).
template <class Kernel>
double mc_baseline(const Kernel& phi, int sample_dim, const double* p, std::int64_t M,
                   RngStream& stream, bool antithetic) {
  if (M < 1) throw std::invalid_argument("mc_baseline: M must be >= 1");
  std::vector<double> w(sample_dim), wn(sample_dim);
  double acc = 0.0;
  for (std::int64_t m = 0; m < M; ++m) {
    stream.fill_normal(w);
    if (antithetic) {
      for (int k = 0; k < sample_dim; ++k) wn[k] = -w[k];
      acc += (phi(p, w.data()) + phi(p, wn.data())) / 2.0;
    } else {
      acc += phi(p, w.data());
    }
  }
  return acc / static_cast<double>(M);
}

// QMC estimate: kernel averaged at the inverse-normal transform of Sobol
// points; the antithetic variant averages the payoff at +/- the transformed
// point.
template <class Kernel>
double qmc_baseline(const Kernel& phi, int sample_dim, const double* p, std::int64_t M,
                    SobolSequence& seq, bool antithetic) {
  if (M < 1) throw std::invalid_argument("qmc_baseline: M must be >= 1");
  if (seq.dim() != sample_dim) throw std::invalid_argument("qmc_baseline: dimension mismatch");
  std::vector<double> u(sample_dim), w(sample_dim), wn(sample_dim);
  double acc = 0.0;
  for (std::int64_t m = 0; m < M; ++m) {
    seq.next(std::span<double>(u));
    for (int k = 0; k < sample_dim; ++k) w[k] = inverse_normal_cdf(u[k]);
    if (antithetic) {
      for (int k = 0; k < sample_dim; ++k) wn[k] = -w[k];
      acc += (phi(p, w.data()) + phi(p, wn.data())) / 2.0;
    } else {
      acc += phi(p, w.data());
    }
  }
  return acc / static_cast<double>(M);
}

struct AntitheticCompare {
  double mse_standard = 0.0;
  double mse_antithetic = 0.0;
  int antithetic_wins = 0;  // replications with strictly smaller squared error
  int reps = 0;
};

// Empirical MSEs of the standard and antithetic M-sample estimators against
// a known expectation, over paired replications (the antithetic estimator
// reuses the standard estimator's draws).
template <class Kernel>
AntitheticCompare variance_compare_antithetic(const Kernel& phi, int sample_dim, const double* p,
                                              std::int64_t M, int reps, double exact,
                                              RngStream& stream) {
  AntitheticCompare out;
  out.reps = reps;
  std::vector<double> w(sample_dim), wn(sample_dim);
  for (int r = 0; r < reps; ++r) {
    double acc_std = 0.0, acc_anti = 0.0;
    for (std::int64_t m = 0; m < M; ++m) {
      stream.fill_normal(w);
      for (int k = 0; k < sample_dim; ++k) wn[k] = -w[k];
      const double f = phi(p, w.data());
      const double fr = phi(p, wn.data());
      acc_std += f;
      acc_anti += (f + fr) / 2.0;
    }
    const double e_std = acc_std / M - exact;
    const double e_anti = acc_anti / M - exact;
    out.mse_standard += e_std * e_std;
    out.mse_antithetic += e_anti * e_anti;
    if (e_anti * e_anti < e_std * e_std) ++out.antithetic_wins;
  }
  out.mse_standard /= reps;
  out.mse_antithetic /= reps;
  return out;
}

// Exact target value when the model has one, else an antithetic MC value
// with the given sample budget.
template <class Binding>
double reference_oracle(const Binding& model, const double* p, std::int64_t budget,
                        RngStream& stream) {
  if (model.has_exact()) return model.exact(p);
  if (budget < 1) {
    throw std::invalid_argument("reference_oracle: positive budget required without exact form");
  }
  auto kernel = [&](const double* pp, const double* w) { return model.reference_payoff(pp, w); };
  return mc_baseline(kernel, static_cast<int>(model.reference_dim()), p, budget, stream, true);
}

// P(Binomial(n, 1/2) >= k), for sign tests.
double binomial_tail_half(int n, int k);

// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace lrv
