#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrv/autodiff.hpp"
#include "lrv/mcnet.hpp"
#include "lrv/optim.hpp"
#include "lrv/parallel.hpp"
#include "lrv/param_domain.hpp"
#include "lrv/rng.hpp"

namespace lrv {

// How regression targets are produced: the closed-form solution where one
// exists, or a fresh (optionally antithetic) MC average per point and step.
struct ReferenceSpec {
  enum class Mode { Exact, StochasticMc };
  Mode mode = Mode::Exact;
  std::int64_t samples = 1;  // MC samples per reference value
  bool antithetic = false;
};

struct TrainConfig {
  ProposalSpec proposal;
  ReferenceSpec reference;
  std::int64_t batch = 1;
  std::int64_t steps = 1;
  OptimizerKind optimizer = OptimizerKind::Adam;
  OptimizerHyper hyper;
  LrSchedule schedule = LrSchedule::constant(1e-3);
  std::uint64_t seed = 0;
  std::int64_t checkpoint_every = 0;  // 0 disables checkpoints
  int workers = 1;

  void validate() const {
    proposal.validate();
    if (batch < 1) throw std::invalid_argument("TrainConfig: batch must be >= 1");
    if (steps < 1) throw std::invalid_argument("TrainConfig: steps must be >= 1");
    if (reference.mode == ReferenceSpec::Mode::StochasticMc && reference.samples < 1) {
      throw std::invalid_argument("TrainConfig: reference samples must be >= 1");
    }
  }
};

struct LossTracePoint {
  std::int64_t step = 0;
  double loss = 0.0;
  double lr = 0.0;
  double elapsed_s = 0.0;
};

struct Checkpoint {
  std::int64_t step = 0;
  ThetaVector theta;
  OptimizerState opt;
  std::uint64_t points_state = 0;
  std::uint64_t refs_state = 0;
};

struct TrainResult {
  ThetaVector theta;
  OptimizerState opt;
  std::vector<LossTracePoint> trace;
  std::vector<Checkpoint> checkpoints;
  double train_seconds = 0.0;
};

// Mean reference values for a batch of points, drawing fresh randomness from
// the stream. Binding must provide reference_dim(), has_exact(), exact(p)
// and reference_payoff(p, w).
template <class Binding>
void reference_batch(const Binding& model, const ReferenceSpec& ref,
                     std::span<const double> points, std::int64_t n_points, int p_dim,
                     RngStream& stream, int workers, std::span<double> out) {
  if (ref.mode == ReferenceSpec::Mode::Exact) {
    if (!model.has_exact()) {
      throw std::invalid_argument("reference_batch: exact mode needs a closed-form target");
    }
    for (std::int64_t i = 0; i < n_points; ++i) {
      out[i] = model.exact(points.data() + i * p_dim);
    }
    return;
  }
  const std::int64_t d = model.reference_dim();
  const std::int64_t per_point = ref.samples * d;
  thread_local std::vector<double> noise;
  noise.resize(static_cast<std::size_t>(n_points * per_point));
  model.fill_reference_noise(stream, std::span<double>(noise));
  parallel_for_chunks(n_points, workers, [&](std::int64_t i) {
    const double* p = points.data() + i * p_dim;
    const double* w = noise.data() + i * per_point;
    thread_local std::vector<double> wn;
    double acc = 0.0;
    for (std::int64_t s = 0; s < ref.samples; ++s) {
      const double* ws = w + s * d;
      if (ref.antithetic) {
        wn.assign(ws, ws + d);
        for (double& x : wn) x = -x;
        acc += (model.reference_payoff(p, ws) + model.reference_payoff(p, wn.data())) / 2.0;
      } else {
        acc += model.reference_payoff(p, ws);
      }
    }
    out[i] = acc / static_cast<double>(ref.samples);
  });
}

// Mean squared discrepancy between network outputs and references.
template <class Binding>
double loss_minibatch(const Binding& model, const ProposalSpec& spec,
                      std::span<const double> theta, std::span<const double> points, int p_dim,
                      std::span<const double> refs) {
  const std::int64_t n = static_cast<std::int64_t>(refs.size());
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double out = model.template network<double>(spec, points.data() + i * p_dim, theta);
    const double r = out - refs[i];
    acc += r * r;
  }
  return acc / static_cast<double>(n);
}

namespace detail {

// Batch elements are processed in fixed chunks; each chunk builds one tape
// over its partial sum of squared residuals and runs one reverse pass. Chunk
// results are reduced in chunk order, so the gradient is bit-reproducible
// for any worker count.
inline constexpr std::int64_t kGradChunk = 32;

template <class Binding>
double batch_loss_grad(const Binding& model, const ProposalSpec& spec,
                       std::span<const double> theta, std::span<const double> points, int p_dim,
                       std::span<const double> refs, int workers, std::span<double> grad) {
  const std::int64_t n = static_cast<std::int64_t>(refs.size());
  const std::int64_t dim = static_cast<std::int64_t>(theta.size());
  const std::int64_t n_chunks = (n + kGradChunk - 1) / kGradChunk;
  std::vector<double> chunk_loss(n_chunks, 0.0);
  std::vector<double> chunk_grad(n_chunks * dim, 0.0);

  parallel_for_chunks(n_chunks, workers, [&](std::int64_t c) {
    const std::int64_t lo = c * kGradChunk;
    const std::int64_t hi = std::min(n, lo + kGradChunk);
    thread_local ad::Tape tape;
    thread_local std::vector<ad::Var> tvars;
    thread_local std::vector<double> adj;
    tape.clear();
    tvars.clear();
    tvars.reserve(dim);
    for (std::int64_t i = 0; i < dim; ++i) tvars.push_back(ad::make_leaf(tape, theta[i]));
    ad::Var total(0.0);
    for (std::int64_t i = lo; i < hi; ++i) {
      ad::Var out = model.template network<ad::Var>(spec, points.data() + i * p_dim,
                                                    std::span<const ad::Var>(tvars));
      ad::Var r = out - refs[i];
      total = total + r * r;
    }
    chunk_loss[c] = total.v;
    if (!total.is_const()) {
      adj.resize(tape.size());
      tape.backward(total.i, adj);
      for (std::int64_t i = 0; i < dim; ++i) chunk_grad[c * dim + i] = adj[i];
    }
  });

  double loss = 0.0;
  for (std::int64_t c = 0; c < n_chunks; ++c) loss += chunk_loss[c];
  loss /= static_cast<double>(n);
  for (std::int64_t i = 0; i < dim; ++i) grad[i] = 0.0;
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const double* gc = chunk_grad.data() + c * dim;
    for (std::int64_t i = 0; i < dim; ++i) grad[i] += gc[i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (std::int64_t i = 0; i < dim; ++i) grad[i] *= inv;
  return loss;
}

}  // namespace detail

// The LRV training loop: Theta_0 from the proposal law, then per step fresh
// parameter points and reference randomness, one reverse pass for the
// batch-mean loss gradient, and an optimizer update.
template <class Binding>
TrainResult train(const TrainConfig& cfg, const Binding& model) {
  cfg.validate();
  const ParameterDomain& domain = model.domain();
  const int p_dim = domain.dim();

  RngStream root(cfg.seed, "train");
  RngStream init_stream = root.split("theta0");
  RngStream point_stream = root.split("points");
  RngStream ref_stream = root.split("refs");

  TrainResult result;
  result.theta = init_theta(cfg.proposal, init_stream);
  result.opt.kind = cfg.optimizer;
  result.opt.hyper = cfg.hyper;
  result.opt.schedule = cfg.schedule;
  result.opt.init(result.theta.values.size());
  result.trace.reserve(cfg.steps);

  const std::int64_t dim = result.theta.dim();
  std::vector<double> points(cfg.batch * p_dim);
  std::vector<double> refs(cfg.batch);
  std::vector<double> grad(dim);

  const auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t m = 1; m <= cfg.steps; ++m) {
    for (std::int64_t i = 0; i < cfg.batch; ++i) {
      domain.sample(point_stream, std::span<double>(points.data() + i * p_dim, p_dim));
    }
    reference_batch(model, cfg.reference, points, cfg.batch, p_dim, ref_stream, cfg.workers,
                    std::span<double>(refs));
    const double loss =
        detail::batch_loss_grad(model, cfg.proposal, result.theta.values, points, p_dim, refs,
                                cfg.workers, std::span<double>(grad));
    if (!std::isfinite(loss)) {
      throw std::runtime_error("train: non-finite loss at step " + std::to_string(m));
    }
    optimizer_step(result.opt, result.theta.values, grad);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.trace.push_back({m, loss, cfg.schedule.at(m), elapsed});
    if (cfg.checkpoint_every > 0 && (m % cfg.checkpoint_every == 0 || m == cfg.steps)) {
      result.checkpoints.push_back(
          {m, result.theta, result.opt, point_stream.state(), ref_stream.state()});
    }
  }
  result.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

// Resume from a checkpoint; replays the remaining steps exactly as the
// uninterrupted run would have executed them.
template <class Binding>
TrainResult train_resume(const TrainConfig& cfg, const Binding& model, const Checkpoint& ck) {
  cfg.validate();
  const ParameterDomain& domain = model.domain();
  const int p_dim = domain.dim();

  RngStream root(cfg.seed, "train");
  RngStream point_stream = root.split("points");
  RngStream ref_stream = root.split("refs");
  point_stream.set_state(ck.points_state);
  ref_stream.set_state(ck.refs_state);

  TrainResult result;
  result.theta = ck.theta;
  result.opt = ck.opt;

  const std::int64_t dim = result.theta.dim();
  std::vector<double> points(cfg.batch * p_dim);
  std::vector<double> refs(cfg.batch);
  std::vector<double> grad(dim);

  const auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t m = ck.step + 1; m <= cfg.steps; ++m) {
    for (std::int64_t i = 0; i < cfg.batch; ++i) {
      domain.sample(point_stream, std::span<double>(points.data() + i * p_dim, p_dim));
    }
    reference_batch(model, cfg.reference, points, cfg.batch, p_dim, ref_stream, cfg.workers,
                    std::span<double>(refs));
    const double loss =
        detail::batch_loss_grad(model, cfg.proposal, result.theta.values, points, p_dim, refs,
                                cfg.workers, std::span<double>(grad));
    if (!std::isfinite(loss)) {
      throw std::runtime_error("train: non-finite loss at step " + std::to_string(m));
    }
    optimizer_step(result.opt, result.theta.values, grad);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.trace.push_back({m, loss, cfg.schedule.at(m), elapsed});
  }
  result.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace lrv
