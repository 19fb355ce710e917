#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrv/autodiff.hpp"
#include "lrv/rng.hpp"

namespace lrv {

enum class ProposalKind { MC, AntitheticMC, McEuler, MLMC, MLP };

std::string to_string(ProposalKind k);
ProposalKind proposal_kind_from_string(const std::string& s);

// Structural constants of the proposal network. The flat parameter layout is
// level-major, then sample-major, then coordinate.
struct ProposalSpec {
  ProposalKind kind = ProposalKind::MC;
  std::int64_t samples = 1;                    // M (MC kinds, McEuler; MLP base)
  std::vector<std::int64_t> level_samples;     // MLMC M_0 >= ... >= M_L
  int steps = 1;                               // N time steps (path kinds)
  int state_dim = 1;                           // d per step (path kinds) or per sample (MC)
  int picard_level = 1;                        // MLP recursion depth
  int mlp_uniform_coord = -1;                  // block coordinate drawn U(0,1) at init

  void validate() const;

  // Scalars consumed per sample block. For MLMC this is level dependent
  // (2^l * d); use level_dim.
  std::int64_t per_sample_dim() const;
  std::int64_t level_dim(int level) const { return (std::int64_t{1} << level) * state_dim; }
  int levels() const { return static_cast<int>(level_samples.size()) - 1; }

  // Total trainable dimension.
  std::int64_t theta_dim() const;
};

struct ThetaVector {
  std::vector<double> values;
  ProposalSpec layout;

  std::int64_t dim() const { return static_cast<std::int64_t>(values.size()); }
};

// Draw Theta_0 from the proposal's own sampling law: i.i.d. standard normal
// entries, except MLP blocks may mark one coordinate as U(0,1).
ThetaVector init_theta(const ProposalSpec& spec, RngStream& stream);

// Number of per-sample blocks consumed by one level-n multilevel Picard
// evaluation: C_n = sum_{k=0}^{n-1} M^{n-k} (1 + C_k + C_{k-1}), C_n = 0 for n <= 0.
std::int64_t mlp_count(std::int64_t base, int n);

// 1-based offset of sub-block (l, m) inside the flattened level-n parameter
// vector: c_{n,l,m} = [sum_{k=0}^{l-1} M^{n-k}(1 + C_k + C_{k-1})] + (m-1)(1 + C_l + C_{l-1}) + 1.
std::int64_t mlp_offset(std::int64_t base, int n, int l, std::int64_t m);

namespace detail {

template <class S>
void check_layout(const ProposalSpec& spec, std::span<const S> theta) {
  if (static_cast<std::int64_t>(theta.size()) != spec.theta_dim()) {
    throw std::invalid_argument("theta length does not match the proposal layout");
  }
}

}  // namespace detail

// Plain / antithetic MC network (one block per sample):
//   N(p, theta) = (1/M) sum_m phi(p, theta_block_m),
// with the antithetic kind averaging the kernel at +/- each block.
// Kernel signature: S phi(std::span<const S> w_block).
template <class S, class Kernel>
S sampled_average_eval(const ProposalSpec& spec, const Kernel& phi, std::span<const S> theta) {
  detail::check_layout(spec, theta);
  const std::int64_t d = spec.per_sample_dim();
  const std::int64_t M = spec.samples;
  thread_local std::vector<S> terms;
  terms.clear();
  terms.reserve(M);
  if (spec.kind == ProposalKind::AntitheticMC) {
    thread_local std::vector<S> neg;
    neg.resize(d);
    for (std::int64_t m = 0; m < M; ++m) {
      auto block = theta.subspan(m * d, d);
      for (std::int64_t k = 0; k < d; ++k) neg[k] = -block[k];
      S a = phi(block);
      S b = phi(std::span<const S>(neg));
      terms.push_back((a + b) / 2.0);
    }
  } else {
    for (std::int64_t m = 0; m < M; ++m) {
      terms.push_back(phi(theta.subspan(m * d, d)));
    }
  }
  return ad::mean(std::span<const S>(terms));
}

template <class S, class Kernel>
S mc_network_eval(const ProposalSpec& spec, const Kernel& phi, std::span<const S> theta) {
  if (spec.kind != ProposalKind::MC && spec.kind != ProposalKind::AntitheticMC) {
    throw std::invalid_argument("mc_network_eval: spec kind must be MC or AntitheticMC");
  }
  return sampled_average_eval(spec, phi, theta);
}

template <class S, class Kernel>
S euler_network_eval(const ProposalSpec& spec, const Kernel& phi, std::span<const S> theta) {
  if (spec.kind != ProposalKind::McEuler) {
    throw std::invalid_argument("euler_network_eval: spec kind must be McEuler");
  }
  return sampled_average_eval(spec, phi, theta);
}

// Pairwise Brownian-increment coupling: theta_fine holds 2^l d-dimensional
// increments, the projection emits half as many via
//   coarse_n = (fine_{2n} + fine_{2n-1}) / sqrt(2).
template <class S>
void mlmc_coupling_project(std::span<const S> fine, int d, std::span<S> coarse) {
  constexpr double kSqrt2 = 1.4142135623730950488;
  const std::int64_t pairs = static_cast<std::int64_t>(coarse.size()) / d;
  for (std::int64_t n = 0; n < pairs; ++n) {
    for (int k = 0; k < d; ++k) {
      coarse[n * d + k] = (fine[2 * n * d + k] + fine[(2 * n + 1) * d + k]) / kSqrt2;
    }
  }
}

// MLMC network: level-0 average plus telescoping corrections
//   sum_l (1/M_l) sum_m [Phi_l(block) - Phi_{l-1}(P_l(block))].
// Kernel signature: S phi(int level, std::span<const S> w_block).
template <class S, class LevelKernel>
S mlmc_network_eval(const ProposalSpec& spec, const LevelKernel& phi, std::span<const S> theta) {
  if (spec.kind != ProposalKind::MLMC) {
    throw std::invalid_argument("mlmc_network_eval: spec kind must be MLMC");
  }
  detail::check_layout(spec, theta);
  const int L = spec.levels();
  std::int64_t off = 0;
  thread_local std::vector<S> terms;
  terms.clear();
  S result;
  {
    const std::int64_t d0 = spec.level_dim(0);
    const std::int64_t M0 = spec.level_samples[0];
    terms.reserve(M0);
    for (std::int64_t m = 0; m < M0; ++m) {
      terms.push_back(phi(0, theta.subspan(off + m * d0, d0)));
    }
    result = ad::mean(std::span<const S>(terms));
    off += M0 * d0;
  }
  std::vector<S> coarse;
  for (int l = 1; l <= L; ++l) {
    const std::int64_t dl = spec.level_dim(l);
    const std::int64_t Ml = spec.level_samples[l];
    terms.clear();
    coarse.resize(dl / 2);
    for (std::int64_t m = 0; m < Ml; ++m) {
      auto block = theta.subspan(off + m * dl, dl);
      S fine = phi(l, block);
      mlmc_coupling_project(block, spec.state_dim, std::span<S>(coarse));
      S proj = phi(l - 1, std::span<const S>(coarse));
      terms.push_back(fine - proj);
    }
    result = result + ad::mean(std::span<const S>(terms));
    off += Ml * dl;
  }
  return result;
}

// Multilevel Picard network, structural recursion with explicit offsets:
//   N_n(p, theta) = (1/M^n) sum_{m<=M^n} phi(p, theta_m, 0)
//     + sum_{k=1}^{n-1} (1/M^{n-k}) sum_m [ phi(p, theta_c, N_k(P(p, theta_c), theta_{c+1..c+C_k}))
//                                          - phi(p, theta_c, N_{k-1}(P(p, theta_c), theta_{c+C_k+1..})) ]
// with c = c_{n,k,m} and N_0 = 0. Model supplies phi, transport and the
// scalar-lifted state type (see models::HeatMlpModel).
template <class S, class Model>
S mlp_network_recurse(const Model& model, std::int64_t base, int n,
                      const typename Model::template State<S>& p, std::span<const S> theta) {
  if (n <= 0) return S(0.0);
  const std::int64_t d = model.sample_dim();
  std::int64_t level_count = 1;
  for (int i = 0; i < n; ++i) level_count *= base;  // M^n

  std::vector<S> local;  // recursion-safe accumulation
  local.reserve(level_count);
  for (std::int64_t m = 0; m < level_count; ++m) {
    local.push_back(model.phi(p, theta.subspan(m * d, d), S(0.0)));
  }
  S result = ad::mean(std::span<const S>(local));

  for (int k = 1; k <= n - 1; ++k) {
    const std::int64_t ck = mlp_count(base, k);
    const std::int64_t ckm1 = mlp_count(base, k - 1);
    std::int64_t count = 1;
    for (int i = 0; i < n - k; ++i) count *= base;  // M^{n-k}
    local.clear();
    for (std::int64_t m = 1; m <= count; ++m) {
      const std::int64_t c = mlp_offset(base, n, k, m);  // 1-based block index
      auto w = theta.subspan((c - 1) * d, d);
      auto q = model.template transport<S>(p, w);
      S va = mlp_network_recurse<S>(model, base, k, q, theta.subspan(c * d, ck * d));
      S vb = mlp_network_recurse<S>(model, base, k - 1, q, theta.subspan((c + ck) * d, ckm1 * d));
      local.push_back(model.phi(p, w, va) - model.phi(p, w, vb));
    }
    result = result + ad::mean(std::span<const S>(local));
  }
  return result;
}

template <class S, class Model>
S mlp_network_eval(const ProposalSpec& spec, const Model& model,
                   const typename Model::template State<S>& p, std::span<const S> theta) {
  if (spec.kind != ProposalKind::MLP) {
    throw std::invalid_argument("mlp_network_eval: spec kind must be MLP");
  }
  detail::check_layout(spec, theta);
  return mlp_network_recurse<S>(model, spec.samples, spec.picard_level, p, theta);
}

}  // namespace lrv
