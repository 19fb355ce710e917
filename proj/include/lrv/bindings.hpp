#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrv/mcnet.hpp"
#include "lrv/models/basket.hpp"
#include "lrv/models/black_scholes.hpp"
#include "lrv/models/heat.hpp"
#include "lrv/models/lorentz.hpp"
#include "lrv/param_domain.hpp"
#include "lrv/rng.hpp"

namespace lrv {

// Paper-standard parameter boxes for the four pricing/SDE problems.
ParameterDomain bs_call_domain();
ParameterDomain worst_of_put_domain();
ParameterDomain barrier_avg_put_domain();
ParameterDomain lorentz_domain();

// Each binding couples one model's kernels to a proposal network, a
// reference generator and a parameter domain. The training loop and the
// evaluators are generic over this interface.

struct BsCallBinding {
  ParameterDomain dom = bs_call_domain();

  const ParameterDomain& domain() const { return dom; }
  std::int64_t reference_dim() const { return 1; }
  bool has_exact() const { return true; }

  double exact(const double* p) const {
    return models::bs_call_exact(models::BsCallParams::from_point({p, 5}));
  }

  double reference_payoff(const double* p, const double* w) const {
    return models::bs_call_payoff(models::BsCallParams::from_point({p, 5}), w[0]);
  }

  void fill_reference_noise(RngStream& stream, std::span<double> out) const {
    stream.fill_normal(out);
  }

  template <class S>
  S network(const ProposalSpec& spec, const double* p, std::span<const S> theta) const {
    const auto bp = models::BsCallParams::from_point({p, 5});
    auto kern = [&](std::span<const S> w) { return models::bs_call_payoff<S>(bp, w[0]); };
    return mc_network_eval<S>(spec, kern, theta);
  }
};

struct WorstOfPutBinding {
  ParameterDomain dom = worst_of_put_domain();

  const ParameterDomain& domain() const { return dom; }
  std::int64_t reference_dim() const { return 3; }
  bool has_exact() const { return false; }
  double exact(const double*) const {
    throw std::logic_error("worst-of basket put has no closed form");
  }

  double reference_payoff(const double* p, const double* w) const {
    const auto bp = models::BasketParams::worst_of_from_point({p, 15});
    return models::worst_of_put_payoff<double>(bp, {w, 3});
  }

  void fill_reference_noise(RngStream& stream, std::span<double> out) const {
    stream.fill_normal(out);
  }

  template <class S>
  S network(const ProposalSpec& spec, const double* p, std::span<const S> theta) const {
    const auto bp = models::BasketParams::worst_of_from_point({p, 15});
    auto kern = [&](std::span<const S> w) { return models::worst_of_put_payoff<S>(bp, w); };
    return mc_network_eval<S>(spec, kern, theta);
  }
};

struct BarrierAvgPutBinding {
  ParameterDomain dom = barrier_avg_put_domain();
  int steps = 10;

  const ParameterDomain& domain() const { return dom; }
  std::int64_t reference_dim() const { return static_cast<std::int64_t>(steps) * 3; }
  bool has_exact() const { return false; }
  double exact(const double*) const {
    throw std::logic_error("barrier average put has no closed form");
  }

  double reference_payoff(const double* p, const double* w) const {
    const auto bp = models::BasketParams::barrier_from_point({p, 16});
    return models::barrier_avg_put_payoff<double>(bp, {w, static_cast<std::size_t>(3 * steps)},
                                                  steps);
  }

  void fill_reference_noise(RngStream& stream, std::span<double> out) const {
    stream.fill_normal(out);
  }

  template <class S>
  S network(const ProposalSpec& spec, const double* p, std::span<const S> theta) const {
    const auto bp = models::BasketParams::barrier_from_point({p, 16});
    auto kern = [&](std::span<const S> w) {
      return models::barrier_avg_put_payoff<S>(bp, w, steps);
    };
    return euler_network_eval<S>(spec, kern, theta);
  }
};

struct LorentzBinding {
  ParameterDomain dom = lorentz_domain();
  int steps = 25;
  bool antithetic_kernel = false;  // Phi_1 instead of Phi_0

  const ParameterDomain& domain() const { return dom; }
  std::int64_t reference_dim() const { return static_cast<std::int64_t>(steps) * 3; }
  bool has_exact() const { return false; }
  double exact(const double*) const {
    throw std::logic_error("stochastic Lorentz equation has no closed form");
  }

  double reference_payoff(const double* p, const double* w) const {
    const auto lp = models::LorentzParams::from_point({p, 10}, steps);
    return models::lorentz_payoff<double>(lp, {w, static_cast<std::size_t>(3 * steps)},
                                          antithetic_kernel);
  }

  void fill_reference_noise(RngStream& stream, std::span<double> out) const {
    stream.fill_normal(out);
  }

  template <class S>
  S network(const ProposalSpec& spec, const double* p, std::span<const S> theta) const {
    const auto lp = models::LorentzParams::from_point({p, 10}, steps);
    if (spec.kind == ProposalKind::MLMC) {
      // Level kernel: Heun with 2^l time steps on 2^l increments.
      auto kern = [&](int level, std::span<const S> w) {
        models::LorentzParams lvl = lp;
        lvl.steps = 1 << level;
        return models::lorentz_payoff<S>(lvl, w, antithetic_kernel);
      };
      return mlmc_network_eval<S>(spec, kern, theta);
    }
    auto kern = [&](std::span<const S> w) {
      return models::lorentz_payoff<S>(lp, w, antithetic_kernel);
    };
    return euler_network_eval<S>(spec, kern, theta);
  }
};

struct HeatMlpBinding {
  models::HeatMlpModel model;
  ParameterDomain dom;
  int reference_picard_level = 2;
  std::int64_t reference_mlp_base = 2;

  const ParameterDomain& domain() const { return dom; }

  std::int64_t reference_dim() const {
    return mlp_count(reference_mlp_base, reference_picard_level) * model.sample_dim();
  }

  bool has_exact() const { return model.f_kind == models::HeatMlpModel::Nonlinearity::Zero; }

  double exact(const double* p) const {
    if (!has_exact()) throw std::logic_error("heat model with nonlinearity has no closed form");
    return model.exact_zero_f(model.state_from_point({p, static_cast<std::size_t>(model.dim + 1)}));
  }

  // One reference draw is a full independent Picard evaluation on fresh
  // randomness.
  double reference_payoff(const double* p, const double* w) const {
    ProposalSpec ref;
    ref.kind = ProposalKind::MLP;
    ref.samples = reference_mlp_base;
    ref.picard_level = reference_picard_level;
    ref.state_dim = model.sample_dim();
    ref.mlp_uniform_coord = model.uniform_coord();
    const auto st = model.state_from_point({p, static_cast<std::size_t>(model.dim + 1)});
    return mlp_network_eval<double>(ref, model, st,
                                    {w, static_cast<std::size_t>(reference_dim())});
  }

  void fill_reference_noise(RngStream& stream, std::span<double> out) const {
    const int d = model.sample_dim();
    const std::int64_t blocks = static_cast<std::int64_t>(out.size()) / d;
    for (std::int64_t b = 0; b < blocks; ++b) {
      for (int k = 0; k < d; ++k) {
        out[b * d + k] = (k == model.uniform_coord()) ? stream.uniform01() : stream.normal();
      }
    }
  }

  template <class S>
  S network(const ProposalSpec& spec, const double* p, std::span<const S> theta) const {
    const auto st = model.state_from_point({p, static_cast<std::size_t>(model.dim + 1)});
    const auto lifted = model.lift<S>(st);
    return mlp_network_eval<S>(spec, model, lifted, theta);
  }
};

}  // namespace lrv
