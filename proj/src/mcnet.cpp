#include "lrv/mcnet.hpp"

namespace lrv {

std::string to_string(ProposalKind k) {
  switch (k) {
    case ProposalKind::MC: return "mc";
    case ProposalKind::AntitheticMC: return "mc_anti";
    case ProposalKind::McEuler: return "mc_euler";
    case ProposalKind::MLMC: return "mlmc";
    case ProposalKind::MLP: return "mlp";
  }
  return "?";
}

ProposalKind proposal_kind_from_string(const std::string& s) {
  if (s == "mc") return ProposalKind::MC;
  if (s == "mc_anti") return ProposalKind::AntitheticMC;
  if (s == "mc_euler") return ProposalKind::McEuler;
  if (s == "mlmc") return ProposalKind::MLMC;
  if (s == "mlp") return ProposalKind::MLP;
  throw std::invalid_argument("unknown proposal kind: " + s);
}

void ProposalSpec::validate() const {
  if (state_dim < 1) throw std::invalid_argument("ProposalSpec: state_dim must be >= 1");
  switch (kind) {
    case ProposalKind::MC:
    case ProposalKind::AntitheticMC:
      if (samples < 1) throw std::invalid_argument("ProposalSpec: samples must be >= 1");
      break;
    case ProposalKind::McEuler:
      if (samples < 1) throw std::invalid_argument("ProposalSpec: samples must be >= 1");
      if (steps < 1) throw std::invalid_argument("ProposalSpec: steps must be >= 1");
      break;
    case ProposalKind::MLMC: {
      if (level_samples.empty()) {
        throw std::invalid_argument("ProposalSpec: MLMC requires level_samples");
      }
      for (std::size_t l = 0; l < level_samples.size(); ++l) {
        if (level_samples[l] < 1) {
          throw std::invalid_argument("ProposalSpec: level sample counts must be >= 1");
        }
        if (l > 0 && level_samples[l] > level_samples[l - 1]) {
          throw std::invalid_argument("ProposalSpec: MLMC requires M_0 >= M_1 >= ... >= M_L");
        }
      }
      break;
    }
    case ProposalKind::MLP:
      if (samples < 1) throw std::invalid_argument("ProposalSpec: samples must be >= 1");
      if (picard_level < 1) throw std::invalid_argument("ProposalSpec: picard_level must be >= 1");
      break;
  }
}

std::int64_t ProposalSpec::per_sample_dim() const {
  switch (kind) {
    case ProposalKind::MC:
    case ProposalKind::AntitheticMC:
    case ProposalKind::MLP:
      return state_dim;
    case ProposalKind::McEuler:
      return static_cast<std::int64_t>(steps) * state_dim;
    case ProposalKind::MLMC:
      throw std::logic_error("per_sample_dim is level dependent for MLMC");
  }
  return 0;
}

std::int64_t ProposalSpec::theta_dim() const {
  switch (kind) {
    case ProposalKind::MC:
    case ProposalKind::AntitheticMC:
    case ProposalKind::McEuler:
      return samples * per_sample_dim();
    case ProposalKind::MLMC: {
      std::int64_t total = 0;
      for (int l = 0; l < static_cast<int>(level_samples.size()); ++l) {
        total += level_samples[l] * level_dim(l);
      }
      return total;
    }
    case ProposalKind::MLP:
      return mlp_count(samples, picard_level) * state_dim;
  }
  return 0;
}

ThetaVector init_theta(const ProposalSpec& spec, RngStream& stream) {
  spec.validate();
  ThetaVector theta;
  theta.layout = spec;
  const std::int64_t dim = spec.theta_dim();
  theta.values.resize(dim);
  if (spec.kind == ProposalKind::MLP && spec.mlp_uniform_coord >= 0) {
    const std::int64_t d = spec.state_dim;
    const std::int64_t blocks = dim / d;
    for (std::int64_t b = 0; b < blocks; ++b) {
      for (std::int64_t k = 0; k < d; ++k) {
        theta.values[b * d + k] =
            (k == spec.mlp_uniform_coord) ? stream.uniform01() : stream.normal();
      }
    }
  } else {
    stream.fill_normal(theta.values);
  }
  return theta;
}

std::int64_t mlp_count(std::int64_t base, int n) {
  if (n <= 0) return 0;
  std::vector<std::int64_t> c(static_cast<std::size_t>(n) + 1, 0);
  for (int j = 1; j <= n; ++j) {
    std::int64_t pow = base;  // base^(j-k) for k = j-1 downwards
    std::int64_t total = 0;
    for (int k = j - 1; k >= 0; --k) {
      const std::int64_t ck = c[k];
      const std::int64_t ckm1 = (k >= 1) ? c[k - 1] : 0;
      total += pow * (1 + ck + ckm1);
      pow *= base;
    }
    c[j] = total;
  }
  return c[n];
}

std::int64_t mlp_offset(std::int64_t base, int n, int l, std::int64_t m) {
  if (l < 1 || l > n || m < 1) throw std::invalid_argument("mlp_offset: bad indices");
  std::int64_t head = 0;
  std::int64_t pow = 1;
  for (int i = 0; i < n; ++i) pow *= base;  // base^n
  for (int k = 0; k <= l - 1; ++k) {
    const std::int64_t ck = mlp_count(base, k);
    const std::int64_t ckm1 = mlp_count(base, k - 1);
    head += pow * (1 + ck + ckm1);
    pow /= base;
  }
  const std::int64_t cl = mlp_count(base, l);
  const std::int64_t clm1 = mlp_count(base, l - 1);
  return head + (m - 1) * (1 + cl + clm1) + 1;
}

}  // namespace lrv
