#include "lrv/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace lrv {

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Sgd: return "sgd";
    case OptimizerKind::Momentum: return "momentum";
    case OptimizerKind::Adagrad: return "adagrad";
    case OptimizerKind::RmsProp: return "rmsprop";
    case OptimizerKind::Adadelta: return "adadelta";
    case OptimizerKind::Adamax: return "adamax";
    case OptimizerKind::Adam: return "adam";
  }
  return "?";
}

OptimizerKind optimizer_kind_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "momentum") return OptimizerKind::Momentum;
  if (s == "adagrad") return OptimizerKind::Adagrad;
  if (s == "rmsprop") return OptimizerKind::RmsProp;
  if (s == "adadelta") return OptimizerKind::Adadelta;
  if (s == "adamax") return OptimizerKind::Adamax;
  if (s == "adam") return OptimizerKind::Adam;
  throw std::invalid_argument("unknown optimizer kind: " + s);
}

LrSchedule LrSchedule::constant(double rate) {
  LrSchedule s;
  s.segments.push_back({std::int64_t{1} << 62, rate});
  return s;
}

void LrSchedule::validate() const {
  if (segments.empty()) throw std::invalid_argument("LrSchedule: empty");
  std::int64_t prev = 0;
  for (const Segment& seg : segments) {
    if (seg.upto <= prev) throw std::invalid_argument("LrSchedule: bounds must increase");
    if (!(seg.rate > 0.0)) throw std::invalid_argument("LrSchedule: rates must be positive");
    prev = seg.upto;
  }
}

double LrSchedule::at(std::int64_t m) const {
  for (const Segment& seg : segments) {
    if (m <= seg.upto) return seg.rate;
  }
  return segments.back().rate;
}

void OptimizerState::init(std::size_t dim) {
  step = 0;
  alpha_pow = 1.0;
  beta_pow = 1.0;
  m1.assign(dim, 0.0);
  m2.assign(dim, 0.0);
  dacc.assign(dim, 0.0);
}

void optimizer_step(OptimizerState& st, std::span<double> theta, std::span<const double> g) {
  const std::size_t dim = theta.size();
  if (g.size() != dim) throw std::invalid_argument("optimizer_step: gradient length mismatch");
  if (st.m1.size() != dim) st.init(dim);

  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(g[i])) {
      throw std::runtime_error("optimizer_step: non-finite gradient entry " + std::to_string(i) +
                               " at step " + std::to_string(st.step + 1));
    }
  }

  const std::int64_t m = ++st.step;
  const double gamma = st.schedule.at(m);
  const double a = st.hyper.alpha;
  const double b = st.hyper.beta;
  const double d = st.hyper.delta;
  const double eps = st.hyper.epsilon;
  st.alpha_pow *= a;
  st.beta_pow *= b;

  switch (st.kind) {
    case OptimizerKind::Sgd:
      for (std::size_t i = 0; i < dim; ++i) theta[i] -= gamma * g[i];
      break;
    case OptimizerKind::Momentum:
      for (std::size_t i = 0; i < dim; ++i) {
        st.m1[i] = a * st.m1[i] + (1.0 - a) * g[i];
        theta[i] -= gamma * st.m1[i];
      }
      break;
    case OptimizerKind::Adagrad:
      for (std::size_t i = 0; i < dim; ++i) {
        st.m2[i] += g[i] * g[i];
        theta[i] -= gamma / std::sqrt(eps + st.m2[i]) * g[i];
      }
      break;
    case OptimizerKind::RmsProp:
      for (std::size_t i = 0; i < dim; ++i) {
        st.m2[i] = b * st.m2[i] + (1.0 - b) * g[i] * g[i];
        theta[i] -= gamma / std::sqrt(eps + st.m2[i]) * g[i];
      }
      break;
    case OptimizerKind::Adadelta:
      for (std::size_t i = 0; i < dim; ++i) {
        st.m2[i] = b * st.m2[i] + (1.0 - b) * g[i] * g[i];
        const double upd = std::sqrt((eps + st.dacc[i]) / (eps + st.m2[i])) * g[i];
        theta[i] -= upd;
        st.dacc[i] = d * st.dacc[i] + (1.0 - d) * upd * upd;
      }
      break;
    case OptimizerKind::Adamax:
      for (std::size_t i = 0; i < dim; ++i) {
        st.m1[i] = a * st.m1[i] + (1.0 - a) * g[i];
        st.m2[i] = std::max(b * st.m2[i], std::fabs(g[i]));
        theta[i] -= gamma * (st.m1[i] / (1.0 - st.alpha_pow)) / (eps + st.m2[i]);
      }
      break;
    case OptimizerKind::Adam:
      for (std::size_t i = 0; i < dim; ++i) {
        st.m1[i] = a * st.m1[i] + (1.0 - a) * g[i];
        st.m2[i] = b * st.m2[i] + (1.0 - b) * g[i] * g[i];
        theta[i] -= gamma * (st.m1[i] / (1.0 - st.alpha_pow)) /
                    (eps + std::sqrt(st.m2[i] / (1.0 - st.beta_pow)));
      }
      break;
  }
}

std::vector<double> psi_closed_form(OptimizerKind kind, const OptimizerHyper& hyper,
                                    const LrSchedule& schedule,
                                    std::span<const std::vector<double>> history) {
  const std::int64_t m = static_cast<std::int64_t>(history.size());
  if (m == 0) throw std::invalid_argument("psi_closed_form: empty history");
  const std::size_t dim = history[0].size();
  const double a = hyper.alpha;
  const double b = hyper.beta;
  const double d = hyper.delta;
  const double eps = hyper.epsilon;
  const double gamma = schedule.at(m);
  std::vector<double> psi(dim, 0.0);

  switch (kind) {
    case OptimizerKind::Sgd:
      for (std::size_t i = 0; i < dim; ++i) psi[i] = gamma * history[m - 1][i];
      break;
    case OptimizerKind::Momentum:
      for (std::size_t i = 0; i < dim; ++i) {
        double s = 0.0;
        for (std::int64_t k = 1; k <= m; ++k) {
          s += std::pow(a, static_cast<double>(m - k)) * (1.0 - a) * history[k - 1][i];
        }
        psi[i] = gamma * s;
      }
      break;
    case OptimizerKind::Adagrad:
      for (std::size_t i = 0; i < dim; ++i) {
        double s = 0.0;
        for (std::int64_t k = 1; k <= m; ++k) s += history[k - 1][i] * history[k - 1][i];
        psi[i] = gamma / std::sqrt(eps + s) * history[m - 1][i];
      }
      break;
    case OptimizerKind::RmsProp:
      for (std::size_t i = 0; i < dim; ++i) {
        double s = 0.0;
        for (std::int64_t k = 1; k <= m; ++k) {
          s += std::pow(b, static_cast<double>(m - k)) * (1.0 - b) * history[k - 1][i] *
               history[k - 1][i];
        }
        psi[i] = gamma / std::sqrt(eps + s) * history[m - 1][i];
      }
      break;
    case OptimizerKind::Adadelta: {
      // psi_j depends on psi_1..psi_{j-1}; rebuild the whole sequence from
      // the gradient history alone.
      std::vector<std::vector<double>> updates;
      updates.reserve(m);
      for (std::int64_t j = 1; j <= m; ++j) {
        std::vector<double> u(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
          double num = eps;
          for (std::int64_t k = 1; k <= j - 1; ++k) {
            num += std::pow(d, static_cast<double>(j - 1 - k)) * (1.0 - d) * updates[k - 1][i] *
                   updates[k - 1][i];
          }
          double den = eps;
          for (std::int64_t k = 1; k <= j; ++k) {
            den += std::pow(b, static_cast<double>(j - k)) * (1.0 - b) * history[k - 1][i] *
                   history[k - 1][i];
          }
          u[i] = std::sqrt(num / den) * history[j - 1][i];
        }
        updates.push_back(std::move(u));
      }
      psi = updates.back();
      break;
    }
    case OptimizerKind::Adamax:
      for (std::size_t i = 0; i < dim; ++i) {
        double num = 0.0;
        double mx = 0.0;
        for (std::int64_t k = 1; k <= m; ++k) {
          num += std::pow(a, static_cast<double>(m - k)) * (1.0 - a) * history[k - 1][i];
          mx = std::max(mx, std::pow(b, static_cast<double>(m - k)) * std::fabs(history[k - 1][i]));
        }
        psi[i] = gamma * (num / (1.0 - std::pow(a, static_cast<double>(m)))) / (eps + mx);
      }
      break;
    case OptimizerKind::Adam:
      for (std::size_t i = 0; i < dim; ++i) {
        double num = 0.0;
        double den = 0.0;
        for (std::int64_t k = 1; k <= m; ++k) {
          num += std::pow(a, static_cast<double>(m - k)) * (1.0 - a) * history[k - 1][i];
          den += std::pow(b, static_cast<double>(m - k)) * (1.0 - b) * history[k - 1][i] *
                 history[k - 1][i];
        }
        psi[i] = gamma * (num / (1.0 - std::pow(a, static_cast<double>(m)))) /
                 (eps + std::sqrt(den / (1.0 - std::pow(b, static_cast<double>(m)))));
      }
      break;
  }
  return psi;
}

}  // namespace lrv
