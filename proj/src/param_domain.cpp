#include "lrv/param_domain.hpp"

#include <cmath>
#include <stdexcept>

namespace lrv {

double correlation_pivot(double rho1, double rho2, double rho3) {
  const double t = rho3 - rho1 * rho2;
  return 1.0 - rho2 * rho2 - t * t / (1.0 - rho1 * rho1);
}

bool region_check(double rho1, double rho2, double rho3) {
  constexpr double bound = 0.95;
  if (std::fabs(rho1) > bound || std::fabs(rho2) > bound || std::fabs(rho3) > bound) {
    return false;
  }
  return correlation_pivot(rho1, rho2, rho3) >= 0.0;
}

bool region_check(const std::array<double, 3>& rho) {
  return region_check(rho[0], rho[1], rho[2]);
}

ParameterDomain::ParameterDomain(std::vector<Interval> intervals,
                                 std::optional<std::array<int, 3>> correlation_slot)
    : intervals_(std::move(intervals)), correlation_slot_(correlation_slot) {
  for (const Interval& iv : intervals_) {
    if (!(iv.lo <= iv.hi)) {
      throw std::invalid_argument("ParameterDomain: interval with lo > hi");
    }
  }
  if (correlation_slot_) {
    for (int idx : *correlation_slot_) {
      if (idx < 0 || idx >= dim()) {
        throw std::invalid_argument("ParameterDomain: correlation index out of range");
      }
      if (intervals_[idx].lo < -0.95 || intervals_[idx].hi > 0.95) {
        throw std::invalid_argument(
            "ParameterDomain: correlation intervals must lie in [-0.95, 0.95]");
      }
    }
  }
}

double ParameterDomain::midpoint(int i) const {
  return 0.5 * (intervals_[i].lo + intervals_[i].hi);
}

bool ParameterDomain::contains(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim()) {
    throw std::invalid_argument("ParameterDomain::contains: dimension mismatch");
  }
  for (int i = 0; i < dim(); ++i) {
    if (p[i] < intervals_[i].lo || p[i] > intervals_[i].hi) return false;
  }
  if (correlation_slot_) {
    const auto& s = *correlation_slot_;
    if (!region_check(p[s[0]], p[s[1]], p[s[2]])) return false;
  }
  return true;
}

void ParameterDomain::sample(RngStream& stream, std::span<double> out) const {
  if (static_cast<int>(out.size()) != dim()) {
    throw std::invalid_argument("ParameterDomain::sample: output size mismatch");
  }
  for (int i = 0; i < dim(); ++i) {
    out[i] = stream.uniform(intervals_[i].lo, intervals_[i].hi);
  }
  if (correlation_slot_) {
    const auto& s = *correlation_slot_;
    constexpr long kCap = 1000000;
    for (long attempt = 0;; ++attempt) {
      if (region_check(out[s[0]], out[s[1]], out[s[2]])) break;
      if (attempt >= kCap) {
        throw std::runtime_error(
            "ParameterDomain::sample: correlation region rejection cap exceeded");
      }
      for (int idx : s) {
        out[idx] = stream.uniform(intervals_[idx].lo, intervals_[idx].hi);
      }
    }
  }
}

std::vector<double> ParameterDomain::sample(RngStream& stream) const {
  std::vector<double> p(dim());
  sample(stream, std::span<double>(p));
  return p;
}

}  // namespace lrv
