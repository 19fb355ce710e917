#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "lrv/rng.hpp"

namespace lrv {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Final Cholesky pivot of the 3x3 unit-diagonal matrix Q(rho):
// 1 - rho2^2 - (rho3 - rho1*rho2)^2/(1 - rho1^2). Shared by region_check and
// the closed-form factorization so both see bit-identical values.
double correlation_pivot(double rho1, double rho2, double rho3);

// Membership test for the admissible correlation region: the cube
// [-0.95, 0.95]^3 intersected with the set where the pivot is nonnegative,
// i.e. where Q(rho) is positive semidefinite.
bool region_check(double rho1, double rho2, double rho3);
bool region_check(const std::array<double, 3>& rho);

// Product of closed intervals, optionally with three marked coordinates that
// must additionally form an admissible correlation triple.
class ParameterDomain {
 public:
  ParameterDomain() = default;
  explicit ParameterDomain(std::vector<Interval> intervals,
                           std::optional<std::array<int, 3>> correlation_slot = std::nullopt);

  int dim() const { return static_cast<int>(intervals_.size()); }
  const std::vector<Interval>& intervals() const { return intervals_; }
  const std::optional<std::array<int, 3>>& correlation_slot() const { return correlation_slot_; }

  double midpoint(int i) const;

  // True iff every coordinate lies in its closed interval and, when a
  // correlation slot is present, the marked triple passes region_check.
  // Throws on dimension mismatch.
  bool contains(std::span<const double> p) const;

  // Uniform sample; the correlation triple is rejection-sampled from its
  // cube until region_check passes (capped at 10^6 redraws).
  std::vector<double> sample(RngStream& stream) const;
  void sample(RngStream& stream, std::span<double> out) const;

 private:
  std::vector<Interval> intervals_;
  std::optional<std::array<int, 3>> correlation_slot_;
};

}  // namespace lrv
