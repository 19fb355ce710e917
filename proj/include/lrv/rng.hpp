#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lrv {

// Reproducible pseudo-random stream keyed by (seed, label path).
//
// Two streams with equal (seed, label) produce identical sequences; distinct
// labels under one seed give statistically independent sequences. Core
// generator is SplitMix64 with a state derived by hashing the label path
// into the seed. Normals come from the inverse CDF, one uniform per draw,
// so the draw count per call is fixed and state is a single 64-bit word.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string label);

  // Uniform on the open interval (0,1).
  double uniform01();

  // Uniform on [lo, hi].
  double uniform(double lo, double hi);

  double normal();
  void fill_normal(std::span<double> out);
  std::vector<double> normals(std::size_t n);

  std::uint64_t next_u64();

  // Child stream keyed by the concatenated label path; deterministic in
  // (seed, full path) and unaffected by the parent's position.
  RngStream split(std::string_view child_label) const;

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

  // Raw position, for exact checkpoint/resume.
  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t state_;
};

}  // namespace lrv
