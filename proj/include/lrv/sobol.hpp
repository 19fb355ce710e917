#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lrv {

// Sobol low-discrepancy sequence with Joe-Kuo direction numbers, dimensions
// up to 128. Points are produced in Gray-code order; enumeration starts at
// index 1 so the all-zeros point at index 0 is never emitted (it would map
// to -inf under the inverse normal transform).
class SobolSequence {
 public:
  static constexpr int kMaxDim = 128;
  static constexpr int kBits = 32;

  explicit SobolSequence(int dim);

  int dim() const { return dim_; }

  // Index of the point the next call to next() will return; starts at 1.
  std::uint64_t cursor() const { return emitted_ + 1; }

  void next(std::span<double> out);
  std::vector<double> next();

 private:
  int dim_;
  std::uint64_t emitted_ = 0;
  std::vector<std::uint32_t> state_;       // current integer coordinates
  std::vector<std::uint32_t> directions_;  // dim * kBits, row-major per dim
};

}  // namespace lrv
