#include "lrv/rng.hpp"

#include "lrv/normal.hpp"

namespace lrv {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_state(std::uint64_t seed, std::string_view label) {
  return mix64(mix64(seed + kGamma) ^ fnv1a(label));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string label)
    : seed_(seed), label_(std::move(label)), state_(derive_state(seed, label_)) {}

std::uint64_t RngStream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double RngStream::uniform01() {
  // 53 significant bits, offset by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + uniform01() * (hi - lo);
}

double RngStream::normal() { return inverse_normal_cdf(uniform01()); }

void RngStream::fill_normal(std::span<double> out) {
  for (double& x : out) x = normal();
}

std::vector<double> RngStream::normals(std::size_t n) {
  std::vector<double> out(n);
  fill_normal(out);
  return out;
}

RngStream RngStream::split(std::string_view child_label) const {
  std::string path = label_;
  path += '/';
  path += child_label;
  return RngStream(seed_, std::move(path));
}

}  // namespace lrv
