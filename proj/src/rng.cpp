#include "caresim/rng.hpp"

#include <utility>

namespace caresim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string label)
    : master_seed_(master_seed), label_(std::move(label)) {
  if (label_.empty()) throw InvalidSpec("RngStream label must be non-empty");
  std::uint64_t sm = stream_fingerprint(master_seed_, label_);
  for (auto& word : state_) word = splitmix64(sm);
  // xoshiro requires a non-zero state; splitmix64 output makes all-zero
  // astronomically unlikely, but guard anyway.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

RngStream RngStream::child(std::string_view suffix) const {
  return RngStream(master_seed_, label_ + "/" + std::string(suffix));
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256**
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (lo > hi) throw InvalidSpec("uniform(lo, hi): lo > hi");
  return lo + (hi - lo) * uniform();
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw InvalidSpec("uniform_int(lo, hi): lo > hi");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

std::size_t RngStream::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InvalidSpec("categorical: negative weight");
    total += w;
  }
  if (weights.empty() || total <= 0.0)
    throw InvalidSpec("categorical: weights must be non-empty with positive sum");
  double u = uniform() * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

double RngStream::truncated_normal(double mean, double sd, double lo, double hi) {
  if (lo > hi) throw InvalidSpec("truncated_normal: lo > hi");
  if (sd <= 0.0) return std::min(std::max(mean, lo), hi);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Box-Muller; u1 bounded away from 0 so log() stays finite.
    const double u1 = std::max(uniform(), 0x1.0p-53);
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    const double value = mean + sd * z;
    if (value >= lo && value <= hi) return value;
  }
  // Extremely narrow truncation window; fall back to the nearest bound.
  return std::min(std::max(mean, lo), hi);
}

RngStream derive_stream(std::uint64_t master_seed, std::string_view label) {
  return RngStream(master_seed, std::string(label));
}

std::uint64_t stream_fingerprint(std::uint64_t master_seed, std::string_view label) {
  std::uint64_t x = master_seed ^ (fnv1a64(label) * 0x9e3779b97f4a7c15ULL);
  return splitmix64(x);
}

}  // namespace caresim
