#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "caresim/errors.hpp"

namespace caresim {

// Named deterministic random stream. A stream is a pure function of
// (master_seed, label): the same pair yields the same draw sequence on every
// platform, and distinct labels give statistically independent sequences.
// Per-entity / per-subsystem labels mean that adding an event kind does not
// perturb draws consumed elsewhere.
//
// Generator: xoshiro256** seeded through splitmix64 from a hash of
// (master_seed, label). The standard <random> engines are avoided because
// their distributions are not bit-stable across library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string label);

  const std::string& label() const { return label_; }
  std::uint64_t master_seed() const { return master_seed_; }

  // Derived stream with label "<this.label>/<suffix>".
  RngStream child(std::string_view suffix) const;

  std::uint64_t next_u64();

  // Uniform real in [0, 1).
  double uniform();

  // Uniform real in [lo, hi); degenerate lo == hi returns lo.
  double uniform(double lo, double hi);

  bool bernoulli(double p);

  // Uniform integer in [lo, hi] inclusive, unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Index drawn proportional to non-negative weights. Throws InvalidSpec on
  // empty or all-zero weights.
  std::size_t categorical(std::span<const double> weights);

  // Normal(mean, sd) truncated to [lo, hi] by resampling (Box-Muller).
  double truncated_normal(double mean, double sd, double lo, double hi);

 private:
  std::uint64_t master_seed_ = 0;
  std::string label_;
  std::array<std::uint64_t, 4> state_{};
};

RngStream derive_stream(std::uint64_t master_seed, std::string_view label);

// Stable 64-bit digest of (master_seed, label); used for run manifests.
std::uint64_t stream_fingerprint(std::uint64_t master_seed, std::string_view label);

}  // namespace caresim
