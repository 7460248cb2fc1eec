#pragma once

#include <cstdint>
#include <vector>

#include "caresim/errors.hpp"
#include "caresim/time.hpp"

namespace caresim {

// Capacity-constrained resource served strictly first-in first-out. Requests
// are resolved to grant times immediately: a request waits exactly until the
// earliest-released slot, so waiting is represented by grants in the future
// rather than an explicit queue. Never more than `capacity` holders overlap.
class FifoResource {
 public:
  explicit FifoResource(int capacity);

  int capacity() const { return static_cast<int>(slots_.size()); }

  // Earliest time a new request could start service.
  SimTime free_at() const;

  // Grants the earliest slot at or after `at`, holding it for
  // `service_minutes`. Grant times are nondecreasing in arrival order when
  // requests arrive in nondecreasing `at` order.
  SimTime request(SimTime at, SimTime service_minutes);

  std::uint64_t grants() const { return grants_; }

 private:
  std::vector<SimTime> slots_;  // per-slot busy-until
  std::uint64_t grants_ = 0;
};

}  // namespace caresim
