#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "caresim/errors.hpp"
#include "caresim/event.hpp"
#include "caresim/time.hpp"

namespace caresim {

// Pending-event priority structure ordered by (time, insertion sequence).
// Ties at equal times pop in insertion order, which keeps runs reproducible;
// the clock never moves backward.
class EventCalendar {
 public:
  SimTime now() const { return now_; }
  bool empty() const { return pending_.empty(); }
  std::size_t size() const { return pending_.size(); }

  // Throws TimeInPast if time < now(). Returns the assigned event id.
  std::uint64_t schedule(SimTime time, EventRecord record);

  // Earliest pending time, if any.
  std::optional<SimTime> peek_time() const;

  // Pops the earliest pending event and advances the clock to its time.
  EventRecord pop();

  // Advances the clock without processing (used to close out a horizon).
  void advance_to(SimTime time);

 private:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    EventRecord record;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_id_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> pending_;
};

}  // namespace caresim
