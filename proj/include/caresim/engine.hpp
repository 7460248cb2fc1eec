#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "caresim/calendar.hpp"
#include "caresim/event.hpp"

namespace caresim {

class Engine;

// Handlers receive the popped event plus the engine for scheduling follow-up
// events. They must not touch the clock; all mutation of model state lives in
// the owning module, so the engine's trace is the exact realized-event log.
using EventHandler = std::function<void(const EventRecord&, Engine&)>;

class Engine {
 public:
  EventCalendar& calendar() { return calendar_; }
  const EventCalendar& calendar() const { return calendar_; }
  SimTime now() const { return calendar_.now(); }

  void register_handler(EventKind kind, EventHandler handler);

  std::uint64_t schedule(SimTime time, EventKind kind, std::int64_t subject,
                         Payload payload = {});

  // Processes every pending event with time <= t_end, appending each to the
  // trace before dispatch. Later events stay pending; the clock ends at t_end.
  // Throws UnknownEventKind when a popped event has no registered handler.
  void run_until(SimTime t_end);

  const std::vector<EventRecord>& trace() const { return trace_; }
  std::vector<EventRecord> take_trace() { return std::move(trace_); }

 private:
  EventCalendar calendar_;
  std::unordered_map<EventKind, EventHandler> handlers_;
  std::vector<EventRecord> trace_;
};

}  // namespace caresim
