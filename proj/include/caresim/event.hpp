#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "caresim/time.hpp"

namespace caresim {

// Realized and pending simulation events. The named kinds cover the primary
// care episode flow; Placeholder carries any additional configured event
// whose distribution ships as a plain uniform/categorical spec.
enum class EventKind : std::uint8_t {
  DayTick,        // per-day driver, also used for warm-up bookkeeping
  WellnessPrompt,
  SickPrompt,
  SymptomPrompt,
  AppointmentRequested,
  AppointmentBooked,
  Balk,
  Attendance,
  DoctorVisit,
  OrderHbA1c,
  OrderLdl,
  OrderEyeExam,
  OrderNephropathy,
  CompleteHbA1c,
  CompleteLdl,
  CompleteEyeExam,
  CompleteNephropathy,
  WellnessReset,
  RegistryRecall,
  NoShow,
  Placeholder,
};

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

using Payload = std::vector<std::pair<std::string, std::string>>;

struct EventRecord {
  std::uint64_t id = 0;     // unique within a run, assigned by the calendar
  SimTime time = 0;
  EventKind kind = EventKind::Placeholder;
  std::int64_t subject = -1;  // patient / clinician / facility id
  Payload payload;
};

// One line per record: id TAB time TAB kind TAB subject TAB k=v,k=v
std::string to_trace_line(const EventRecord& record);
std::string to_trace_text(const std::vector<EventRecord>& trace);

}  // namespace caresim
