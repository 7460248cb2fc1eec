#include <algorithm>
#include <sstream>

#include "caresim/calendar.hpp"
#include "caresim/engine.hpp"
#include "caresim/event.hpp"
#include "caresim/resource.hpp"

namespace caresim {

namespace {

struct KindName {
  EventKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {EventKind::DayTick, "day_tick"},
    {EventKind::WellnessPrompt, "wellness_prompt"},
    {EventKind::SickPrompt, "sick_prompt"},
    {EventKind::SymptomPrompt, "symptom_prompt"},
    {EventKind::AppointmentRequested, "appointment_requested"},
    {EventKind::AppointmentBooked, "appointment_booked"},
    {EventKind::Balk, "balk"},
    {EventKind::Attendance, "attendance"},
    {EventKind::DoctorVisit, "doctor_visit"},
    {EventKind::OrderHbA1c, "order_hba1c"},
    {EventKind::OrderLdl, "order_ldl"},
    {EventKind::OrderEyeExam, "order_eye_exam"},
    {EventKind::OrderNephropathy, "order_nephropathy"},
    {EventKind::CompleteHbA1c, "complete_hba1c"},
    {EventKind::CompleteLdl, "complete_ldl"},
    {EventKind::CompleteEyeExam, "complete_eye_exam"},
    {EventKind::CompleteNephropathy, "complete_nephropathy"},
    {EventKind::WellnessReset, "wellness_reset"},
    {EventKind::RegistryRecall, "registry_recall"},
    {EventKind::NoShow, "no_show"},
    {EventKind::Placeholder, "placeholder"},
};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& entry : kKindNames)
    if (entry.kind == kind) return entry.name;
  return "unknown";
}

EventKind event_kind_from_string(std::string_view name) {
  for (const auto& entry : kKindNames)
    if (entry.name == name) return entry.kind;
  throw UnknownEventKind("unknown event kind: " + std::string(name));
}

std::string to_trace_line(const EventRecord& record) {
  std::ostringstream out;
  out << record.id << '\t' << record.time << '\t' << to_string(record.kind)
      << '\t' << record.subject << '\t';
  for (std::size_t i = 0; i < record.payload.size(); ++i) {
    if (i) out << ',';
    out << record.payload[i].first << '=' << record.payload[i].second;
  }
  return out.str();
}

std::string to_trace_text(const std::vector<EventRecord>& trace) {
  std::string out;
  for (const auto& record : trace) {
    out += to_trace_line(record);
    out += '\n';
  }
  return out;
}

std::uint64_t EventCalendar::schedule(SimTime time, EventRecord record) {
  if (time < now_)
    throw TimeInPast("schedule at t=" + std::to_string(time) +
                     " before clock t=" + std::to_string(now_));
  record.time = time;
  record.id = next_id_++;
  const std::uint64_t id = record.id;
  pending_.push(Entry{time, next_seq_++, std::move(record)});
  return id;
}

std::optional<SimTime> EventCalendar::peek_time() const {
  if (pending_.empty()) return std::nullopt;
  return pending_.top().time;
}

EventRecord EventCalendar::pop() {
  if (pending_.empty()) throw Error("pop from empty calendar");
  Entry entry = pending_.top();
  pending_.pop();
  now_ = entry.time;
  return std::move(entry.record);
}

void EventCalendar::advance_to(SimTime time) {
  if (time > now_) now_ = time;
}

void Engine::register_handler(EventKind kind, EventHandler handler) {
  handlers_[kind] = std::move(handler);
}

std::uint64_t Engine::schedule(SimTime time, EventKind kind,
                               std::int64_t subject, Payload payload) {
  EventRecord record;
  record.kind = kind;
  record.subject = subject;
  record.payload = std::move(payload);
  return calendar_.schedule(time, std::move(record));
}

void Engine::run_until(SimTime t_end) {
  while (auto next = calendar_.peek_time()) {
    if (*next > t_end) break;
    EventRecord record = calendar_.pop();
    auto it = handlers_.find(record.kind);
    if (it == handlers_.end())
      throw UnknownEventKind("no handler for event kind: " +
                             std::string(to_string(record.kind)));
    trace_.push_back(record);
    it->second(record, *this);
  }
  calendar_.advance_to(t_end);
}

FifoResource::FifoResource(int capacity) {
  if (capacity < 1) throw InvalidSpec("FifoResource capacity must be >= 1");
  slots_.assign(static_cast<std::size_t>(capacity), SimTime{0});
}

SimTime FifoResource::free_at() const {
  return *std::min_element(slots_.begin(), slots_.end());
}

SimTime FifoResource::request(SimTime at, SimTime service_minutes) {
  auto slot = std::min_element(slots_.begin(), slots_.end());
  const SimTime grant = std::max(at, *slot);
  *slot = grant + service_minutes;
  ++grants_;
  return grant;
}

}  // namespace caresim
