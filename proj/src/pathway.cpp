#include "caresim/pathway.hpp"

#include <algorithm>
#include <cmath>

namespace caresim {

std::string_view to_string(VisitReason reason) {
  switch (reason) {
    case VisitReason::WellnessCheck: return "wellness_check";
    case VisitReason::SickVisit: return "sick_visit";
    case VisitReason::DiabetesSymptoms: return "diabetes_symptoms";
    case VisitReason::RecurringFollowup: return "recurring_followup";
  }
  return "unknown";
}

VisitReason visit_reason_from_string(std::string_view name) {
  for (auto reason : {VisitReason::WellnessCheck, VisitReason::SickVisit,
                      VisitReason::DiabetesSymptoms, VisitReason::RecurringFollowup})
    if (to_string(reason) == name) return reason;
  throw InvalidSpec("unknown visit reason: " + std::string(name));
}

DailyHazards daily_hazards(const PatientProfile& patient, const PdfTable& table) {
  DailyHazards hazards;
  hazards.sick_p = std::min(
      1.0, table.at(pdf_keys::kSickPrompt).adjusted_p(patient) * patient.sick_hazard_mult);
  hazards.symptom_p =
      std::min(1.0, table.at(pdf_keys::kSymptomPrompt).adjusted_p(patient) *
                        patient.symptom_hazard_mult);
  return hazards;
}

std::vector<EventRecord> daily_entry_prompts(const PatientProfile& patient,
                                             SimTime day_start, const PdfTable& table,
                                             RngStream& stream, bool suppress_wellness) {
  return daily_entry_prompts_with(patient, day_start, daily_hazards(patient, table),
                                  stream, suppress_wellness);
}

std::vector<EventRecord> daily_entry_prompts_with(const PatientProfile& patient,
                                                  SimTime day_start,
                                                  const DailyHazards& hazards,
                                                  RngStream& stream,
                                                  bool suppress_wellness) {
  std::vector<EventRecord> prompts;

  if (!suppress_wellness && day_start >= patient.wellness_due) {
    EventRecord ev;
    ev.time = day_start;
    ev.kind = EventKind::WellnessPrompt;
    ev.subject = patient.id;
    prompts.push_back(std::move(ev));
  }
  if (stream.bernoulli(hazards.sick_p)) {
    EventRecord ev;
    ev.time = day_start;
    ev.kind = EventKind::SickPrompt;
    ev.subject = patient.id;
    prompts.push_back(std::move(ev));
  }
  if (patient.has_diabetes && stream.bernoulli(hazards.symptom_p)) {
    EventRecord ev;
    ev.time = day_start;
    ev.kind = EventKind::SymptomPrompt;
    ev.subject = patient.id;
    prompts.push_back(std::move(ev));
  }
  return prompts;
}

std::optional<Appointment> request_appointment(const PatientProfile& patient,
                                               VisitReason reason, SimTime at,
                                               FacilityProfile& facility,
                                               SimTime acceptance_window_minutes) {
  if (patient.assigned_clinician < 0 ||
      patient.assigned_clinician >=
          static_cast<std::int64_t>(facility.appointment_book.size()))
    throw NoClinicians("patient " + std::to_string(patient.id) +
                       " has no assigned clinician");

  auto& book = facility.appointment_book[patient.assigned_clinician];
  const SimTime slot = book.earliest_slot(at);
  if (slot - at > acceptance_window_minutes) return std::nullopt;  // balk

  Appointment appt;
  appt.patient = patient.id;
  appt.clinician = patient.assigned_clinician;
  appt.slot_start = book.book(at);
  appt.duration = book.slot_minutes();
  appt.reason = reason;
  return appt;
}

double order_probability(const PatientProfile& patient,
                         const ClinicianProfile& clinician, Measure measure,
                         const PdfTable& table) {
  const double base = table.at(pdf_keys::order(measure)).adjusted_p(patient);
  const double scaled = base * clinician.order_multiplier[measure_index(measure)];
  return std::min(1.0, std::max(0.0, scaled));
}

bool measure_satisfied(const PatientProfile& patient, Measure measure,
                       SimTime year_start, SimTime at) {
  const auto& last = patient.screening_history[measure_index(measure)];
  return last.has_value() && *last >= year_start && *last <= at;
}

std::vector<CareOrder> doctor_visit(PatientProfile& patient,
                                    const ClinicianProfile& clinician, SimTime at,
                                    VisitReason reason, const PdfTable& table,
                                    const std::array<RngStream*, 4>& order_streams,
                                    SimTime year_start) {
  std::vector<CareOrder> orders;
  if (patient.has_diabetes) {
    for (Measure m : kAllMeasures) {
      if (measure_satisfied(patient, m, year_start, at)) continue;
      const double p = order_probability(patient, clinician, m, table);
      if (order_streams[measure_index(m)]->bernoulli(p)) {
        CareOrder order;
        order.patient = patient.id;
        order.measure = m;
        order.ordered_at = at;
        orders.push_back(order);
      }
    }
  }
  if (reason == VisitReason::WellnessCheck) patient.wellness_due = at + days(365);
  return orders;
}

CareOrder complete_test(CareOrder order, const PatientProfile& patient,
                        const PdfTable& table, RngStream& stream) {
  if (order.completed) throw InvalidSpec("order already completed");
  const auto& spec = table.at(pdf_keys::completion(order.measure));
  if (stream.bernoulli(spec.adjusted_p(patient))) {
    const double delay =
        placeholder_event_outcome(table.at(pdf_keys::kCompletionDelay), patient, stream);
    order.completed = true;
    order.completed_at = order.ordered_at + static_cast<SimTime>(delay);
  }
  return order;
}

EpisodeSimulation::EpisodeSimulation(std::vector<PatientProfile> patients,
                                     FacilityProfile facility, PdfTable table,
                                     PathwayConfig config, const RngStream& run_stream)
    : patients_(std::move(patients)),
      facility_(std::move(facility)),
      table_(std::move(table)),
      config_(config),
      run_stream_(run_stream) {
  if (config_.warmup_days < 0) throw InvalidSpec("warmup_days must be >= 0");
  if (config_.horizon_days < 1) throw InvalidSpec("horizon_days must be >= 1");
  for (std::size_t i = 0; i < patients_.size(); ++i)
    if (patients_[i].id != static_cast<std::int64_t>(i))
      throw InvalidSpec("patient ids must be 0..n-1 in order");

  state_.reserve(patients_.size());
  for (auto& patient : patients_) {
    // Shift generation-relative due dates into the absolute clock frame.
    patient.wellness_due += measure_start();

    PatientState ps;
    ps.hazards = daily_hazards(patient, table_);
    ps.attendance_p = table_.at(pdf_keys::kAttendance).adjusted_p(patient);
    for (Measure m : kAllMeasures)
      ps.order_p[measure_index(m)] =
          table_.at(pdf_keys::order(m)).adjusted_p(patient);

    const std::string base = "p" + std::to_string(patient.id);
    ps.streams.reserve(11);
    ps.streams.push_back(run_stream_.child(base + "/prompts"));
    ps.streams.push_back(run_stream_.child(base + "/attendance"));
    ps.streams.push_back(run_stream_.child(base + "/window"));
    for (Measure m : kAllMeasures)
      ps.streams.push_back(
          run_stream_.child(base + "/order/" + std::string(to_string(m))));
    for (Measure m : kAllMeasures)
      ps.streams.push_back(
          run_stream_.child(base + "/completion/" + std::string(to_string(m))));
    state_.push_back(std::move(ps));
  }

  register_handlers();
  schedule_day_ticks(0, measure_end());
}

void EpisodeSimulation::register_handlers() {
  auto bind = [this](void (EpisodeSimulation::*fn)(const EventRecord&)) {
    return [this, fn](const EventRecord& ev, Engine&) { (this->*fn)(ev); };
  };

  engine_.register_handler(EventKind::DayTick, bind(&EpisodeSimulation::on_day_tick));
  engine_.register_handler(EventKind::WellnessPrompt,
                           [this](const EventRecord& ev, Engine&) {
                             on_prompt(ev, VisitReason::WellnessCheck);
                           });
  engine_.register_handler(EventKind::SickPrompt,
                           [this](const EventRecord& ev, Engine&) {
                             on_prompt(ev, VisitReason::SickVisit);
                           });
  engine_.register_handler(EventKind::SymptomPrompt,
                           [this](const EventRecord& ev, Engine&) {
                             on_prompt(ev, VisitReason::DiabetesSymptoms);
                           });
  engine_.register_handler(EventKind::AppointmentRequested,
                           bind(&EpisodeSimulation::on_appointment_requested));
  engine_.register_handler(EventKind::AppointmentBooked,
                           bind(&EpisodeSimulation::on_appointment_booked));
  engine_.register_handler(EventKind::Attendance,
                           bind(&EpisodeSimulation::on_attendance));
  engine_.register_handler(EventKind::DoctorVisit,
                           bind(&EpisodeSimulation::on_doctor_visit));
  for (Measure m : kAllMeasures) {
    engine_.register_handler(order_event_kind(m),
                             [this, m](const EventRecord& ev, Engine&) {
                               on_order(ev, m);
                             });
    engine_.register_handler(completion_event_kind(m),
                             [this, m](const EventRecord& ev, Engine&) {
                               on_completion(ev, m);
                             });
  }
  engine_.register_handler(EventKind::WellnessReset,
                           [](const EventRecord&, Engine&) {});
  engine_.register_handler(EventKind::Balk, [](const EventRecord&, Engine&) {});
  engine_.register_handler(EventKind::NoShow, bind(&EpisodeSimulation::on_no_show));
  engine_.register_handler(EventKind::RegistryRecall,
                           bind(&EpisodeSimulation::on_registry_recall));
}

void EpisodeSimulation::schedule_day_ticks(SimTime from, SimTime to) {
  for (SimTime t = from; t < to; t += kMinutesPerDay)
    engine_.schedule(t, EventKind::DayTick, -1);
}

void EpisodeSimulation::run_warmup() {
  if (measure_start() > 0) engine_.run_until(measure_start() - 1);
  warmup_done_ = true;
}

void EpisodeSimulation::run_measurement_year() {
  if (!warmup_done_) run_warmup();
  engine_.run_until(measure_end());
}

void EpisodeSimulation::on_day_tick(const EventRecord& ev) {
  for (std::size_t i = 0; i < patients_.size(); ++i) {
    auto& patient = patients_[i];
    auto& ps = state_[i];
    auto prompts = daily_entry_prompts_with(patient, ev.time, ps.hazards,
                                            prompt_stream(patient.id),
                                            ps.wellness_pending);
    for (auto& prompt : prompts)
      engine_.schedule(ev.time, prompt.kind, prompt.subject);
  }
}

void EpisodeSimulation::on_prompt(const EventRecord& ev, VisitReason reason) {
  if (reason == VisitReason::WellnessCheck)
    state_[ev.subject].wellness_pending = true;
  engine_.schedule(ev.time, EventKind::AppointmentRequested, ev.subject,
                   {{"reason", std::string(to_string(reason))}});
}

void EpisodeSimulation::on_appointment_requested(const EventRecord& ev) {
  const auto reason = visit_reason_from_string(ev.payload.at(0).second);
  auto& patient = patients_[ev.subject];

  const double window = placeholder_event_outcome(
      table_.at(pdf_keys::kAcceptanceWindow), patient, window_stream(ev.subject));
  const auto appt = request_appointment(patient, reason, ev.time, facility_,
                                        static_cast<SimTime>(window));
  if (!appt) {
    engine_.schedule(ev.time, EventKind::Balk, ev.subject,
                     {{"reason", std::string(to_string(reason))}});
    if (reason == VisitReason::WellnessCheck && facility_.registry_enabled) {
      // Patient waits for the registry to recall them instead of re-prompting
      // daily; wellness_pending stays set until then.
      const SimTime recall_at = ev.time + config_.recall_interval;
      if (recall_at < measure_end())
        engine_.schedule(recall_at, EventKind::RegistryRecall, ev.subject);
    }
    return;
  }

  if (reason == VisitReason::WellnessCheck)
    state_[ev.subject].wellness_booked = true;
  engine_.schedule(ev.time, EventKind::AppointmentBooked, ev.subject,
                   {{"reason", std::string(to_string(reason))},
                    {"slot", std::to_string(appt->slot_start)},
                    {"clinician", std::to_string(appt->clinician)}});
}

void EpisodeSimulation::on_appointment_booked(const EventRecord& ev) {
  const SimTime slot = std::stoll(ev.payload.at(1).second);
  if (slot >= measure_end()) return;  // episode runs off the simulated year
  engine_.schedule(slot, EventKind::Attendance, ev.subject,
                   {{"reason", ev.payload.at(0).second}, {"clinician", ev.payload.at(2).second}});
}

void EpisodeSimulation::on_attendance(const EventRecord& ev) {
  auto& ps = state_[ev.subject];
  const bool shows = attendance_stream(ev.subject).bernoulli(ps.attendance_p);
  engine_.schedule(ev.time, shows ? EventKind::DoctorVisit : EventKind::NoShow,
                   ev.subject,
                   {{"reason", ev.payload.at(0).second},
                    {"clinician", ev.payload.at(1).second}});
}

void EpisodeSimulation::on_no_show(const EventRecord& ev) {
  const auto reason = visit_reason_from_string(ev.payload.at(0).second);
  if (reason == VisitReason::WellnessCheck) {
    // The prompt fires again the next day and a fresh request goes out.
    state_[ev.subject].wellness_pending = false;
    state_[ev.subject].wellness_booked = false;
  }
}

void EpisodeSimulation::on_doctor_visit(const EventRecord& ev) {
  const auto reason = visit_reason_from_string(ev.payload.at(0).second);
  const auto clinician_id = std::stoll(ev.payload.at(1).second);
  auto& patient = patients_[ev.subject];
  const auto& clinician = facility_.clinicians[clinician_id];

  std::array<RngStream*, 4> streams{};
  for (Measure m : kAllMeasures)
    streams[measure_index(m)] = &order_stream(ev.subject, m);

  const auto orders = doctor_visit(patient, clinician, ev.time, reason, table_,
                                   streams, year_start_at(ev.time));
  for (const auto& order : orders)
    engine_.schedule(ev.time, order_event_kind(order.measure), ev.subject);

  if (reason == VisitReason::WellnessCheck) {
    state_[ev.subject].wellness_pending = false;
    state_[ev.subject].wellness_booked = false;
    engine_.schedule(ev.time, EventKind::WellnessReset, ev.subject,
                     {{"next_due", std::to_string(patient.wellness_due)}});
  }
}

void EpisodeSimulation::on_order(const EventRecord& ev, Measure measure) {
  auto& patient = patients_[ev.subject];
  CareOrder order;
  order.patient = ev.subject;
  order.measure = measure;
  order.ordered_at = ev.time;
  order = complete_test(order, patient, table_, completion_stream(ev.subject, measure));
  if (order.completed && *order.completed_at < measure_end())
    engine_.schedule(*order.completed_at, completion_event_kind(measure), ev.subject,
                     {{"ordered_at", std::to_string(order.ordered_at)}});
}

void EpisodeSimulation::on_completion(const EventRecord& ev, Measure measure) {
  patients_[ev.subject].screening_history[measure_index(measure)] = ev.time;
}

void EpisodeSimulation::on_registry_recall(const EventRecord& ev) {
  const auto& patient = patients_[ev.subject];
  auto& ps = state_[ev.subject];
  // Drop the recall when the visit already happened (due pushed forward) or
  // an appointment is on the books.
  if (ev.time < patient.wellness_due || ps.wellness_booked) return;
  ps.wellness_pending = true;
  engine_.schedule(ev.time, EventKind::AppointmentRequested, ev.subject,
                   {{"reason", std::string(to_string(VisitReason::WellnessCheck))}});
}

}  // namespace caresim
