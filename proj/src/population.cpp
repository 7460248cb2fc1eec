#include "caresim/population.hpp"

#include <algorithm>

#include "caresim/measures.hpp"

namespace caresim {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::HbA1c: return "hba1c";
    case Measure::Ldl: return "ldl";
    case Measure::EyeExam: return "eye_exam";
    case Measure::Nephropathy: return "nephropathy";
  }
  return "unknown";
}

Measure measure_from_string(std::string_view name) {
  for (Measure m : kAllMeasures)
    if (to_string(m) == name) return m;
  throw InvalidSpec("unknown measure: " + std::string(name));
}

EventKind order_event_kind(Measure m) {
  switch (m) {
    case Measure::HbA1c: return EventKind::OrderHbA1c;
    case Measure::Ldl: return EventKind::OrderLdl;
    case Measure::EyeExam: return EventKind::OrderEyeExam;
    case Measure::Nephropathy: return EventKind::OrderNephropathy;
  }
  throw InvalidSpec("unknown measure");
}

EventKind completion_event_kind(Measure m) {
  switch (m) {
    case Measure::HbA1c: return EventKind::CompleteHbA1c;
    case Measure::Ldl: return EventKind::CompleteLdl;
    case Measure::EyeExam: return EventKind::CompleteEyeExam;
    case Measure::Nephropathy: return EventKind::CompleteNephropathy;
  }
  throw InvalidSpec("unknown measure");
}

Measure measure_of_completion(EventKind kind) {
  switch (kind) {
    case EventKind::CompleteHbA1c: return Measure::HbA1c;
    case EventKind::CompleteLdl: return Measure::Ldl;
    case EventKind::CompleteEyeExam: return Measure::EyeExam;
    case EventKind::CompleteNephropathy: return Measure::Nephropathy;
    default: throw InvalidSpec("not a completion event kind");
  }
}

std::string_view to_string(Insurance insurance) {
  switch (insurance) {
    case Insurance::Continuous: return "continuous";
    case Insurance::Intermittent: return "intermittent";
    case Insurance::Uninsured: return "uninsured";
    case Insurance::Medicaid: return "medicaid";
  }
  return "unknown";
}

Insurance insurance_from_string(std::string_view name) {
  for (auto ins : {Insurance::Continuous, Insurance::Intermittent,
                   Insurance::Uninsured, Insurance::Medicaid})
    if (to_string(ins) == name) return ins;
  throw InvalidSpec("unknown insurance category: " + std::string(name));
}

std::vector<PatientProfile> generate_population(const ClusterSpec& spec, int n,
                                                RngStream& stream) {
  validate(spec);
  if (n < 0) throw InvalidSpec("population size must be >= 0");

  std::vector<PatientProfile> patients;
  patients.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    PatientProfile p;
    p.id = i;
    p.age = stream.truncated_normal(spec.age_mean, spec.age_sd, 18.0, 95.0);
    p.sex = stream.bernoulli(0.5) ? Sex::Female : Sex::Male;
    p.race_ethnicity = stream.bernoulli(spec.minority_share)
                           ? RaceEthnicity::Minority
                           : RaceEthnicity::NonMinority;
    p.ses_index = stream.truncated_normal(spec.ses_mean, spec.ses_sd, 0.0, 1.0);
    p.insurance = static_cast<Insurance>(stream.categorical(spec.insurance_weights));
    p.has_diabetes = stream.bernoulli(spec.diabetes_prevalence);
    p.sick_hazard_mult = stream.uniform(0.8, 1.2);
    p.symptom_hazard_mult = stream.uniform(0.8, 1.2);
    // Stagger recurring wellness checks across the coming year.
    p.wellness_due = days(stream.uniform_int(0, 364));
    patients.push_back(p);
  }
  return patients;
}

AppointmentBook::AppointmentBook(const ClinicianProfile& clinician)
    : slot_(1),
      shift_start(clinician.shift_start),
      shift_end(clinician.shift_end),
      weekdays_only(clinician.weekdays_only),
      slot_minutes_(clinician.slot_minutes) {
  if (clinician.shift_end <= clinician.shift_start)
    throw InvalidSpec("clinician shift end must be after start");
  if (clinician.shift_end - clinician.shift_start < clinician.slot_minutes)
    throw InvalidSpec("clinician shift shorter than one slot");
}

SimTime AppointmentBook::next_slot_in_shift(SimTime t) const {
  for (;;) {
    const SimTime day = day_of(t);
    const SimTime day_start = day * kMinutesPerDay;
    if (!weekdays_only || is_weekday(t)) {
      SimTime within = minute_of_day(t);
      if (within <= shift_start) return day_start + shift_start;
      // Round up onto the slot grid anchored at shift start.
      const SimTime k = (within - shift_start + slot_minutes_ - 1) / slot_minutes_;
      const SimTime candidate = shift_start + k * slot_minutes_;
      if (candidate + slot_minutes_ <= shift_end) return day_start + candidate;
    }
    t = (day + 1) * kMinutesPerDay;
  }
}

SimTime AppointmentBook::earliest_slot(SimTime at) const {
  return next_slot_in_shift(std::max(at, slot_.free_at()));
}

SimTime AppointmentBook::book(SimTime at) {
  const SimTime slot = earliest_slot(at);
  return slot_.request(slot, slot_minutes_);
}

FacilityProfile build_facility(const ClusterSpec& spec, const FacilityConfig& config,
                               std::vector<PatientProfile>& patients,
                               [[maybe_unused]] RngStream& stream) {
  if (config.clinician_count < 1)
    throw NoClinicians("facility requires at least one clinician");

  FacilityProfile facility;
  facility.cluster_id = spec.cluster_id;
  facility.registry_enabled = true;

  facility.clinicians.reserve(static_cast<std::size_t>(config.clinician_count));
  for (int c = 0; c < config.clinician_count; ++c) {
    ClinicianProfile clin;
    clin.id = c;
    clin.shift_start = config.shift_start;
    clin.shift_end = config.shift_start + hours(config.shift_hours);
    clin.slot_minutes = config.slot_minutes;
    facility.clinicians.push_back(clin);
  }

  facility.hours_open = facility.clinicians.front().shift_start;
  facility.hours_close = facility.clinicians.front().shift_end;
  for (const auto& clin : facility.clinicians) {
    facility.hours_open = std::min(facility.hours_open, clin.shift_start);
    facility.hours_close = std::max(facility.hours_close, clin.shift_end);
  }

  facility.appointment_book.clear();
  for (const auto& clin : facility.clinicians)
    facility.appointment_book.emplace_back(clin);

  // Round-robin panel assignment in patient-id order (deterministic).
  for (std::size_t i = 0; i < patients.size(); ++i)
    patients[i].assigned_clinician =
        static_cast<std::int64_t>(i % facility.clinicians.size());

  return facility;
}

}  // namespace caresim
