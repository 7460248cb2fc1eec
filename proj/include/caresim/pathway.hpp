#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "caresim/engine.hpp"
#include "caresim/pdf.hpp"
#include "caresim/population.hpp"

namespace caresim {

enum class VisitReason : std::uint8_t {
  WellnessCheck,
  SickVisit,
  DiabetesSymptoms,
  RecurringFollowup,
};

std::string_view to_string(VisitReason reason);
VisitReason visit_reason_from_string(std::string_view name);

struct Appointment {
  std::int64_t patient = -1;
  std::int64_t clinician = -1;
  SimTime slot_start = 0;
  SimTime duration = 0;
  VisitReason reason = VisitReason::WellnessCheck;
};

struct CareOrder {
  std::int64_t patient = -1;
  Measure measure = Measure::HbA1c;
  SimTime ordered_at = 0;
  bool completed = false;
  std::optional<SimTime> completed_at;
};

// Adjusted daily hazards for one patient; fixed attributes mean these can be
// computed once per run.
struct DailyHazards {
  double sick_p = 0.0;
  double symptom_p = 0.0;
};

DailyHazards daily_hazards(const PatientProfile& patient, const PdfTable& table);

// Entry prompts for one simulated day. The wellness prompt fires when the day
// reaches the patient's due date (registry recall); sick and symptom prompts
// are hazard draws, the symptom prompt gated on diabetes. `suppress_wellness`
// lets the caller hold the prompt while an episode is already in flight.
std::vector<EventRecord> daily_entry_prompts(const PatientProfile& patient,
                                             SimTime day_start, const PdfTable& table,
                                             RngStream& stream,
                                             bool suppress_wellness = false);
std::vector<EventRecord> daily_entry_prompts_with(const PatientProfile& patient,
                                                  SimTime day_start,
                                                  const DailyHazards& hazards,
                                                  RngStream& stream,
                                                  bool suppress_wellness = false);

// Books the earliest FIFO-consistent slot on the assigned clinician's book.
// Returns nullopt (a balk, not an error) when that slot falls outside the
// acceptance window; a balked request does not consume the slot.
std::optional<Appointment> request_appointment(const PatientProfile& patient,
                                               VisitReason reason, SimTime at,
                                               FacilityProfile& facility,
                                               SimTime acceptance_window_minutes);

// Realized probability that a visit produces a screening order: the table's
// attribute-adjusted baseline times the clinician's training multiplier,
// clamped into [0, 1].
double order_probability(const PatientProfile& patient,
                         const ClinicianProfile& clinician, Measure measure,
                         const PdfTable& table);

// A measure counts as satisfied once a completed test falls inside the
// current measurement year; repeat tests still happen but count once.
bool measure_satisfied(const PatientProfile& patient, Measure measure,
                       SimTime year_start, SimTime at);

// The doctor visit: draws one order Bernoulli per unsatisfied measure for
// diabetic patients (none for others) and pushes wellness_due a year ahead
// when the visit is a wellness check.
std::vector<CareOrder> doctor_visit(PatientProfile& patient,
                                    const ClinicianProfile& clinician, SimTime at,
                                    VisitReason reason, const PdfTable& table,
                                    const std::array<RngStream*, 4>& order_streams,
                                    SimTime year_start);

// Draws whether and when an ordered test actually gets performed.
CareOrder complete_test(CareOrder order, const PatientProfile& patient,
                        const PdfTable& table, RngStream& stream);

struct PathwayConfig {
  int warmup_days = 30;
  int horizon_days = 365;
  SimTime recall_interval = days(14);
};

// One simulated year of primary-care episodes for one facility. Owns the
// engine, per-patient streams, and all episode handlers. The clock starts at
// warm-up; measured statistics use [measure_start, measure_end).
class EpisodeSimulation {
 public:
  EpisodeSimulation(std::vector<PatientProfile> patients, FacilityProfile facility,
                    PdfTable table, PathwayConfig config,
                    const RngStream& run_stream);

  // Handlers capture `this`; the object must stay put once constructed.
  EpisodeSimulation(const EpisodeSimulation&) = delete;
  EpisodeSimulation& operator=(const EpisodeSimulation&) = delete;
  EpisodeSimulation(EpisodeSimulation&&) = delete;
  EpisodeSimulation& operator=(EpisodeSimulation&&) = delete;

  SimTime measure_start() const { return days(config_.warmup_days); }
  SimTime measure_end() const { return measure_start() + days(config_.horizon_days); }

  // Seeds recurring appointments and queue state over [0, measure_start).
  // With warmup_days == 0 this is a no-op and nothing is pre-booked.
  void run_warmup();

  // Advances through the measurement year; requires run_warmup() first.
  void run_measurement_year();

  const std::vector<PatientProfile>& population() const { return patients_; }
  const FacilityProfile& facility() const { return facility_; }
  const std::vector<EventRecord>& trace() const { return engine_.trace(); }
  const PdfTable& pdf_table() const { return table_; }

 private:
  struct PatientState {
    // A wellness episode is in flight (request made, possibly waiting on a
    // recall); suppresses the daily wellness prompt.
    bool wellness_pending = false;
    // A wellness appointment is actually booked.
    bool wellness_booked = false;
    DailyHazards hazards;
    double attendance_p = 0.0;
    std::array<double, 4> order_p{};  // attribute-adjusted, pre-multiplier
    std::vector<RngStream> streams;   // prompts, attendance, window, then per measure
  };

  RngStream& prompt_stream(std::int64_t id) { return state_[id].streams[0]; }
  RngStream& attendance_stream(std::int64_t id) { return state_[id].streams[1]; }
  RngStream& window_stream(std::int64_t id) { return state_[id].streams[2]; }
  RngStream& order_stream(std::int64_t id, Measure m) {
    return state_[id].streams[3 + measure_index(m)];
  }
  RngStream& completion_stream(std::int64_t id, Measure m) {
    return state_[id].streams[7 + measure_index(m)];
  }

  SimTime year_start_at(SimTime t) const {
    return t < measure_start() ? measure_start() - days(365) : measure_start();
  }

  void register_handlers();
  void schedule_day_ticks(SimTime from, SimTime to);

  void on_day_tick(const EventRecord& ev);
  void on_prompt(const EventRecord& ev, VisitReason reason);
  void on_appointment_requested(const EventRecord& ev);
  void on_appointment_booked(const EventRecord& ev);
  void on_attendance(const EventRecord& ev);
  void on_doctor_visit(const EventRecord& ev);
  void on_no_show(const EventRecord& ev);
  void on_order(const EventRecord& ev, Measure measure);
  void on_completion(const EventRecord& ev, Measure measure);
  void on_registry_recall(const EventRecord& ev);

  std::vector<PatientProfile> patients_;
  FacilityProfile facility_;
  PdfTable table_;
  PathwayConfig config_;
  RngStream run_stream_;
  Engine engine_;
  std::vector<PatientState> state_;
  bool warmup_done_ = false;
};

}  // namespace caresim
