#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "caresim/cluster.hpp"
#include "caresim/measures.hpp"
#include "caresim/resource.hpp"
#include "caresim/rng.hpp"
#include "caresim/time.hpp"

namespace caresim {

enum class Sex : std::uint8_t { Female, Male };
enum class RaceEthnicity : std::uint8_t { NonMinority, Minority };
enum class Insurance : std::uint8_t { Continuous, Intermittent, Uninsured, Medicaid };

std::string_view to_string(Insurance insurance);
Insurance insurance_from_string(std::string_view name);

struct PatientProfile {
  std::int64_t id = -1;
  double age = 0.0;
  Sex sex = Sex::Female;
  RaceEthnicity race_ethnicity = RaceEthnicity::NonMinority;
  double ses_index = 0.0;  // [0, 1]
  Insurance insurance = Insurance::Continuous;
  bool has_diabetes = false;
  // Patient-level multipliers on the daily entry-prompt hazards.
  double sick_hazard_mult = 1.0;
  double symptom_hazard_mult = 1.0;
  std::int64_t assigned_clinician = -1;
  // Next wellness check, minutes relative to the measurement-year start.
  SimTime wellness_due = 0;
  // Last completed test per measure (absolute sim time), none until completed.
  std::array<std::optional<SimTime>, 4> screening_history{};
};

struct ClinicianProfile {
  std::int64_t id = -1;
  SimTime shift_start = 8 * kMinutesPerHour;  // minute of day
  SimTime shift_end = 16 * kMinutesPerHour;
  bool weekdays_only = true;
  SimTime slot_minutes = 15;
  int training_count = 0;
  // Per-measure screening-order multiplier; 1.0 in the baseline arm.
  std::array<double, 4> order_multiplier{1.0, 1.0, 1.0, 1.0};
};

// Per-clinician appointment book: one FIFO slot grid constrained to the
// clinician's shift. Bookings never reuse a skipped slot, so later requests
// can never be granted earlier than earlier ones.
class AppointmentBook {
 public:
  AppointmentBook() : slot_(1) {}
  explicit AppointmentBook(const ClinicianProfile& clinician);

  // Earliest grantable slot start at or after `at`.
  SimTime earliest_slot(SimTime at) const;

  // Grants and occupies that slot.
  SimTime book(SimTime at);

  SimTime slot_minutes() const { return slot_minutes_; }
  std::uint64_t bookings() const { return slot_.grants(); }

 private:
  SimTime next_slot_in_shift(SimTime t) const;

  FifoResource slot_;
  SimTime shift_start = 8 * kMinutesPerHour;
  SimTime shift_end = 16 * kMinutesPerHour;
  bool weekdays_only = true;
  SimTime slot_minutes_ = 15;
};

struct FacilityProfile {
  int cluster_id = 0;
  std::vector<ClinicianProfile> clinicians;
  SimTime hours_open = 8 * kMinutesPerHour;   // envelope of clinician shifts
  SimTime hours_close = 16 * kMinutesPerHour;
  bool registry_enabled = true;  // active in both arms
  std::vector<AppointmentBook> appointment_book;  // indexed by clinician id
};

struct FacilityConfig {
  int clinician_count = 5;
  SimTime slot_minutes = 15;
  SimTime shift_start = 8 * kMinutesPerHour;
  SimTime shift_hours = 8;
};

// Draws n patients from the spec's attribute distributions. wellness_due is
// spread uniformly over the coming year so recurring visits stagger instead
// of piling onto day 0. Same (spec, n, stream) always yields the same list.
std::vector<PatientProfile> generate_population(const ClusterSpec& spec, int n,
                                                RngStream& stream);

// Builds the roster and slot books, then assigns every patient to exactly one
// clinician round-robin (panel sizes differ by at most one). Throws
// NoClinicians when the configured roster is empty.
FacilityProfile build_facility(const ClusterSpec& spec, const FacilityConfig& config,
                               std::vector<PatientProfile>& patients,
                               RngStream& stream);

}  // namespace caresim
