#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "caresim/event.hpp"
#include "caresim/intervention.hpp"
#include "caresim/measures.hpp"
#include "caresim/population.hpp"

namespace caresim {

// Patient-level annual rate: diabetic patients with at least one completed
// test in the measurement window over all diabetic patients.
struct CqmResult {
  Measure measure = Measure::HbA1c;
  int numerator = 0;
  int denominator = 0;
  double rate = 0.0;
};

// Counts each patient once per measure regardless of repeat tests. The
// denominator is fixed at generation; throws EmptyDenominator when the
// population has no diabetic patients.
std::array<CqmResult, 4> compute_cqm(const std::vector<EventRecord>& trace,
                                     const std::vector<PatientProfile>& population,
                                     SimTime window_start, SimTime window_end);

struct RunResult {
  int cluster_id = 0;
  Arm arm = Arm::Baseline;
  int trainings_k = 0;
  int run_index = 0;
  std::array<CqmResult, 4> cqm{};
  std::uint64_t seed = 0;  // fingerprint of the run's root stream
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Closed-interval intersection test; throws MalformedInterval if lo > hi.
bool ci_overlap(const Interval& a, const Interval& b);

// Simulated arm effect in percentage points with its 95% CI. The simulation
// has no matched comparison group, so this pilot-minus-baseline contrast is
// the quantity compared against the real evaluation's reported
// difference-in-differences values.
struct EffectEstimate {
  Measure measure = Measure::HbA1c;
  double mean_pp = 0.0;
  double se_pp = 0.0;
  Interval ci95;
};

// mean_pp = 100 * (mean pilot rate - mean baseline rate). Paired runs use the
// paired-difference variance (matching run_index); independent arms use
// Welch pooling. Throws InsufficientRuns below 2 runs per arm.
EffectEstimate arm_effect(std::span<const RunResult> baseline_runs,
                          std::span<const RunResult> pilot_runs, Measure measure,
                          bool paired);

// FQHC-count-weighted national aggregate: mean = sum(w*m)/sum(w),
// se = sqrt(sum(w^2 * se^2))/sum(w). Generalizes to any cluster count;
// throws MissingCluster when effects and weights do not line up.
EffectEstimate weighted_national_estimate(std::span<const EffectEstimate> cluster_effects,
                                          std::span<const double> weights);

}  // namespace caresim
