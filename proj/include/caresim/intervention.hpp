#pragma once

#include <cstdint>
#include <string>

#include "caresim/cluster.hpp"
#include "caresim/pathway.hpp"
#include "caresim/pdf.hpp"
#include "caresim/population.hpp"
#include "caresim/rng.hpp"

namespace caresim {

// Per-training performance gain, in percentage points, from the continuing
// education meta-analysis: mean 14 with a 95% CI of 0.68 to 26.44. Draws are
// returned in fraction form. The default rule reads the source's "random draw
// across the confidence interval range" as uniform; a mean-peaked triangular
// alternative is available for sensitivity work.
struct TrainingEffectParams {
  double mean_pp = 14.0;
  double ci_low_pp = 0.68;
  double ci_high_pp = 26.44;

  enum class DrawRule : std::uint8_t { UniformOverCi, Triangular };
  DrawRule rule = DrawRule::UniformOverCi;

  void validate() const;  // throws InvalidSpec unless ci_low <= mean <= ci_high
};

// One effect draw, as a fraction (default support [0.0068, 0.2644]).
double draw_training_effect(const TrainingEffectParams& params, RngStream& stream);

// Applies k independent training draws additively: every measure's order
// multiplier becomes 1 + sum of draws. k = 0 leaves the profile untouched.
// Throws NegativeTrainings for k < 0.
ClinicianProfile apply_trainings(ClinicianProfile clinician, int k,
                                 const TrainingEffectParams& params,
                                 RngStream& stream);

enum class Arm : std::uint8_t { Baseline, Pilot };

std::string_view to_string(Arm arm);
Arm arm_from_string(std::string_view name);

enum class HoursVariant : std::uint8_t { Standard, ExtendedStaggered };

// Extends every shift by two hours and staggers clinician start times across
// three offsets. Sensitivity option; off by default.
void apply_hours_variant(FacilityProfile& facility);

// Full parameterization of one experimental arm.
struct ScenarioConfig {
  Arm arm = Arm::Baseline;
  int trainings_k = 0;  // 0 iff baseline
  HoursVariant hours_variant = HoursVariant::Standard;
  PdfTable pdf_table = default_pdf_table();
  int population_size = 2000;
  int warmup_days = 30;
  int horizon_days = 365;
  std::uint64_t master_seed = 0;
  bool paired_seeds = true;  // common random numbers across arms
  FacilityConfig facility;
  TrainingEffectParams training;

  void validate() const;  // throws InvalidSpec
};

// Root stream label for one run. Under paired seeds the label omits arm and
// training count, so every arm of a (cluster, run) cell shares its population
// and episode draws and differs only through the intervention itself.
std::string run_label(const ScenarioConfig& config, int cluster_id, int run_index);

// Population generated, facility built, trainings and hours applied (pilot
// arm only; panel assignment and registry are active in both arms), warm-up
// executed. Ready for run_measurement_year().
std::unique_ptr<EpisodeSimulation> realize_scenario(const ScenarioConfig& config,
                                                    const ClusterSpec& cluster,
                                                    int run_index);

}  // namespace caresim
