#include "caresim/intervention.hpp"

#include <cmath>

namespace caresim {

void TrainingEffectParams::validate() const {
  if (!(ci_low_pp <= mean_pp && mean_pp <= ci_high_pp))
    throw InvalidSpec("training effect CI must bracket the mean");
}

double draw_training_effect(const TrainingEffectParams& params, RngStream& stream) {
  params.validate();
  const double lo = params.ci_low_pp / 100.0;
  const double hi = params.ci_high_pp / 100.0;
  switch (params.rule) {
    case TrainingEffectParams::DrawRule::UniformOverCi:
      return stream.uniform(lo, hi);
    case TrainingEffectParams::DrawRule::Triangular: {
      const double mode = params.mean_pp / 100.0;
      if (hi == lo) return lo;
      const double u = stream.uniform();
      const double cut = (mode - lo) / (hi - lo);
      if (u < cut) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
      return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
    }
  }
  throw InvalidSpec("unknown training draw rule");
}

ClinicianProfile apply_trainings(ClinicianProfile clinician, int k,
                                 const TrainingEffectParams& params,
                                 RngStream& stream) {
  if (k < 0) throw NegativeTrainings("training count must be >= 0");
  double gain = 0.0;
  for (int i = 0; i < k; ++i) gain += draw_training_effect(params, stream);
  clinician.training_count = k;
  for (auto& mult : clinician.order_multiplier) mult = 1.0 + gain;
  return clinician;
}

std::string_view to_string(Arm arm) {
  return arm == Arm::Baseline ? "baseline" : "pilot";
}

Arm arm_from_string(std::string_view name) {
  if (name == "baseline") return Arm::Baseline;
  if (name == "pilot") return Arm::Pilot;
  throw InvalidSpec("unknown arm: " + std::string(name));
}

void apply_hours_variant(FacilityProfile& facility) {
  for (std::size_t c = 0; c < facility.clinicians.size(); ++c) {
    auto& clin = facility.clinicians[c];
    const SimTime stagger = static_cast<SimTime>(c % 3) * kMinutesPerHour;
    const SimTime length = clin.shift_end - clin.shift_start + hours(2);
    clin.shift_start = std::max<SimTime>(clin.shift_start - kMinutesPerHour, 0) + stagger;
    clin.shift_end = clin.shift_start + length;
  }
  facility.hours_open = facility.clinicians.front().shift_start;
  facility.hours_close = facility.clinicians.front().shift_end;
  facility.appointment_book.clear();
  for (const auto& clin : facility.clinicians) {
    facility.hours_open = std::min(facility.hours_open, clin.shift_start);
    facility.hours_close = std::max(facility.hours_close, clin.shift_end);
    facility.appointment_book.emplace_back(clin);
  }
}

void ScenarioConfig::validate() const {
  if (arm == Arm::Baseline && trainings_k != 0)
    throw InvalidSpec("baseline arm must have trainings_k = 0");
  if (arm == Arm::Pilot && trainings_k < 1)
    throw InvalidSpec("pilot arm must have trainings_k >= 1");
  if (population_size < 0) throw InvalidSpec("population_size must be >= 0");
  if (warmup_days < 0) throw InvalidSpec("warmup_days must be >= 0");
  if (horizon_days < 1) throw InvalidSpec("horizon_days must be >= 1");
  training.validate();
}

std::string run_label(const ScenarioConfig& config, int cluster_id, int run_index) {
  std::string label = "cluster" + std::to_string(cluster_id);
  if (!config.paired_seeds) {
    label += "/" + std::string(to_string(config.arm));
    label += "/k" + std::to_string(config.trainings_k);
  }
  label += "/run" + std::to_string(run_index);
  return label;
}

std::unique_ptr<EpisodeSimulation> realize_scenario(const ScenarioConfig& config,
                                                    const ClusterSpec& cluster,
                                                    int run_index) {
  config.validate();
  validate(cluster);

  const std::string label = run_label(config, cluster.cluster_id, run_index);

  auto pop_stream = derive_stream(config.master_seed, label + "/population");
  auto patients = generate_population(cluster, config.population_size, pop_stream);

  auto facility_stream = derive_stream(config.master_seed, label + "/facility");
  auto facility = build_facility(cluster, config.facility, patients, facility_stream);

  if (config.arm == Arm::Pilot) {
    for (auto& clin : facility.clinicians) {
      // Training draws share a k-independent label so a run's multiplier at
      // k+1 extends its multiplier at k instead of resampling it.
      auto training_stream = derive_stream(
          config.master_seed, label + "/training/clin" + std::to_string(clin.id));
      clin = apply_trainings(clin, config.trainings_k, config.training,
                             training_stream);
    }
    if (config.hours_variant == HoursVariant::ExtendedStaggered)
      apply_hours_variant(facility);
  }

  PathwayConfig pathway;
  pathway.warmup_days = config.warmup_days;
  pathway.horizon_days = config.horizon_days;

  auto sim = std::make_unique<EpisodeSimulation>(
      std::move(patients), std::move(facility), config.pdf_table, pathway,
      derive_stream(config.master_seed, label));
  sim->run_warmup();
  return sim;
}

}  // namespace caresim
