#pragma once

#include <map>
#include <utility>
#include <vector>

#include "caresim/analysis.hpp"
#include "caresim/wls.hpp"

namespace caresim {

// Reported difference-in-differences results of the real FQHC demonstration,
// per measure and evaluation year: percentage-point means with standard
// errors. These are the targets the simulated contrasts are validated
// against by 95% CI overlap.
struct PilotBenchmark {
  struct Cell {
    double mean_pp = 0.0;
    double se_pp = 0.0;
    Interval ci95() const {
      return {mean_pp - 1.96 * se_pp, mean_pp + 1.96 * se_pp};
    }
  };

  // [measure][year-1], years 1..3
  std::array<std::array<Cell, 3>, 4> cells{};

  const Cell& cell(Measure measure, int year) const;

  static PilotBenchmark fqhc_apcp();
};

struct ValidationRow {
  Measure measure = Measure::HbA1c;
  int pilot_year = 1;
  int trainings_k = 0;
  double sim_mean_pp = 0.0;
  Interval sim_ci;
  double pilot_mean_pp = 0.0;
  Interval pilot_ci;
  bool overlap = false;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;  // 4 measures x 3 years x 5 training levels
  std::vector<EffectEstimate> national;  // per (measure, k), k ascending
  std::vector<AnovaTable> anova;
};

using NationalEstimates = std::map<std::pair<Measure, int>, EffectEstimate>;

// Crosses every (measure, trainings_k) national estimate with every pilot
// year. Throws MissingEstimate when a grid cell has no simulated estimate.
ValidationReport validate_against_pilot(const NationalEstimates& estimates,
                                        const PilotBenchmark& benchmark,
                                        std::span<const int> training_levels);

}  // namespace caresim
