#include "caresim/benchmark.hpp"

namespace caresim {

const PilotBenchmark::Cell& PilotBenchmark::cell(Measure measure, int year) const {
  if (year < 1 || year > 3)
    throw InvalidSpec("pilot benchmark year must be 1..3");
  return cells[measure_index(measure)][static_cast<std::size_t>(year - 1)];
}

PilotBenchmark PilotBenchmark::fqhc_apcp() {
  PilotBenchmark b;
  b.cells[measure_index(Measure::HbA1c)] = {{{1.67, 0.43}, {0.68, 0.102}, {0.70, 0.38}}};
  b.cells[measure_index(Measure::EyeExam)] = {{{1.84, 0.50}, {1.17, 0.47}, {1.23, 0.46}}};
  b.cells[measure_index(Measure::Nephropathy)] =
      {{{2.62, 0.55}, {3.36, 0.51}, {2.62, 0.49}}};
  b.cells[measure_index(Measure::Ldl)] = {{{0.48, 0.330}, {0.16, 0.728}, {1.00, 0.46}}};
  return b;
}

ValidationReport validate_against_pilot(const NationalEstimates& estimates,
                                        const PilotBenchmark& benchmark,
                                        std::span<const int> training_levels) {
  ValidationReport report;
  for (Measure m : kAllMeasures) {
    for (int year = 1; year <= 3; ++year) {
      for (int k : training_levels) {
        auto it = estimates.find({m, k});
        if (it == estimates.end())
          throw MissingEstimate("no national estimate for measure " +
                                std::string(to_string(m)) + ", k=" +
                                std::to_string(k));
        const auto& est = it->second;
        const auto& pilot = benchmark.cell(m, year);

        ValidationRow row;
        row.measure = m;
        row.pilot_year = year;
        row.trainings_k = k;
        row.sim_mean_pp = est.mean_pp;
        row.sim_ci = est.ci95;
        row.pilot_mean_pp = pilot.mean_pp;
        row.pilot_ci = pilot.ci95();
        row.overlap = ci_overlap(row.sim_ci, row.pilot_ci);
        report.rows.push_back(row);
      }
    }
  }
  for (int k : training_levels)
    for (Measure m : kAllMeasures) report.national.push_back(estimates.at({m, k}));
  return report;
}

}  // namespace caresim
