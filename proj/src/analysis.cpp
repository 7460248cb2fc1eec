#include "caresim/analysis.hpp"

#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace caresim {

std::array<CqmResult, 4> compute_cqm(const std::vector<EventRecord>& trace,
                                     const std::vector<PatientProfile>& population,
                                     SimTime window_start, SimTime window_end) {
  std::unordered_set<std::int64_t> diabetics;
  for (const auto& patient : population)
    if (patient.has_diabetes) diabetics.insert(patient.id);
  if (diabetics.empty())
    throw EmptyDenominator("population has no diabetic patients");

  std::array<std::unordered_set<std::int64_t>, 4> tested;
  for (const auto& ev : trace) {
    switch (ev.kind) {
      case EventKind::CompleteHbA1c:
      case EventKind::CompleteLdl:
      case EventKind::CompleteEyeExam:
      case EventKind::CompleteNephropathy:
        break;
      default:
        continue;
    }
    if (ev.time < window_start || ev.time >= window_end) continue;
    if (!diabetics.count(ev.subject)) continue;  // numerator within denominator
    tested[measure_index(measure_of_completion(ev.kind))].insert(ev.subject);
  }

  std::array<CqmResult, 4> results;
  for (Measure m : kAllMeasures) {
    auto& r = results[measure_index(m)];
    r.measure = m;
    r.numerator = static_cast<int>(tested[measure_index(m)].size());
    r.denominator = static_cast<int>(diabetics.size());
    r.rate = static_cast<double>(r.numerator) / static_cast<double>(r.denominator);
  }
  return results;
}

bool ci_overlap(const Interval& a, const Interval& b) {
  if (a.lo > a.hi || b.lo > b.hi)
    throw MalformedInterval("interval with lo > hi");
  return std::max(a.lo, b.lo) <= std::min(a.hi, b.hi);
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

std::vector<double> rates_for(std::span<const RunResult> runs, Measure measure) {
  std::vector<double> rates;
  rates.reserve(runs.size());
  for (const auto& run : runs) rates.push_back(run.cqm[measure_index(measure)].rate);
  return rates;
}

EffectEstimate finish(Measure measure, double mean_pp, double se_pp) {
  EffectEstimate est;
  est.measure = measure;
  est.mean_pp = mean_pp;
  est.se_pp = se_pp;
  est.ci95 = {mean_pp - 1.96 * se_pp, mean_pp + 1.96 * se_pp};
  return est;
}

}  // namespace

EffectEstimate arm_effect(std::span<const RunResult> baseline_runs,
                          std::span<const RunResult> pilot_runs, Measure measure,
                          bool paired) {
  if (baseline_runs.size() < 2 || pilot_runs.size() < 2)
    throw InsufficientRuns("arm_effect requires at least 2 runs per arm");

  if (paired) {
    std::map<int, double> baseline_by_run;
    for (const auto& run : baseline_runs)
      baseline_by_run[run.run_index] = run.cqm[measure_index(measure)].rate;

    std::vector<double> diffs;
    for (const auto& run : pilot_runs) {
      auto it = baseline_by_run.find(run.run_index);
      if (it == baseline_by_run.end()) continue;
      diffs.push_back(run.cqm[measure_index(measure)].rate - it->second);
    }
    if (diffs.size() < 2)
      throw InsufficientRuns("paired arm_effect found fewer than 2 matched runs");

    const double mean_pp = 100.0 * mean_of(diffs);
    const double se_pp =
        100.0 * std::sqrt(sample_variance(diffs) / static_cast<double>(diffs.size()));
    return finish(measure, mean_pp, se_pp);
  }

  const auto b = rates_for(baseline_runs, measure);
  const auto p = rates_for(pilot_runs, measure);
  const double mean_pp = 100.0 * (mean_of(p) - mean_of(b));
  const double se_pp =
      100.0 * std::sqrt(sample_variance(p) / static_cast<double>(p.size()) +
                        sample_variance(b) / static_cast<double>(b.size()));
  return finish(measure, mean_pp, se_pp);
}

EffectEstimate weighted_national_estimate(std::span<const EffectEstimate> cluster_effects,
                                          std::span<const double> weights) {
  if (cluster_effects.empty() || cluster_effects.size() != weights.size())
    throw MissingCluster("need one effect estimate per cluster weight");

  double total_w = 0.0, weighted_mean = 0.0, weighted_var = 0.0;
  for (std::size_t i = 0; i < cluster_effects.size(); ++i) {
    const double w = weights[i];
    if (w <= 0.0) throw MissingCluster("cluster weight must be positive");
    total_w += w;
    weighted_mean += w * cluster_effects[i].mean_pp;
    weighted_var += w * w * cluster_effects[i].se_pp * cluster_effects[i].se_pp;
  }
  return finish(cluster_effects.front().measure, weighted_mean / total_w,
                std::sqrt(weighted_var) / total_w);
}

}  // namespace caresim
