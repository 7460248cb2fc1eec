#include "caresim/wls.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace caresim {

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_sf(double x, double df) {
  if (df <= 0.0) throw InvalidSpec("student_t_sf requires df > 0");
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + x * x));
  return x >= 0.0 ? tail : 1.0 - tail;
}

WlsFit wls_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const Eigen::VectorXd& w) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (y.size() != n || w.size() != n)
    throw InvalidSpec("wls_fit: X, y, w row counts disagree");
  if (n <= p) throw SingularDesign("wls_fit: need more observations than parameters");
  if ((w.array() <= 0.0).any()) throw InvalidSpec("wls_fit: weights must be positive");

  const Eigen::MatrixXd xtw = X.transpose() * w.asDiagonal();
  const Eigen::MatrixXd xtwx = xtw * X;
  const Eigen::VectorXd xtwy = xtw * y;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(xtwx);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible())
    throw SingularDesign("wls_fit: design matrix is rank deficient");

  WlsFit fit;
  fit.beta = lu.solve(xtwy);
  const Eigen::VectorXd residual = y - X * fit.beta;
  const double sse = (w.array() * residual.array().square()).sum();
  fit.df_residual = static_cast<int>(n - p);
  fit.sigma2 = sse / fit.df_residual;
  fit.cov = fit.sigma2 * lu.inverse();

  fit.se.resize(p);
  fit.t_stat.resize(p);
  fit.p_value.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    fit.se(j) = std::sqrt(std::max(fit.cov(j, j), 0.0));
    fit.t_stat(j) = fit.se(j) > 0.0 ? fit.beta(j) / fit.se(j)
                                    : (fit.beta(j) == 0.0 ? 0.0 : INFINITY);
    fit.p_value(j) = 2.0 * student_t_sf(std::abs(fit.t_stat(j)),
                                        static_cast<double>(fit.df_residual));
  }
  return fit;
}

std::vector<AnovaTable> weighted_anova(std::span<const RunResult> runs,
                                       std::span<const ClusterSpec> clusters) {
  if (runs.empty()) throw InsufficientRuns("weighted_anova: no runs");

  std::map<int, double> weight_by_cluster;
  for (const auto& spec : clusters)
    weight_by_cluster[spec.cluster_id] = static_cast<double>(spec.fqhc_count);

  std::set<int> cluster_ids;
  std::set<int> pilot_levels;
  for (const auto& run : runs) {
    if (!weight_by_cluster.count(run.cluster_id))
      throw MissingCluster("run references unknown cluster " +
                           std::to_string(run.cluster_id));
    cluster_ids.insert(run.cluster_id);
    if (run.arm == Arm::Pilot) pilot_levels.insert(run.trainings_k);
  }

  // trainings_k duplicates the arm dummy exactly when pilots share one level.
  const bool include_trainings = pilot_levels.size() > 1;

  // Dummies against the lowest present cluster id.
  std::vector<int> dummy_clusters(cluster_ids.begin(), cluster_ids.end());
  dummy_clusters.erase(dummy_clusters.begin());

  const auto n = static_cast<Eigen::Index>(runs.size());
  const auto p = static_cast<Eigen::Index>(2 + dummy_clusters.size() +
                                           (include_trainings ? 1 : 0));

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, p);
  Eigen::VectorXd w(n);
  std::vector<std::string> terms;
  terms.emplace_back("intercept");
  terms.emplace_back("arm_pilot");
  for (int id : dummy_clusters) terms.push_back("cluster_" + std::to_string(id));
  if (include_trainings) terms.emplace_back("trainings");

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& run = runs[static_cast<std::size_t>(i)];
    Eigen::Index col = 0;
    X(i, col++) = 1.0;
    X(i, col++) = run.arm == Arm::Pilot ? 1.0 : 0.0;
    for (int id : dummy_clusters) X(i, col++) = run.cluster_id == id ? 1.0 : 0.0;
    if (include_trainings) X(i, col++) = static_cast<double>(run.trainings_k);
    w(i) = weight_by_cluster.at(run.cluster_id);
  }

  std::vector<AnovaTable> tables;
  tables.reserve(kAllMeasures.size());
  for (Measure m : kAllMeasures) {
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
      y(i) = runs[static_cast<std::size_t>(i)].cqm[measure_index(m)].rate;

    const WlsFit fit = wls_fit(X, y, w);

    AnovaTable table;
    table.measure = m;
    table.df_residual = fit.df_residual;
    table.sigma2 = fit.sigma2;
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
      AnovaRow row;
      row.term = terms[static_cast<std::size_t>(j)];
      row.coef = fit.beta(j);
      row.se = fit.se(j);
      row.t_stat = fit.t_stat(j);
      row.p_value = fit.p_value(j);
      row.significant = row.p_value < 0.05;
      table.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

}  // namespace caresim
