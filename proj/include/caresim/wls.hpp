#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "caresim/analysis.hpp"
#include "caresim/cluster.hpp"

namespace caresim {

// Weighted least squares via the normal equations (X' W X) b = X' W y with
// the ANOVA weighting convention: Var(y_i) = sigma^2 / w_i, so
// Cov(b) = sigma_hat^2 (X' W X)^-1 with sigma_hat^2 = weighted SSE / (n - p).
struct WlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::VectorXd t_stat;
  Eigen::VectorXd p_value;  // two-sided
  Eigen::MatrixXd cov;
  double sigma2 = 0.0;
  int df_residual = 0;
};

// Throws SingularDesign when X'WX is rank deficient (an empty or collinear
// factor level), InvalidSpec on shape mismatches or non-positive weights.
WlsFit wls_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const Eigen::VectorXd& w);

// Upper tail P(T > x) of Student's t with df degrees of freedom.
double student_t_sf(double x, double df);

// Regularized incomplete beta I_x(a, b); exposed for tests.
double incomplete_beta(double a, double b, double x);

struct AnovaRow {
  std::string term;
  double coef = 0.0;
  double se = 0.0;
  double t_stat = 0.0;
  double p_value = 0.0;
  bool significant = false;  // two-sided at alpha = 0.05
};

struct AnovaTable {
  Measure measure = Measure::HbA1c;
  std::vector<AnovaRow> rows;
  int df_residual = 0;
  double sigma2 = 0.0;
};

// Run-level rate regressed on {arm, cluster, trainings}, weighted by each
// run's cluster FQHC count; one table per measure. The trainings column is
// included only when the runs span more than one positive training level
// (otherwise it duplicates the arm dummy exactly). Cluster terms are dummies
// against the lowest present cluster id.
std::vector<AnovaTable> weighted_anova(std::span<const RunResult> runs,
                                       std::span<const ClusterSpec> clusters);

}  // namespace caresim
