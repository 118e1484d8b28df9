#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <map>
#include <string>

#include "proxylab/errors.hpp"

namespace proxylab::vecm {

/// Bivariate, equally spaced time series. No missing values; ingestion
/// rejects gaps before this type exists.
struct TimeSeriesPair {
  std::array<std::string, 2> labels{{"y1", "y2"}};
  Eigen::MatrixX2d obs;  // rows = time

  int n() const { return static_cast<int>(obs.rows()); }
  Eigen::VectorXd column(int j) const { return obs.col(j); }

  void validate() const;  // n >= 30, all finite
};

/// CSV with header "date,<label1>,<label2>"; ISO-8601 dates, strictly
/// increasing; any non-numeric or missing cell is a hard error with its row
/// number.
TimeSeriesPair read_timeseries_csv(std::istream& in);
TimeSeriesPair read_timeseries_csv(const std::string& path);

enum class AdfSpec { Constant, ConstantTrend };

struct AdfResult {
  double statistic = 0.0;
  int lags_used = 0;
  AdfSpec spec = AdfSpec::Constant;
  std::map<std::string, double> critical_values;  // "1%", "5%", "10%"
  std::map<std::string, bool> reject_unit_root;   // left-tailed: stat < cv
};

/// Augmented Dickey-Fuller: Delta z_t on z_{t-1}, lagged differences and
/// deterministic terms; lag order by AIC up to max_lags on a common sample.
AdfResult adf_test(const Eigen::VectorXd& series, AdfSpec spec, int max_lags);

/// Version tag of the embedded critical-value tables (goes in run manifests).
std::string critical_value_table_version();

struct JohansenResult {
  std::array<double, 2> trace_stats{};  // r = 0, r <= 1
  int rank_selected = 0;
  Eigen::Vector2d eigenvalues;          // two largest, descending
  Eigen::Matrix<double, 3, 2> eigenvectors;  // unnormalized beta candidates
  std::map<std::string, double> critical_values;  // "r0_5%", "r1_5%", ...
};

/// Johansen trace test with the constant restricted to the cointegration
/// space. Reduced-rank eigenproblem solved through a symmetrized
/// formulation (Cholesky of S11, then a symmetric eigensolve).
JohansenResult johansen_trace(const TimeSeriesPair& ts, int lags_diff = 1);

struct VecmModel {
  Eigen::Vector3d beta;      // coefficients on [y1_{t-1}, y2_{t-1}, 1], beta[0] = 1
  Eigen::Vector2d alpha;     // adjustment speeds
  Eigen::Matrix2d gamma;     // short-run coefficients on Delta y_{t-1}
  Eigen::Matrix2d resid_cov; // symmetric positive definite
  Eigen::Vector2d alpha_se;
  std::array<double, 2> trace_stats{};
  int rank_selected = 0;
  std::array<std::string, 2> labels{{"y1", "y2"}};
  int lags_diff = 1;
};

/// Rank-1, restricted-constant VECM. Other ranks are an explicit error.
VecmModel fit_vecm(const TimeSeriesPair& ts, int rank = 1, int lags_diff = 1);

/// Normalize an unnormalized cointegration vector so its first entry is 1.
Eigen::Vector3d normalize_beta(const Eigen::Vector3d& raw);

/// Error-correction term beta' [y1, y2, 1] under the beta[0] = 1 normalization.
double ect(const VecmModel& model, double y1_lag, double y2_lag);

/// The y1 level solving ect = 0 for a given y2.
double equilibrium_level(const VecmModel& model, double y2_lag);

/// Predicted Delta y_t = alpha * ECT(y_lag) + gamma * dy_lag.
Eigen::Vector2d ecm_adjustment_step(const VecmModel& model,
                                    const Eigen::Vector2d& y_lag,
                                    const Eigen::Vector2d& dy_lag);

struct IrfResult {
  int horizon = 0;
  std::array<int, 2> ordering{{0, 1}};
  // responses[impulse][response][h], h = 0..horizon
  std::array<std::array<std::vector<double>, 2>, 2> responses;
};

/// Orthogonalized impulse responses from the level-VAR(2) companion of the
/// VECM: A1 = I + alpha*beta_levels' + Gamma, A2 = -Gamma; impact matrix is
/// the Cholesky factor of resid_cov under the given variable ordering.
IrfResult irf(const VecmModel& model, int horizon,
              const std::array<int, 2>& ordering = {0, 1});

/// Display convention: *** |t|>3.29, ** |t|>2.58, * |t|>1.96, else "n.s.".
std::string significance_stars(double t_stat);

}  // namespace proxylab::vecm
