#include "proxylab/stats.hpp"

#include <cmath>
#include <limits>

namespace proxylab::stats {

void check_finite(const Vector& v, const std::string& name) {
  if (!v.allFinite()) {
    throw NonFiniteError("non-finite entry in '" + name + "'");
  }
}

double sample_cov(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("sample_cov: length mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
  }
  const Eigen::Index n = a.size();
  if (n < 2) {
    throw InvalidInputError("sample_cov: need n >= 2, got " + std::to_string(n));
  }
  check_finite(a, "a");
  check_finite(b, "b");
  const double ma = a.mean();
  const double mb = b.mean();
  return (a.array() - ma).matrix().dot((b.array() - mb).matrix()) /
         static_cast<double>(n - 1);
}

namespace {

// Residual-based R^2 and homoscedastic sigma^2; k = number of slopes.
void finish_fit(OlsFit& fit, const Vector& y, double* sigma2_out) {
  const double sst = (y.array() - y.mean()).square().sum();
  const double ssr = fit.residuals.squaredNorm();
  if (sst > 0.0) {
    fit.r_squared = 1.0 - ssr / sst;
    if (fit.r_squared < 0.0) fit.r_squared = 0.0;
    if (fit.r_squared > 1.0) fit.r_squared = 1.0;
  } else {
    fit.r_squared = (ssr <= 1e-24) ? 1.0 : 0.0;
  }
  const int df = fit.n_obs - static_cast<int>(fit.slopes.size()) - 1;
  *sigma2_out = (df > 0) ? ssr / df : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

OlsFit ols_single(const Vector& y, const Vector& x) {
  if (y.size() != x.size()) throw InvalidInputError("ols_single: length mismatch");
  const Eigen::Index n = y.size();
  if (n < 3) throw InvalidInputError("ols_single: need n >= 3");
  check_finite(y, "y");
  check_finite(x, "x");

  const double var_x = sample_var(x);
  if (var_x <= 0.0) {
    throw ZeroVarianceError("ols_single: regressor has zero sample variance");
  }
  const double cov_xy = sample_cov(x, y);
  const double slope = cov_xy / var_x;

  OlsFit fit;
  fit.n_obs = static_cast<int>(n);
  fit.slopes = {slope};
  fit.intercept = y.mean() - slope * x.mean();
  fit.residuals = y.array() - fit.intercept - slope * x.array();
  fit.moment_ledger = {{"var_x", var_x}, {"cov_xy", cov_xy}};

  double sigma2 = 0.0;
  finish_fit(fit, y, &sigma2);
  fit.se_slopes = {std::sqrt(sigma2 / (static_cast<double>(n - 1) * var_x))};
  return fit;
}

OlsFit ols_two_regressor(const Vector& y, const Vector& x, const Vector& p) {
  if (y.size() != x.size() || y.size() != p.size()) {
    throw InvalidInputError("ols_two_regressor: length mismatch");
  }
  const Eigen::Index n = y.size();
  if (n < 4) throw InvalidInputError("ols_two_regressor: need n >= 4");
  check_finite(y, "y");
  check_finite(x, "x");
  check_finite(p, "p");

  const double var_x = sample_var(x);
  const double var_p = sample_var(p);
  if (var_x <= 0.0 || var_p <= 0.0) {
    throw ZeroVarianceError("ols_two_regressor: a regressor has zero sample variance");
  }
  const double cov_xp = sample_cov(x, p);
  const double cov_xy = sample_cov(x, y);
  const double cov_py = sample_cov(p, y);

  const double denom = var_x * var_p - cov_xp * cov_xp;
  if (denom <= 1e-12 * var_x * var_p) {
    throw CollinearityError("ols_two_regressor: regressors are collinear (denominator " +
                            std::to_string(denom) + ")");
  }

  const double g1 = (cov_xy * var_p - cov_py * cov_xp) / denom;
  const double g2 = (cov_py * var_x - cov_xy * cov_xp) / denom;

  OlsFit fit;
  fit.n_obs = static_cast<int>(n);
  fit.slopes = {g1, g2};
  fit.intercept = y.mean() - g1 * x.mean() - g2 * p.mean();
  fit.residuals = y.array() - fit.intercept - g1 * x.array() - g2 * p.array();
  fit.moment_ledger = {{"var_x", var_x},
                       {"var_p", var_p},
                       {"cov_xp", cov_xp},
                       {"cov_xy", cov_xy},
                       {"cov_py", cov_py}};

  double sigma2 = 0.0;
  finish_fit(fit, y, &sigma2);
  // Var(slopes) = sigma^2 * S^{-1} / (n-1), S the regressor covariance matrix.
  const double scale = sigma2 / (static_cast<double>(n - 1) * denom);
  fit.se_slopes = {std::sqrt(scale * var_p), std::sqrt(scale * var_x)};
  return fit;
}

OlsFit ols_general(const Vector& y, const std::vector<Vector>& regressors) {
  const Eigen::Index n = y.size();
  const Eigen::Index k = static_cast<Eigen::Index>(regressors.size());
  if (n < k + 2) throw InvalidInputError("ols_general: too few observations");
  check_finite(y, "y");
  for (std::size_t j = 0; j < regressors.size(); ++j) {
    if (regressors[j].size() != n) throw InvalidInputError("ols_general: length mismatch");
    check_finite(regressors[j], "regressor " + std::to_string(j));
  }

  Eigen::MatrixXd design(n, k + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 0; j < k; ++j) design.col(j + 1) = regressors[j];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < k + 1) {
    throw RankDeficiencyError("ols_general: design matrix rank " +
                              std::to_string(qr.rank()) + " < " + std::to_string(k + 1));
  }
  const Eigen::VectorXd coef = qr.solve(y);

  OlsFit fit;
  fit.n_obs = static_cast<int>(n);
  fit.intercept = coef(0);
  fit.slopes.assign(coef.data() + 1, coef.data() + k + 1);
  fit.residuals = y - design * coef;

  double sigma2 = 0.0;
  finish_fit(fit, y, &sigma2);

  const Eigen::MatrixXd xtx_inv =
      (design.transpose() * design)
          .ldlt()
          .solve(Eigen::MatrixXd::Identity(k + 1, k + 1));
  fit.se_slopes.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    fit.se_slopes[static_cast<std::size_t>(j)] = std::sqrt(sigma2 * xtx_inv(j + 1, j + 1));
  }
  return fit;
}

}  // namespace proxylab::stats
