#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "proxylab/errors.hpp"

namespace proxylab::stats {

using Vector = Eigen::VectorXd;

/// Throws NonFiniteError if any entry is NaN/Inf.
void check_finite(const Vector& v, const std::string& name);

/// Sample covariance with n-1 denominator. Symmetric; sample_cov(a,a) is the
/// sample variance. Every estimator formula here is a ratio of such moments,
/// so the n-1 vs n choice cancels throughout (see tests).
double sample_cov(const Vector& a, const Vector& b);

inline double sample_var(const Vector& a) { return sample_cov(a, a); }

/// Output of any least-squares fit with intercept.
struct OlsFit {
  double intercept = 0.0;
  std::vector<double> slopes;       // one per regressor
  Vector residuals;                 // length n
  std::vector<double> se_slopes;    // homoscedastic SEs
  double r_squared = 0.0;
  int n_obs = 0;
  // Sample moments the closed forms are built from:
  // var_x, var_p, cov_xp, cov_xy, cov_py (subset present per fit).
  std::map<std::string, double> moment_ledger;
};

/// Single-regressor OLS by the covariance closed form:
/// slope = cov(x,y)/var(x), intercept from means.
OlsFit ols_single(const Vector& y, const Vector& x);

/// Two-regressor OLS by the symmetric closed forms
///   g1 = (cov(x,y)var(p) - cov(p,y)cov(x,p)) / D
///   g2 = (cov(p,y)var(x) - cov(x,y)cov(x,p)) / D
/// with D = var(x)var(p) - cov(x,p)^2. Collinearity when
/// D <= 1e-12 * var(x)var(p) (relative tolerance; survives rescaled data).
OlsFit ols_two_regressor(const Vector& y, const Vector& x, const Vector& p);

/// General OLS with intercept via a rank-revealing QR of the design matrix.
/// Rank deficiency is an error, never a pseudo-inverse fallback.
/// Oracle for the closed forms above; also used by the VECM auxiliary
/// regressions.
OlsFit ols_general(const Vector& y, const std::vector<Vector>& regressors);

}  // namespace proxylab::stats
