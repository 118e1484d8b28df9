#include "proxylab/vecm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace proxylab::vecm {

void TimeSeriesPair::validate() const {
  if (n() < 30) {
    throw InvalidInputError("TimeSeriesPair: need n >= 30, got " + std::to_string(n()));
  }
  if (!obs.allFinite()) throw NonFiniteError("TimeSeriesPair: non-finite observation");
}

namespace {

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

double parse_cell(const std::string& tok, int row, const std::string& col) {
  if (tok.empty()) {
    throw IngestError("row " + std::to_string(row) + ": missing value in column " + col);
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IngestError("row " + std::to_string(row) + ": non-numeric cell '" + tok +
                      "' in column " + col);
  }
}

}  // namespace

TimeSeriesPair read_timeseries_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError("time-series CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) header.push_back(tok);
  }
  if (header.size() != 3) {
    throw IngestError("time-series CSV: header must be date,<name1>,<name2>");
  }

  TimeSeriesPair ts;
  ts.labels = {header[1], header[2]};

  std::vector<std::array<double, 2>> rows;
  std::string prev_date;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string date, c1, c2, extra;
    if (!std::getline(ss, date, ',') || !std::getline(ss, c1, ',') ||
        !std::getline(ss, c2, ',')) {
      throw IngestError("row " + std::to_string(lineno) + ": expected 3 fields");
    }
    if (std::getline(ss, extra, ',')) {
      throw IngestError("row " + std::to_string(lineno) + ": too many fields");
    }
    if (!is_iso_date(date)) {
      throw IngestError("row " + std::to_string(lineno) + ": bad ISO-8601 date '" + date + "'");
    }
    if (!prev_date.empty() && date <= prev_date) {
      throw IngestError("row " + std::to_string(lineno) + ": dates not strictly increasing ('" +
                        date + "' after '" + prev_date + "')");
    }
    prev_date = date;
    rows.push_back({parse_cell(c1, lineno, header[1]), parse_cell(c2, lineno, header[2])});
  }

  ts.obs.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ts.obs(static_cast<Eigen::Index>(i), 0) = rows[i][0];
    ts.obs(static_cast<Eigen::Index>(i), 1) = rows[i][1];
  }
  ts.validate();
  return ts;
}

TimeSeriesPair read_timeseries_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);
  return read_timeseries_csv(in);
}

// ---------------------------------------------------------------------------
// Embedded critical-value tables.
//
// ADF: MacKinnon (2010, "Critical values for cointegration tests", QED WP
// 1227), asymptotic (T -> inf) values for the constant and constant+trend
// specifications.
// Johansen trace, restricted constant (constant inside the cointegration
// space): Osterwald-Lenum (1992), Table 1*, for p - r = 1, 2.
// ---------------------------------------------------------------------------

namespace {

constexpr double kAdfConst[3] = {-3.43, -2.86, -2.57};       // 1%, 5%, 10%
constexpr double kAdfTrend[3] = {-3.96, -3.41, -3.12};
constexpr double kTraceR0[3] = {24.60, 19.96, 17.85};        // 1%, 5%, 10%, p-r=2
constexpr double kTraceR1[3] = {12.97, 9.24, 7.52};          // p-r=1

}  // namespace

std::string critical_value_table_version() {
  return "adf=MacKinnon-2010-asymptotic; johansen=Osterwald-Lenum-1992-Table1star";
}

namespace {

// OLS without intercept; returns coefficients, residuals, SEs via LLT of W'W.
struct RawOls {
  Eigen::VectorXd coef;
  Eigen::VectorXd resid;
  Eigen::VectorXd se;
  double ssr = 0.0;
};

RawOls ols_raw(const Eigen::MatrixXd& w, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd wtw = w.transpose() * w;
  Eigen::LLT<Eigen::MatrixXd> llt(wtw);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("ols_raw: regressor cross-product not positive definite");
  }
  RawOls out;
  out.coef = llt.solve(w.transpose() * y);
  out.resid = y - w * out.coef;
  out.ssr = out.resid.squaredNorm();
  const double df = static_cast<double>(y.size() - w.cols());
  const double sigma2 = df > 0 ? out.ssr / df : std::numeric_limits<double>::quiet_NaN();
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(w.cols(), w.cols()));
  out.se = (sigma2 * inv.diagonal().array()).sqrt();
  return out;
}

// ADF regression for a fixed lag count over observations t = start..n-1
// (t indexes the level series; differences dz_t = z_t - z_{t-1}).
RawOls adf_regression(const Eigen::VectorXd& z, AdfSpec spec, int k, int start) {
  const int n = static_cast<int>(z.size());
  const int T = n - start;
  const int npar = 2 + k + (spec == AdfSpec::ConstantTrend ? 1 : 0);
  Eigen::MatrixXd w(T, npar);
  Eigen::VectorXd dz(T);
  for (int i = 0; i < T; ++i) {
    const int t = start + i;
    dz(i) = z(t) - z(t - 1);
    int col = 0;
    w(i, col++) = z(t - 1);
    for (int j = 1; j <= k; ++j) w(i, col++) = z(t - j) - z(t - j - 1);
    w(i, col++) = 1.0;
    if (spec == AdfSpec::ConstantTrend) w(i, col++) = static_cast<double>(t);
  }
  return ols_raw(w, dz);
}

}  // namespace

AdfResult adf_test(const Eigen::VectorXd& series, AdfSpec spec, int max_lags) {
  const int n = static_cast<int>(series.size());
  if (max_lags < 0) throw InvalidInputError("adf_test: max_lags must be >= 0");
  if (n - max_lags - 2 < 20) {
    throw InvalidInputError("adf_test: insufficient observations (n=" + std::to_string(n) +
                            ", max_lags=" + std::to_string(max_lags) + ")");
  }
  if (!series.allFinite()) throw NonFiniteError("adf_test: non-finite input");

  // Lag selection by AIC on the common sample t = max_lags+1 .. n-1.
  int best_k = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  const int sel_start = max_lags + 1;
  const double T_sel = static_cast<double>(n - sel_start);
  for (int k = 0; k <= max_lags; ++k) {
    const RawOls fit = adf_regression(series, spec, k, sel_start);
    const int npar = 2 + k + (spec == AdfSpec::ConstantTrend ? 1 : 0);
    const double aic = T_sel * std::log(fit.ssr / T_sel) + 2.0 * npar;
    if (aic < best_aic) {
      best_aic = aic;
      best_k = k;
    }
  }

  // Final fit on the full sample available for the chosen lag order.
  const RawOls fit = adf_regression(series, spec, best_k, best_k + 1);

  AdfResult res;
  res.statistic = fit.coef(0) / fit.se(0);
  res.lags_used = best_k;
  res.spec = spec;
  const double* cv = (spec == AdfSpec::Constant) ? kAdfConst : kAdfTrend;
  const char* levels[3] = {"1%", "5%", "10%"};
  for (int i = 0; i < 3; ++i) {
    res.critical_values[levels[i]] = cv[i];
    res.reject_unit_root[levels[i]] = res.statistic < cv[i];
  }
  return res;
}

namespace {

// Cholesky with an explicit near-singularity check (relative eigenvalue floor).
Eigen::LLT<Eigen::MatrixXd> chol_or_throw(const Eigen::MatrixXd& m, const std::string& name) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= 1e-12 * hi) {
    throw SingularMatrixError("johansen: moment matrix " + name + " is numerically singular");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("johansen: Cholesky of " + name + " failed");
  }
  return llt;
}

struct JohansenWork {
  JohansenResult result;
  int T = 0;
  int start = 0;  // first usable t (level index)
};

JohansenWork johansen_impl(const TimeSeriesPair& ts, int lags_diff) {
  ts.validate();
  if (lags_diff < 0) throw InvalidInputError("johansen_trace: lags_diff must be >= 0");
  const int n = ts.n();
  if (n - lags_diff - 2 < 30) {
    throw InvalidInputError("johansen_trace: insufficient observations");
  }

  const int start = lags_diff + 1;  // dy_t needs dy_{t-lags_diff}
  const int T = n - 1 - lags_diff;
  const auto& y = ts.obs;

  Eigen::MatrixXd z0(T, 2);   // dy_t
  Eigen::MatrixXd z1(T, 3);   // [y_{t-1}, 1]
  Eigen::MatrixXd z2(T, 2 * lags_diff);
  for (int i = 0; i < T; ++i) {
    const int t = start + i;
    z0.row(i) = y.row(t) - y.row(t - 1);
    z1(i, 0) = y(t - 1, 0);
    z1(i, 1) = y(t - 1, 1);
    z1(i, 2) = 1.0;
    for (int j = 1; j <= lags_diff; ++j) {
      z2.block(i, 2 * (j - 1), 1, 2) = y.row(t - j) - y.row(t - j - 1);
    }
  }

  Eigen::MatrixXd r0 = z0;
  Eigen::MatrixXd r1 = z1;
  if (lags_diff > 0) {
    const auto llt = chol_or_throw(z2.transpose() * z2, "Z2'Z2");
    r0 -= z2 * llt.solve(z2.transpose() * z0);
    r1 -= z2 * llt.solve(z2.transpose() * z1);
  }

  const double Td = static_cast<double>(T);
  const Eigen::MatrixXd s00 = r0.transpose() * r0 / Td;  // 2x2
  const Eigen::MatrixXd s11 = r1.transpose() * r1 / Td;  // 3x3
  const Eigen::MatrixXd s01m = (r0.transpose() * r1) / Td;  // 2x3

  const auto llt00 = chol_or_throw(s00, "S00");
  const auto llt11 = chol_or_throw(s11, "S11");

  // Symmetrized eigenproblem: M = L11^{-1} S10 S00^{-1} S01 L11^{-T}.
  const Eigen::MatrixXd s10_s00inv_s01 = s01m.transpose() * llt00.solve(s01m);  // 3x3
  const Eigen::MatrixXd l11 = llt11.matrixL();
  const Eigen::MatrixXd linv_rhs =
      l11.triangularView<Eigen::Lower>().solve(s10_s00inv_s01);
  const Eigen::MatrixXd m =
      l11.triangularView<Eigen::Lower>()
          .solve(linv_rhs.transpose())
          .transpose();  // L^{-1} A L^{-T}

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) {
    throw SingularMatrixError("johansen: eigensolver failed");
  }

  // Eigen returns ascending order; take the two largest.
  JohansenWork work;
  work.T = T;
  work.start = start;
  auto& res = work.result;
  for (int i = 0; i < 2; ++i) {
    const int src = 2 - i;  // indices 2, 1 of a 3-dim ascending spectrum
    double lam = es.eigenvalues()(src);
    lam = std::clamp(lam, 0.0, 1.0 - 1e-12);
    res.eigenvalues(i) = lam;
    const Eigen::VectorXd w = es.eigenvectors().col(src);
    res.eigenvectors.col(i) =
        l11.transpose().triangularView<Eigen::Upper>().solve(w);
  }

  res.trace_stats[0] = -Td * (std::log1p(-res.eigenvalues(0)) + std::log1p(-res.eigenvalues(1)));
  res.trace_stats[1] = -Td * std::log1p(-res.eigenvalues(1));

  const char* levels[3] = {"1%", "5%", "10%"};
  for (int i = 0; i < 3; ++i) {
    res.critical_values[std::string("r0_") + levels[i]] = kTraceR0[i];
    res.critical_values[std::string("r1_") + levels[i]] = kTraceR1[i];
  }
  if (res.trace_stats[0] < kTraceR0[1]) {
    res.rank_selected = 0;
  } else if (res.trace_stats[1] < kTraceR1[1]) {
    res.rank_selected = 1;
  } else {
    res.rank_selected = 2;
  }
  return work;
}

}  // namespace

JohansenResult johansen_trace(const TimeSeriesPair& ts, int lags_diff) {
  return johansen_impl(ts, lags_diff).result;
}

Eigen::Vector3d normalize_beta(const Eigen::Vector3d& raw) {
  const double scale = raw.cwiseAbs().maxCoeff();
  if (scale <= 0.0 || std::abs(raw(0)) < 1e-10 * scale) {
    throw SingularMatrixError("normalize_beta: first coefficient is (near) zero");
  }
  return raw / raw(0);
}

VecmModel fit_vecm(const TimeSeriesPair& ts, int rank, int lags_diff) {
  if (rank != 1) {
    throw InvalidInputError("fit_vecm: only rank 1 is supported, got " + std::to_string(rank));
  }
  if (lags_diff < 0 || lags_diff > 1) {
    throw InvalidInputError("fit_vecm: lags_diff must be 0 or 1");
  }

  const JohansenWork work = johansen_impl(ts, lags_diff);
  const JohansenResult& jo = work.result;

  VecmModel model;
  model.labels = ts.labels;
  model.lags_diff = lags_diff;
  model.trace_stats = jo.trace_stats;
  model.rank_selected = jo.rank_selected;
  model.beta = normalize_beta(jo.eigenvectors.col(0));

  const int T = work.T;
  const int start = work.start;
  const auto& y = ts.obs;
  const int ncols = 1 + 2 * lags_diff;

  Eigen::MatrixXd w(T, ncols);
  Eigen::MatrixXd dy(T, 2);
  for (int i = 0; i < T; ++i) {
    const int t = start + i;
    dy.row(i) = y.row(t) - y.row(t - 1);
    w(i, 0) = model.beta(0) * y(t - 1, 0) + model.beta(1) * y(t - 1, 1) + model.beta(2);
    if (lags_diff == 1) {
      w(i, 1) = y(t - 1, 0) - y(t - 2, 0);
      w(i, 2) = y(t - 1, 1) - y(t - 2, 1);
    }
  }

  model.gamma.setZero();
  Eigen::MatrixXd resid(T, 2);
  for (int eq = 0; eq < 2; ++eq) {
    const RawOls fit = ols_raw(w, dy.col(eq));
    model.alpha(eq) = fit.coef(0);
    model.alpha_se(eq) = fit.se(0);
    if (lags_diff == 1) {
      model.gamma(eq, 0) = fit.coef(1);
      model.gamma(eq, 1) = fit.coef(2);
    }
    resid.col(eq) = fit.resid;
  }
  model.resid_cov = resid.transpose() * resid / static_cast<double>(T - ncols);
  return model;
}

double ect(const VecmModel& model, double y1_lag, double y2_lag) {
  return model.beta(0) * y1_lag + model.beta(1) * y2_lag + model.beta(2);
}

double equilibrium_level(const VecmModel& model, double y2_lag) {
  return -(model.beta(1) * y2_lag + model.beta(2));
}

Eigen::Vector2d ecm_adjustment_step(const VecmModel& model,
                                    const Eigen::Vector2d& y_lag,
                                    const Eigen::Vector2d& dy_lag) {
  return model.alpha * ect(model, y_lag(0), y_lag(1)) + model.gamma * dy_lag;
}

IrfResult irf(const VecmModel& model, int horizon, const std::array<int, 2>& ordering) {
  if (horizon < 1) throw InvalidInputError("irf: horizon must be >= 1");
  if (!((ordering[0] == 0 && ordering[1] == 1) || (ordering[0] == 1 && ordering[1] == 0))) {
    throw InvalidInputError("irf: ordering must be a permutation of {0, 1}");
  }

  // Level-VAR(2) companion of the VECM (restricted constant drops out of the
  // responses): A1 = I + alpha*beta_levels', A2 = -Gamma, plus Gamma in A1.
  Eigen::Matrix2d a1 = Eigen::Matrix2d::Identity() +
                       model.alpha * model.beta.head<2>().transpose() + model.gamma;
  Eigen::Matrix2d a2 = -model.gamma;

  Eigen::Matrix2d perm = Eigen::Matrix2d::Zero();
  perm(0, ordering[0]) = 1.0;
  perm(1, ordering[1]) = 1.0;
  const Eigen::Matrix2d sigma_ord = perm * model.resid_cov * perm.transpose();
  Eigen::LLT<Eigen::Matrix2d> llt(sigma_ord);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("irf: residual covariance not positive definite");
  }
  const Eigen::Matrix2d impact =
      perm.transpose() * Eigen::Matrix2d(llt.matrixL()) * perm;

  IrfResult res;
  res.horizon = horizon;
  res.ordering = ordering;
  for (auto& imp : res.responses) {
    for (auto& seq : imp) seq.assign(horizon + 1, 0.0);
  }

  Eigen::Matrix2d psi_prev2 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d psi_prev = impact;
  for (int imp = 0; imp < 2; ++imp) {
    for (int resp = 0; resp < 2; ++resp) res.responses[imp][resp][0] = impact(resp, imp);
  }
  for (int h = 1; h <= horizon; ++h) {
    const Eigen::Matrix2d psi = a1 * psi_prev + a2 * psi_prev2;
    for (int imp = 0; imp < 2; ++imp) {
      for (int resp = 0; resp < 2; ++resp) res.responses[imp][resp][h] = psi(resp, imp);
    }
    psi_prev2 = psi_prev;
    psi_prev = psi;
  }
  return res;
}

std::string significance_stars(double t_stat) {
  const double a = std::abs(t_stat);
  if (a > 3.29) return "***";
  if (a > 2.58) return "**";
  if (a > 1.96) return "*";
  return "n.s.";
}

}  // namespace proxylab::vecm
