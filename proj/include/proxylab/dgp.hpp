#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "proxylab/stats.hpp"

namespace proxylab::dgp {

using stats::Vector;

enum class ProxyMode { PerfectProxy, ImperfectProxy };
enum class ShockDist { Gaussian, Uniform };

/// Structural parameters of the latent-factor model
///   Y = alpha0 + alpha1*X + alpha2*C + U
/// with either a perfect proxy P = lambda*C, or an imperfect one where C is
/// the projection C = delta0 + deltaX*X + deltaP*P + V with E[V|X,P] = 0.
struct DgpConfig {
  double alpha0 = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double lambda = 1.0;   // perfect-proxy scale, > 0
  double delta0 = 0.0;
  double delta_x = 0.0;
  double delta_p = 1.0;
  double sigma_u = 1.0;  // sd of the structural shock
  double sigma_v = 1.0;  // sd of the projection residual (imperfect mode)
  double rho_xc = 0.0;   // X-C correlation (perfect mode); X-P in imperfect mode
  double sigma_x = 1.0;
  double sigma_c = 1.0;  // marginal sd of C (perfect mode) / of P (imperfect mode)
  ProxyMode mode = ProxyMode::PerfectProxy;
  ShockDist shocks = ShockDist::Gaussian;

  void validate() const;  // throws ConfigError

  /// Population slope of the omitted regression of Y on X alone:
  /// alpha1 + alpha2 * Cov(X,C)/Var(X) in the population.
  double omitted_slope_target() const;
};

/// Plain-text "key = value" config file, one pair per line, '#' comments.
DgpConfig parse_config(std::istream& in);
DgpConfig load_config(const std::string& path);
std::string format_config(const DgpConfig& cfg);

/// One simulated draw. Latent columns are present in simulation mode only.
struct Sample {
  Vector y, x, p;
  std::optional<Vector> c, u, v;
  int n = 0;
  std::uint64_t seed = 0;

  bool has_latent() const { return c.has_value(); }
};

/// Deterministic for fixed (config, n, seed).
Sample simulate(const DgpConfig& config, int n, std::uint64_t seed);

/// CSV export/ingest: header row "y,x,p[,c,u,v]".
void write_sample_csv(const Sample& s, std::ostream& out);
void write_sample_csv(const Sample& s, const std::string& path);
Sample read_sample_csv(std::istream& in);
Sample read_sample_csv(const std::string& path);

/// One estimator's value next to the expectation the algebra derives for it,
/// with the bias term evaluated on this very sample. The decomposition
/// estimate = target + bias-noise-term holds sample-by-sample, exactly.
struct BiasReport {
  std::string estimator_name;
  double estimate = 0.0;
  double theoretical_target = 0.0;
  double bias_term_formula = 0.0;
  std::map<std::string, double> components;
};

/// Omitted regression of y on x alone; decomposes the slope as
/// alpha1 + alpha2*cov(x,c)/var(x) + cov(x,u)/var(x). Needs latent columns.
BiasReport estimate_omitted(const Sample& s, const DgpConfig& config);

/// Two-regressor fit (y on x, p) in perfect-proxy mode.
/// gamma1 targets alpha1, gamma2 targets alpha2/lambda.
std::pair<BiasReport, BiasReport> estimate_perfect_proxy(const Sample& s,
                                                         const DgpConfig& config);

/// Undo the proxy scale: alpha2_hat = lambda * gamma2_hat. Sign-preserving.
double rescale_gamma2(double gamma2_hat, double lambda);

/// Two-regressor fit in imperfect-proxy mode.
/// mu_x targets alpha1 + alpha2*deltaX (residual bias alpha2*deltaX),
/// mu_p targets alpha2*deltaP (attenuation).
std::pair<BiasReport, BiasReport> estimate_imperfect_proxy(const Sample& s,
                                                           const DgpConfig& config);

/// One of the four proxy-quality criteria.
struct Criterion {
  bool testable = false;
  bool pass = false;
  std::map<std::string, double> values;
  std::string note;
};

/// Relevance, conditional sufficiency, exogeneity, stability.
/// Computable only when C is observed (simulation mode); on observational
/// data the criteria are emitted as untestable identification assumptions.
struct CriteriaReport {
  Criterion relevance;    // delta_p_hat with t-stat; pass when |t| > critical
  Criterion sufficiency;  // delta_x_hat with t-stat; pass when |t| < critical
  Criterion exogeneity;   // cov(u,p), cov(u,x) near zero
  Criterion stability;    // split-half re-estimates of (delta_x, delta_p)
  double t_critical = 1.96;
};

CriteriaReport proxy_criteria_report(const Sample& s, const DgpConfig& config,
                                     double t_critical = 1.96);

std::string to_string(ProxyMode m);
std::string to_string(ShockDist d);

}  // namespace proxylab::dgp
