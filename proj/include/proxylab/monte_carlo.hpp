#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "proxylab/dgp.hpp"

namespace proxylab::mc {

enum class Estimator { Omitted, PerfectProxy, ImperfectProxy };

std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& s);

struct McPlan {
  dgp::DgpConfig config;
  int n_per_rep = 200;
  int replications = 1000;  // >= 100
  std::uint64_t base_seed = 0;
  std::vector<Estimator> estimators;

  void validate() const;
};

/// Per-estimand replication summary. Failed replications hold NaN in
/// `estimates`; mean/sd/mc_se are over successes only.
struct EstimatorSummary {
  double mean = 0.0;
  double sd_across_reps = 0.0;
  double mc_se = 0.0;  // sd / sqrt(successes)
  double theoretical_target = 0.0;
  double z_score = 0.0;  // (mean - target) / mc_se
  int n_fail = 0;
  std::vector<double> estimates;  // length = replications
};

struct McResult {
  // Keyed by estimand: beta1, gamma1, gamma2, mu_x, mu_p.
  std::map<std::string, EstimatorSummary> summaries;
  int replications = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::string> failure_log;  // "rep <r>: <what>"
};

/// Runs the plan. Replication r uses derive_seed(base_seed, r); replications
/// may run on several threads (capped by PROXYLAB_THREADS) but aggregation is
/// in replication-index order, so the result is bit-identical regardless of
/// thread count. Aborts with McFailureError when > 1% of replications fail.
McResult run_plan(const McPlan& plan);

class McFailureError : public Error {
 public:
  using Error::Error;
};

/// Swept parameter for bias_curve.
enum class SweepParam { Alpha2, RhoXc, Lambda, DeltaX, DeltaP };

SweepParam sweep_param_from_string(const std::string& name);
std::string to_string(SweepParam p);

/// One run_plan per grid point, with the named config field replaced.
std::vector<std::pair<double, McResult>> bias_curve(const McPlan& plan,
                                                    SweepParam param,
                                                    const std::vector<double>& grid);

/// Thread cap: PROXYLAB_THREADS if set, else hardware concurrency.
int thread_budget();

}  // namespace proxylab::mc
