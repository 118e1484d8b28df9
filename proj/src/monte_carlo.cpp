#include "proxylab/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "proxylab/rng.hpp"

namespace proxylab::mc {

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::Omitted: return "omitted";
    case Estimator::PerfectProxy: return "perfect_proxy";
    case Estimator::ImperfectProxy: return "imperfect_proxy";
  }
  return "?";
}

Estimator estimator_from_string(const std::string& s) {
  if (s == "omitted") return Estimator::Omitted;
  if (s == "perfect_proxy") return Estimator::PerfectProxy;
  if (s == "imperfect_proxy") return Estimator::ImperfectProxy;
  throw InvalidInputError("unknown estimator '" + s + "'");
}

void McPlan::validate() const {
  config.validate();
  if (replications < 100) {
    throw ConfigError("McPlan: replications must be >= 100 (MC standard errors "
                      "are meaningless below that)");
  }
  if (n_per_rep < 10) throw ConfigError("McPlan: n_per_rep must be >= 10");
  if (estimators.empty()) throw ConfigError("McPlan: no estimators selected");
  for (Estimator e : estimators) {
    if (e == Estimator::PerfectProxy && config.mode != dgp::ProxyMode::PerfectProxy) {
      throw ConfigError("McPlan: perfect_proxy estimator needs mode = perfect");
    }
    if (e == Estimator::ImperfectProxy && config.mode != dgp::ProxyMode::ImperfectProxy) {
      throw ConfigError("McPlan: imperfect_proxy estimator needs mode = imperfect");
    }
  }
}

int thread_budget() {
  if (const char* env = std::getenv("PROXYLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

struct Estimand {
  std::string label;
  Estimator source;
  int slot;  // 0 or 1 within the estimator's report pair
  double target;
};

std::vector<Estimand> plan_estimands(const McPlan& plan) {
  const auto& c = plan.config;
  std::vector<Estimand> out;
  for (Estimator e : plan.estimators) {
    switch (e) {
      case Estimator::Omitted:
        out.push_back({"beta1", e, 0, c.omitted_slope_target()});
        break;
      case Estimator::PerfectProxy:
        out.push_back({"gamma1", e, 0, c.alpha1});
        out.push_back({"gamma2", e, 1, c.alpha2 / c.lambda});
        break;
      case Estimator::ImperfectProxy:
        out.push_back({"mu_x", e, 0, c.alpha1 + c.alpha2 * c.delta_x});
        out.push_back({"mu_p", e, 1, c.alpha2 * c.delta_p});
        break;
    }
  }
  return out;
}

}  // namespace

McResult run_plan(const McPlan& plan) {
  plan.validate();
  const auto estimands = plan_estimands(plan);
  const int reps = plan.replications;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // values[e][r]; filled by worker threads, aggregated in index order.
  std::vector<std::vector<double>> values(estimands.size(),
                                          std::vector<double>(reps, nan));
  std::vector<std::string> fail_what(reps);
  std::vector<char> failed(reps, 0);

  auto run_rep = [&](int r) {
    const std::uint64_t seed = derive_seed(plan.base_seed, static_cast<std::uint64_t>(r));
    try {
      const dgp::Sample s = dgp::simulate(plan.config, plan.n_per_rep, seed);
      for (std::size_t e = 0; e < estimands.size(); ++e) {
        const auto& est = estimands[e];
        switch (est.source) {
          case Estimator::Omitted:
            values[e][r] = dgp::estimate_omitted(s, plan.config).estimate;
            break;
          case Estimator::PerfectProxy: {
            const auto pr = dgp::estimate_perfect_proxy(s, plan.config);
            values[e][r] = est.slot == 0 ? pr.first.estimate : pr.second.estimate;
            break;
          }
          case Estimator::ImperfectProxy: {
            const auto pr = dgp::estimate_imperfect_proxy(s, plan.config);
            values[e][r] = est.slot == 0 ? pr.first.estimate : pr.second.estimate;
            break;
          }
        }
      }
    } catch (const Error& err) {
      failed[r] = 1;
      fail_what[r] = err.what();
      for (std::size_t e = 0; e < estimands.size(); ++e) values[e][r] = nan;
    }
  };

  const int threads = std::min(thread_budget(), reps);
  if (threads <= 1) {
    for (int r = 0; r < reps; ++r) run_rep(r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (int r = t; r < reps; r += threads) run_rep(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  McResult res;
  res.replications = reps;
  res.base_seed = plan.base_seed;
  int n_fail = 0;
  for (int r = 0; r < reps; ++r) {
    if (failed[r]) {
      ++n_fail;
      res.failure_log.push_back("rep " + std::to_string(r) + ": " + fail_what[r]);
    }
  }
  if (n_fail > reps / 100) {
    std::string diag = "run_plan: " + std::to_string(n_fail) + "/" +
                       std::to_string(reps) + " replications failed";
    if (!res.failure_log.empty()) diag += "; first: " + res.failure_log.front();
    throw McFailureError(diag);
  }

  for (std::size_t e = 0; e < estimands.size(); ++e) {
    EstimatorSummary sum;
    sum.estimates = values[e];
    sum.n_fail = n_fail;
    sum.theoretical_target = estimands[e].target;

    const int ok = reps - n_fail;
    double mean = 0.0;
    for (int r = 0; r < reps; ++r) {
      if (!failed[r]) mean += values[e][r];
    }
    mean /= ok;
    double ss = 0.0;
    for (int r = 0; r < reps; ++r) {
      if (!failed[r]) {
        const double d = values[e][r] - mean;
        ss += d * d;
      }
    }
    sum.mean = mean;
    sum.sd_across_reps = ok > 1 ? std::sqrt(ss / (ok - 1)) : 0.0;
    sum.mc_se = sum.sd_across_reps / std::sqrt(static_cast<double>(ok));
    sum.z_score = sum.mc_se > 0.0 ? (sum.mean - sum.theoretical_target) / sum.mc_se : 0.0;
    res.summaries[estimands[e].label] = std::move(sum);
  }
  return res;
}

SweepParam sweep_param_from_string(const std::string& name) {
  if (name == "alpha2") return SweepParam::Alpha2;
  if (name == "rho_xc") return SweepParam::RhoXc;
  if (name == "lambda") return SweepParam::Lambda;
  if (name == "deltaX" || name == "delta_x") return SweepParam::DeltaX;
  if (name == "deltaP" || name == "delta_p") return SweepParam::DeltaP;
  throw InvalidInputError("unknown sweep parameter '" + name +
                          "' (expected alpha2, rho_xc, lambda, deltaX, deltaP)");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Alpha2: return "alpha2";
    case SweepParam::RhoXc: return "rho_xc";
    case SweepParam::Lambda: return "lambda";
    case SweepParam::DeltaX: return "deltaX";
    case SweepParam::DeltaP: return "deltaP";
  }
  return "?";
}

std::vector<std::pair<double, McResult>> bias_curve(const McPlan& plan,
                                                    SweepParam param,
                                                    const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidInputError("bias_curve: empty grid");
  std::vector<std::pair<double, McResult>> out;
  out.reserve(grid.size());
  for (double v : grid) {
    McPlan pt = plan;
    switch (param) {
      case SweepParam::Alpha2: pt.config.alpha2 = v; break;
      case SweepParam::RhoXc: pt.config.rho_xc = v; break;
      case SweepParam::Lambda: pt.config.lambda = v; break;
      case SweepParam::DeltaX: pt.config.delta_x = v; break;
      case SweepParam::DeltaP: pt.config.delta_p = v; break;
    }
    out.emplace_back(v, run_plan(pt));
  }
  return out;
}

}  // namespace proxylab::mc
