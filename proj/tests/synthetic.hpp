#pragma once

// Synthetic time-series generators shared by the VECM tests and the
// acceptance suite.

#include <Eigen/Dense>
#include <cstdint>

#include "proxylab/rng.hpp"
#include "proxylab/vecm.hpp"

namespace proxylab::testgen {

inline Eigen::VectorXd random_walk(int n, std::uint64_t seed, double sd = 1.0) {
  Rng rng(seed);
  Eigen::VectorXd z(n);
  double level = 0.0;
  for (int i = 0; i < n; ++i) {
    level += sd * rng.normal();
    z(i) = level;
  }
  return z;
}

inline Eigen::VectorXd white_noise(int n, std::uint64_t seed, double sd = 1.0) {
  Rng rng(seed);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = sd * rng.normal();
  return z;
}

/// Bivariate cointegrated system simulated straight from the error-correction
/// form: dy_t = alpha * (y1_{t-1} - b*y2_{t-1} - c) + eps_t. One common
/// stochastic trend, stationary spread, known beta = (1, -b, -c).
struct CointegratedDgp {
  double b = 0.1;
  double c = 2.3;
  Eigen::Vector2d alpha{-0.4, 0.15};
  Eigen::Vector2d sigma{1.0, 1.0};

  vecm::TimeSeriesPair simulate(int n, std::uint64_t seed) const {
    Rng rng(seed);
    vecm::TimeSeriesPair ts;
    ts.labels = {"GPR", "Veh"};
    ts.obs.resize(n, 2);
    double y1 = c, y2 = 0.0;  // start at equilibrium for y2 = 0
    const int burn = 50;
    for (int t = -burn; t < n; ++t) {
      const double ect = y1 - b * y2 - c;
      y1 += alpha(0) * ect + sigma(0) * rng.normal();
      y2 += alpha(1) * ect + sigma(1) * rng.normal();
      if (t >= 0) {
        ts.obs(t, 0) = y1;
        ts.obs(t, 1) = y2;
      }
    }
    return ts;
  }
};

inline vecm::TimeSeriesPair independent_walks(int n, std::uint64_t seed) {
  vecm::TimeSeriesPair ts;
  ts.labels = {"a", "b"};
  ts.obs.resize(n, 2);
  ts.obs.col(0) = random_walk(n, mix64(seed));
  ts.obs.col(1) = random_walk(n, mix64(seed ^ 0xabcdefULL));
  return ts;
}

}  // namespace proxylab::testgen
