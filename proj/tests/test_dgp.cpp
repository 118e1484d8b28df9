#include <doctest.h>

#include <cmath>
#include <sstream>

#include "proxylab/dgp.hpp"
#include "proxylab/stats.hpp"

using namespace proxylab;
using dgp::DgpConfig;
using dgp::ProxyMode;

namespace {

DgpConfig perfect_cfg() {
  DgpConfig c;
  c.alpha0 = 0.5;
  c.alpha1 = 1.0;
  c.alpha2 = 2.0;
  c.lambda = 2.0;
  c.rho_xc = 0.5;
  c.mode = ProxyMode::PerfectProxy;
  return c;
}

DgpConfig imperfect_cfg() {
  DgpConfig c;
  c.alpha1 = 1.0;
  c.alpha2 = 2.0;
  c.delta_x = 0.3;
  c.delta_p = 0.5;
  c.rho_xc = 0.4;
  c.mode = ProxyMode::ImperfectProxy;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  DgpConfig c;
  c.lambda = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = DgpConfig{};
  c.rho_xc = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = DgpConfig{};
  c.sigma_x = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config file round trip") {
  DgpConfig c = imperfect_cfg();
  c.shocks = dgp::ShockDist::Uniform;
  std::istringstream in(dgp::format_config(c));
  const DgpConfig back = dgp::parse_config(in);
  CHECK(back.alpha2 == c.alpha2);
  CHECK(back.delta_p == c.delta_p);
  CHECK(back.mode == c.mode);
  CHECK(back.shocks == c.shocks);

  std::istringstream bad("alphaX = 3\n");
  CHECK_THROWS_AS(dgp::parse_config(bad), IngestError);
}

TEST_CASE("simulate: zero noise reconstructs Y exactly") {
  DgpConfig c = perfect_cfg();
  c.sigma_u = 0.0;
  const auto s = dgp::simulate(c, 100, 42);
  for (int i = 0; i < s.n; ++i) {
    const double yi = c.alpha0 + c.alpha1 * s.x(i) + c.alpha2 * (*s.c)(i) + (*s.u)(i);
    CHECK(std::abs(s.y(i) - yi) < 1e-12);
    CHECK((*s.u)(i) == 0.0);
  }
}

TEST_CASE("simulate: proxy proportionality and correlation") {
  DgpConfig c = perfect_cfg();
  const auto s = dgp::simulate(c, 1000, 7);
  for (int i = 0; i < s.n; ++i) CHECK(s.p(i) == 2.0 * (*s.c)(i));
  const double corr = stats::sample_cov(s.x, *s.c) /
                      std::sqrt(stats::sample_var(s.x) * stats::sample_var(*s.c));
  CHECK(std::abs(corr - 0.5) < 0.1);
}

TEST_CASE("simulate: deterministic and n >= 10 enforced") {
  DgpConfig c = perfect_cfg();
  const auto a = dgp::simulate(c, 50, 99);
  const auto b = dgp::simulate(c, 50, 99);
  CHECK(a.y == b.y);
  CHECK(a.x == b.x);
  CHECK_THROWS_AS(dgp::simulate(c, 5, 1), InvalidInputError);
}

TEST_CASE("simulate: uniform shocks hit their moments") {
  DgpConfig c = perfect_cfg();
  c.shocks = dgp::ShockDist::Uniform;
  const auto s = dgp::simulate(c, 20000, 3);
  CHECK(std::abs(stats::sample_var(s.x) - 1.0) < 0.05);
  CHECK(std::abs(s.x.mean()) < 0.05);
}

TEST_CASE("sample CSV round trip preserves estimates") {
  const auto s = dgp::simulate(perfect_cfg(), 200, 12);
  std::ostringstream out;
  dgp::write_sample_csv(s, out);
  std::istringstream in(out.str());
  const auto back = dgp::read_sample_csv(in);
  REQUIRE(back.n == s.n);
  const auto f1 = stats::ols_two_regressor(s.y, s.x, s.p);
  const auto f2 = stats::ols_two_regressor(back.y, back.x, back.p);
  CHECK(std::abs(f1.slopes[0] - f2.slopes[0]) < 1e-12);
  CHECK(std::abs(f1.slopes[1] - f2.slopes[1]) < 1e-12);
  CHECK(back.c.has_value());
  CHECK(back.u.has_value());
}

TEST_CASE("estimate_omitted: decomposition identity, sample by sample") {
  DgpConfig c = perfect_cfg();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = dgp::simulate(c, 150, seed);
    const auto r = dgp::estimate_omitted(s, c);
    const double noise = r.components.at("noise_term");
    CHECK(std::abs(r.estimate - c.alpha1 - r.bias_term_formula - noise) < 1e-10);
  }
}

TEST_CASE("estimate_omitted special cases") {
  DgpConfig c = perfect_cfg();
  c.alpha2 = 0.0;
  auto s = dgp::simulate(c, 5000, 2);
  auto r = dgp::estimate_omitted(s, c);
  CHECK(r.bias_term_formula == 0.0);
  CHECK(std::abs(r.estimate - c.alpha1) < 0.1);

  c = perfect_cfg();
  c.rho_xc = 0.0;
  s = dgp::simulate(c, 20000, 4);
  r = dgp::estimate_omitted(s, c);
  CHECK(std::abs(r.bias_term_formula) < 0.1);

  // zero-U decomposition: estimate - alpha1 = cov(x,c)/var(x) exactly
  c = perfect_cfg();
  c.alpha2 = 1.0;
  c.rho_xc = 0.8;
  c.sigma_u = 0.0;
  s = dgp::simulate(c, 300, 8);
  r = dgp::estimate_omitted(s, c);
  const double expect = stats::sample_cov(s.x, *s.c) / stats::sample_var(s.x);
  CHECK(std::abs((r.estimate - c.alpha1) - expect) < 1e-10);
}

TEST_CASE("estimate_omitted requires latent columns") {
  auto s = dgp::simulate(perfect_cfg(), 100, 1);
  s.c.reset();
  CHECK_THROWS_AS(dgp::estimate_omitted(s, perfect_cfg()), InvalidInputError);
}

TEST_CASE("perfect proxy: exact cancellation when U = 0") {
  DgpConfig c = perfect_cfg();
  c.sigma_u = 0.0;
  SUBCASE("lambda 1") {
    c.lambda = 1.0;
    c.alpha2 = 2.0;
    const auto s = dgp::simulate(c, 200, 5);
    const auto [g1, g2] = dgp::estimate_perfect_proxy(s, c);
    CHECK(std::abs(g1.estimate - c.alpha1) < 1e-8);
    CHECK(std::abs(g2.estimate - 2.0) < 1e-8);
  }
  SUBCASE("lambda 4, alpha2 2 -> gamma2 = 0.5") {
    c.lambda = 4.0;
    c.alpha2 = 2.0;
    const auto s = dgp::simulate(c, 200, 6);
    const auto [g1, g2] = dgp::estimate_perfect_proxy(s, c);
    CHECK(std::abs(g2.estimate - 0.5) < 1e-8);
  }
  SUBCASE("cancellation across many seeds") {
    for (std::uint64_t seed = 10; seed < 40; ++seed) {
      const auto s = dgp::simulate(c, 120, seed);
      const auto [g1, g2] = dgp::estimate_perfect_proxy(s, c);
      CHECK(std::abs(g1.estimate - c.alpha1) < 1e-8);
      CHECK(std::abs(g2.estimate - c.alpha2 / c.lambda) < 1e-8);
    }
  }
}

TEST_CASE("perfect proxy: exact decomposition with noise") {
  DgpConfig c = perfect_cfg();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = dgp::simulate(c, 150, seed);
    const auto [g1, g2] = dgp::estimate_perfect_proxy(s, c);
    CHECK(std::abs(g1.estimate - g1.theoretical_target - g1.bias_term_formula) < 1e-10);
    CHECK(std::abs(g2.estimate - g2.theoretical_target - g2.bias_term_formula) < 1e-10);
  }
}

TEST_CASE("rescale_gamma2") {
  CHECK(dgp::rescale_gamma2(0.5, 4.0) == 2.0);
  CHECK(dgp::rescale_gamma2(0.0, 3.0) == 0.0);
  CHECK_THROWS_AS(dgp::rescale_gamma2(1.0, 0.0), InvalidInputError);
  CHECK_THROWS_AS(dgp::rescale_gamma2(1.0, -2.0), InvalidInputError);
  for (double g : {-2.0, -0.1, 0.3, 5.0}) {
    for (double l : {0.5, 1.0, 7.0}) {
      CHECK(std::signbit(dgp::rescale_gamma2(g, l)) == std::signbit(g));
    }
  }
}

TEST_CASE("imperfect proxy: targets and identity") {
  DgpConfig c = imperfect_cfg();
  const auto s = dgp::simulate(c, 400, 17);
  const auto [mx, mp] = dgp::estimate_imperfect_proxy(s, c);
  CHECK(mx.theoretical_target == doctest::Approx(1.0 + 2.0 * 0.3));
  CHECK(mp.theoretical_target == doctest::Approx(2.0 * 0.5));
  CHECK(std::abs(mx.estimate - mx.theoretical_target - mx.bias_term_formula) < 1e-10);
  CHECK(std::abs(mp.estimate - mp.theoretical_target - mp.bias_term_formula) < 1e-10);

  DgpConfig nodx = c;
  nodx.delta_x = 0.0;
  const auto s2 = dgp::simulate(nodx, 400, 18);
  CHECK(dgp::estimate_imperfect_proxy(s2, nodx).first.theoretical_target ==
        doctest::Approx(nodx.alpha1));

  DgpConfig nodp = c;
  nodp.delta_p = 0.0;
  const auto s3 = dgp::simulate(nodp, 400, 19);
  CHECK(dgp::estimate_imperfect_proxy(s3, nodp).second.theoretical_target ==
        doctest::Approx(0.0));
}

TEST_CASE("criteria report in simulation mode") {
  DgpConfig good = imperfect_cfg();
  good.delta_x = 0.0;
  good.delta_p = 1.0;
  const auto s = dgp::simulate(good, 5000, 31);
  const auto rep = dgp::proxy_criteria_report(s, good);
  CHECK(rep.relevance.testable);
  CHECK(rep.relevance.pass);
  CHECK(rep.sufficiency.pass);
  CHECK(rep.exogeneity.testable);
  CHECK(rep.stability.testable);
}

TEST_CASE("criteria on an exact proxy: degenerate t statistics still decide") {
  // P = lambda * C fits the projection perfectly, so the standard errors are
  // zero and naive t ratios are 0/0. All four verdicts must still be passes.
  const auto s = dgp::simulate(perfect_cfg(), 500, 11);
  const auto rep = dgp::proxy_criteria_report(s, perfect_cfg());
  CHECK(rep.relevance.pass);
  CHECK(rep.sufficiency.pass);
  CHECK(rep.exogeneity.pass);
  CHECK(rep.stability.pass);
}

TEST_CASE("criteria: delta_x = 0.5 fails sufficiency almost surely at n = 5000") {
  DgpConfig bad = imperfect_cfg();
  bad.delta_x = 0.5;
  int rejected = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto s = dgp::simulate(bad, 5000, 1000 + static_cast<std::uint64_t>(t));
    if (!dgp::proxy_criteria_report(s, bad).sufficiency.pass) ++rejected;
  }
  CHECK(rejected >= static_cast<int>(0.99 * trials));
}

TEST_CASE("criteria on observational data are assumptions") {
  auto s = dgp::simulate(perfect_cfg(), 500, 77);
  s.c.reset();
  s.u.reset();
  const auto rep = dgp::proxy_criteria_report(s, perfect_cfg());
  CHECK_FALSE(rep.relevance.testable);
  CHECK_FALSE(rep.sufficiency.testable);
  CHECK_FALSE(rep.exogeneity.testable);
  CHECK_FALSE(rep.stability.testable);
  CHECK(rep.relevance.note.find("not testable") != std::string::npos);
}
