#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "proxylab/report.hpp"
#include "synthetic.hpp"

using namespace proxylab;

namespace {

std::string pair_csv(std::initializer_list<std::string> rows) {
  std::string out = "date,GPR,Veh\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

}  // namespace

TEST_CASE("time-series CSV: valid file") {
  std::string body = "date,GPR,Veh\n";
  for (int i = 0; i < 40; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "2020-01-%02d,%d.5,%d.25\n", i + 1 - (i / 28) * 28,
                  i, 2 * i);
    // keep dates strictly increasing across month boundary
    if (i >= 28) std::snprintf(buf, sizeof(buf), "2020-02-%02d,%d.5,%d.25\n", i - 27, i, 2 * i);
    body += buf;
  }
  std::istringstream in(body);
  const auto ts = vecm::read_timeseries_csv(in);
  CHECK(ts.n() == 40);
  CHECK(ts.labels[0] == "GPR");
  CHECK(ts.obs(0, 0) == doctest::Approx(0.5));
  CHECK(ts.obs(39, 1) == doctest::Approx(78.25));
}

TEST_CASE("time-series CSV: errors carry row numbers") {
  {
    std::istringstream in(pair_csv({"2020-01-02,1,2", "2020-01-01,3,4"}));
    CHECK_THROWS_WITH_AS(vecm::read_timeseries_csv(in),
                         doctest::Contains("row 3"), IngestError);
  }
  {
    std::istringstream in(pair_csv({"2020-01-01,1,2", "2020-01-02,abc,4"}));
    CHECK_THROWS_WITH_AS(vecm::read_timeseries_csv(in),
                         doctest::Contains("row 3"), IngestError);
  }
  {
    std::istringstream in(pair_csv({"2020-01-01,1,2", "2020-01-02,,4"}));
    CHECK_THROWS_WITH_AS(vecm::read_timeseries_csv(in),
                         doctest::Contains("missing value"), IngestError);
  }
  {
    std::istringstream in(pair_csv({"01/02/2020,1,2"}));
    CHECK_THROWS_WITH_AS(vecm::read_timeseries_csv(in),
                         doctest::Contains("ISO-8601"), IngestError);
  }
}

TEST_CASE("McResult JSON schema keys") {
  mc::McPlan plan;
  plan.config.mode = dgp::ProxyMode::PerfectProxy;
  plan.estimators = {mc::Estimator::PerfectProxy};
  plan.replications = 200;
  plan.n_per_rep = 50;
  plan.base_seed = 1;
  const auto res = mc::run_plan(plan);
  const auto j = report::to_json(res);
  REQUIRE(j.contains("estimators"));
  const auto& g2 = j["estimators"]["gamma2"];
  for (const char* key : {"mean", "sd", "mc_se", "target", "z", "n_fail"}) {
    CHECK(g2.contains(key));
  }
}

TEST_CASE("VECM text block shows the ECT inline with stars") {
  vecm::VecmModel m;
  m.beta << 1.0, -0.091, -2.319;
  m.alpha << -0.378, 0.161;
  m.alpha_se << 0.05, 0.12;
  m.gamma.setZero();
  m.resid_cov = Eigen::Matrix2d::Identity();
  m.labels = {"GPR", "Veh"};
  const std::string text = report::to_text(m);
  CHECK(text.find("ECT_{t-1} = GPR_{t-1} - 0.091*Veh_{t-1} - 2.319") != std::string::npos);
  CHECK(text.find("-0.378***") != std::string::npos);
  CHECK(text.find("0.161n.s.") != std::string::npos);
}

TEST_CASE("sweep CSV is RFC-4180 shaped") {
  mc::McPlan plan;
  plan.estimators = {mc::Estimator::Omitted};
  plan.replications = 100;
  plan.n_per_rep = 50;
  plan.base_seed = 2;
  const auto curve = mc::bias_curve(plan, mc::SweepParam::RhoXc, {0.0, 0.5});
  const std::string csv = report::sweep_csv("rho_xc", curve);
  CHECK(csv.rfind("rho_xc,estimator,mean,sd,mc_se,target,z,n_fail\r\n", 0) == 0);
  CHECK(csv.find("\r\n") != std::string::npos);
  // two grid points, one estimand each
  int lines = 0;
  for (std::size_t i = 0; (i = csv.find("\r\n", i)) != std::string::npos; i += 2) ++lines;
  CHECK(lines == 3);
}

TEST_CASE("SVG chart emission") {
  report::SvgSeries s;
  s.label = "mean";
  s.ys = {0.0, 0.5, 1.0};
  s.band_lo = {-0.1, 0.4, 0.9};
  s.band_hi = {0.1, 0.6, 1.1};
  const std::string svg = report::svg_line_chart("t", {0.0, 1.0, 2.0}, {s});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("viewBox=\"0 0 640 480\"") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("IRF SVG panel writes four files") {
  vecm::VecmModel m;
  m.beta << 1.0, -0.1, -2.3;
  m.alpha << -0.4, 0.15;
  m.gamma.setZero();
  m.resid_cov = Eigen::Matrix2d::Identity();
  m.alpha_se << 1, 1;
  m.labels = {"GPR", "Veh"};
  const auto r = vecm::irf(m, 10);
  const auto files = report::write_irf_svgs(r, m.labels, ".");
  CHECK(files.size() == 4);
  for (const auto& f : files) {
    std::ifstream in(f);
    REQUIRE(in.good());
    std::string head;
    in >> head;
    CHECK(head == "<svg");
    in.close();
    std::remove(f.c_str());
  }
}
