#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxylab/dgp.hpp"
#include "proxylab/monte_carlo.hpp"
#include "proxylab/vecm.hpp"

namespace proxylab::report {

using json = nlohmann::ordered_json;

// JSON schemas are documented in docs/formats.md; keys are emitted in a fixed
// order so equal results serialize to equal bytes.
json to_json(const dgp::BiasReport& r);
json to_json(const dgp::CriteriaReport& r);
json to_json(const mc::McResult& r, bool include_estimates = false);
json to_json(const vecm::AdfResult& r);
json to_json(const vecm::JohansenResult& r);
json to_json(const vecm::VecmModel& m);
json to_json(const vecm::IrfResult& r);

// Human-readable text blocks. The VECM one mirrors the two-equation display
// with the ECT shown inline and significance stars on the adjustment speeds.
std::string to_text(const dgp::BiasReport& r);
std::string to_text(const dgp::CriteriaReport& r);
std::string to_text(const mc::McResult& r);
std::string to_text(const vecm::AdfResult& r);
std::string to_text(const vecm::VecmModel& m);

/// bias_curve as RFC-4180 CSV: one row per grid point and estimand.
std::string sweep_csv(const std::string& param,
                      const std::vector<std::pair<double, mc::McResult>>& curve);

/// Minimal hand-emitted SVG line chart, fixed 640x480 viewBox.
/// Each series is (label, y values); optional band (lo, hi) per series.
struct SvgSeries {
  std::string label;
  std::vector<double> ys;
  std::vector<double> band_lo;  // empty = no band
  std::vector<double> band_hi;
};

std::string svg_line_chart(const std::string& title, const std::vector<double>& xs,
                           const std::vector<SvgSeries>& series);

/// One SVG per (impulse, response) pair; returns the four file names written.
std::vector<std::string> write_irf_svgs(const vecm::IrfResult& r,
                                        const std::array<std::string, 2>& labels,
                                        const std::string& out_dir);

void write_file(const std::string& path, const std::string& content);

}  // namespace proxylab::report
