#include "proxylab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace proxylab::report {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

json to_json(const dgp::BiasReport& r) {
  json j;
  j["estimator"] = r.estimator_name;
  j["estimate"] = r.estimate;
  j["target"] = r.theoretical_target;
  j["bias_term"] = r.bias_term_formula;
  j["components"] = r.components;
  return j;
}

namespace {

json criterion_json(const dgp::Criterion& c) {
  json j;
  j["testable"] = c.testable;
  if (c.testable) j["pass"] = c.pass;
  j["values"] = c.values;
  j["note"] = c.note;
  return j;
}

}  // namespace

json to_json(const dgp::CriteriaReport& r) {
  json j;
  j["relevance"] = criterion_json(r.relevance);
  j["sufficiency"] = criterion_json(r.sufficiency);
  j["exogeneity"] = criterion_json(r.exogeneity);
  j["stability"] = criterion_json(r.stability);
  j["t_critical"] = r.t_critical;
  return j;
}

json to_json(const mc::McResult& r, bool include_estimates) {
  json j;
  j["replications"] = r.replications;
  j["base_seed"] = r.base_seed;
  json est = json::object();
  for (const auto& [label, s] : r.summaries) {
    json e;
    e["mean"] = s.mean;
    e["sd"] = s.sd_across_reps;
    e["mc_se"] = s.mc_se;
    e["target"] = s.theoretical_target;
    e["z"] = s.z_score;
    e["n_fail"] = s.n_fail;
    if (include_estimates) e["estimates"] = s.estimates;
    est[label] = std::move(e);
  }
  j["estimators"] = std::move(est);
  if (!r.failure_log.empty()) j["failures"] = r.failure_log;
  return j;
}

json to_json(const vecm::AdfResult& r) {
  json j;
  j["statistic"] = r.statistic;
  j["lags_used"] = r.lags_used;
  j["spec"] = r.spec == vecm::AdfSpec::Constant ? "constant" : "constant_trend";
  j["critical_values"] = r.critical_values;
  j["reject_unit_root"] = r.reject_unit_root;
  return j;
}

json to_json(const vecm::JohansenResult& r) {
  json j;
  j["trace_r0"] = r.trace_stats[0];
  j["trace_r1"] = r.trace_stats[1];
  j["rank_selected"] = r.rank_selected;
  j["eigenvalues"] = {r.eigenvalues(0), r.eigenvalues(1)};
  j["critical_values"] = r.critical_values;
  return j;
}

json to_json(const vecm::VecmModel& m) {
  json j;
  j["labels"] = {m.labels[0], m.labels[1]};
  j["beta"] = {m.beta(0), m.beta(1), m.beta(2)};
  j["alpha"] = {m.alpha(0), m.alpha(1)};
  j["alpha_se"] = {m.alpha_se(0), m.alpha_se(1)};
  j["alpha_stars"] = {vecm::significance_stars(m.alpha(0) / m.alpha_se(0)),
                      vecm::significance_stars(m.alpha(1) / m.alpha_se(1))};
  j["gamma"] = {{m.gamma(0, 0), m.gamma(0, 1)}, {m.gamma(1, 0), m.gamma(1, 1)}};
  j["resid_cov"] = {{m.resid_cov(0, 0), m.resid_cov(0, 1)},
                    {m.resid_cov(1, 0), m.resid_cov(1, 1)}};
  j["trace_r0"] = m.trace_stats[0];
  j["trace_r1"] = m.trace_stats[1];
  j["rank_selected"] = m.rank_selected;
  j["lags_diff"] = m.lags_diff;
  return j;
}

json to_json(const vecm::IrfResult& r) {
  json j;
  j["horizon"] = r.horizon;
  j["ordering"] = {r.ordering[0], r.ordering[1]};
  json resp = json::object();
  for (int imp = 0; imp < 2; ++imp) {
    for (int out = 0; out < 2; ++out) {
      resp["impulse" + std::to_string(imp + 1) + "_response" + std::to_string(out + 1)] =
          r.responses[imp][out];
    }
  }
  j["responses"] = std::move(resp);
  return j;
}

std::string to_text(const dgp::BiasReport& r) {
  std::ostringstream out;
  out << r.estimator_name << ":\n"
      << "  estimate   " << fmt(r.estimate) << "\n"
      << "  target     " << fmt(r.theoretical_target) << "\n"
      << "  bias term  " << fmt(r.bias_term_formula) << "\n";
  for (const auto& [k, v] : r.components) out << "  [" << k << "] " << fmt(v) << "\n";
  return out.str();
}

namespace {

void criterion_text(std::ostringstream& out, const std::string& name,
                    const dgp::Criterion& c) {
  out << name << ": ";
  if (!c.testable) {
    out << "assumption (not testable)";
  } else {
    out << (c.pass ? "PASS" : "FAIL");
  }
  out << " -- " << c.note << "\n";
  for (const auto& [k, v] : c.values) out << "    " << k << " = " << fmt(v) << "\n";
}

}  // namespace

std::string to_text(const dgp::CriteriaReport& r) {
  std::ostringstream out;
  out << "Proxy quality criteria (t critical " << fmt(r.t_critical) << ")\n";
  criterion_text(out, "relevance", r.relevance);
  criterion_text(out, "sufficiency", r.sufficiency);
  criterion_text(out, "exogeneity", r.exogeneity);
  criterion_text(out, "stability", r.stability);
  return out.str();
}

std::string to_text(const mc::McResult& r) {
  std::ostringstream out;
  out << "Monte Carlo: " << r.replications << " replications, base seed " << r.base_seed
      << "\n";
  for (const auto& [label, s] : r.summaries) {
    out << "  " << label << ": mean " << fmt(s.mean) << "  target "
        << fmt(s.theoretical_target) << "  mc_se " << fmt(s.mc_se) << "  z "
        << fmt(s.z_score) << "  fails " << s.n_fail << "\n";
  }
  return out.str();
}

std::string to_text(const vecm::AdfResult& r) {
  std::ostringstream out;
  out << "ADF (" << (r.spec == vecm::AdfSpec::Constant ? "constant" : "constant+trend")
      << ", " << r.lags_used << " lags): statistic " << fmt(r.statistic) << "\n";
  for (const auto& [lvl, cv] : r.critical_values) {
    out << "  " << lvl << " critical " << fmt(cv) << " -> "
        << (r.reject_unit_root.at(lvl) ? "reject unit root" : "cannot reject") << "\n";
  }
  return out.str();
}

std::string to_text(const vecm::VecmModel& m) {
  const std::string& l1 = m.labels[0];
  const std::string& l2 = m.labels[1];
  const double b = -m.beta(1);
  const double c = -m.beta(2);
  std::ostringstream out;
  out << "ECT_{t-1} = " << l1 << "_{t-1} - " << fmt(b) << "*" << l2 << "_{t-1} - "
      << fmt(c) << "\n";
  for (int eq = 0; eq < 2; ++eq) {
    const double t = m.alpha(eq) / m.alpha_se(eq);
    out << "d" << m.labels[eq] << "_t = " << fmt(m.alpha(eq))
        << vecm::significance_stars(t) << " * ECT_{t-1} + " << fmt(m.gamma(eq, 0)) << "*d"
        << l1 << "_{t-1} + " << fmt(m.gamma(eq, 1)) << "*d" << l2 << "_{t-1} + e"
        << (eq + 1) << "_t\n";
  }
  out << "trace stats: r=0 " << fmt(m.trace_stats[0]) << ", r<=1 " << fmt(m.trace_stats[1])
      << " (rank selected " << m.rank_selected << ")\n";
  return out.str();
}

std::string sweep_csv(const std::string& param,
                      const std::vector<std::pair<double, mc::McResult>>& curve) {
  std::ostringstream out;
  out << param << ",estimator,mean,sd,mc_se,target,z,n_fail\r\n";
  for (const auto& [value, res] : curve) {
    for (const auto& [label, s] : res.summaries) {
      out << fmt(value, "%.17g") << ',' << label << ',' << fmt(s.mean, "%.17g") << ','
          << fmt(s.sd_across_reps, "%.17g") << ',' << fmt(s.mc_se, "%.17g") << ','
          << fmt(s.theoretical_target, "%.17g") << ',' << fmt(s.z_score, "%.17g") << ','
          << s.n_fail << "\r\n";
    }
  }
  return out.str();
}

namespace {

constexpr double kW = 640.0, kH = 480.0;
constexpr double kL = 60.0, kR = 20.0, kT = 40.0, kB = 40.0;

struct Scale {
  double x0, x1, y0, y1;
  double px(double x) const {
    return x1 > x0 ? kL + (x - x0) / (x1 - x0) * (kW - kL - kR) : (kL + kW - kR) / 2;
  }
  double py(double y) const {
    return y1 > y0 ? kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB) : (kT + kH - kB) / 2;
  }
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

}  // namespace

std::string svg_line_chart(const std::string& title, const std::vector<double>& xs,
                           const std::vector<SvgSeries>& series) {
  Scale sc{xs.front(), xs.back(), 0.0, 0.0};
  double lo = 1e300, hi = -1e300;
  for (const auto& s : series) {
    for (double v : s.ys) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : s.band_lo) lo = std::min(lo, v);
    for (double v : s.band_hi) hi = std::max(hi, v);
  }
  if (lo > hi) { lo = 0.0; hi = 1.0; }
  const double pad = (hi - lo) * 0.08 + 1e-12;
  sc.y0 = lo - pad;
  sc.y1 = hi + pad;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" "
         "width=\"640\" height=\"480\">\n"
      << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
      << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" << title << "</text>\n"
      // axes
      << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
      << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
      << kH - kB << "\" stroke=\"black\"/>\n";

  // axis end labels
  out << "<text x=\"" << kL << "\" y=\"" << kH - kB + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(sc.x0) << "</text>\n"
      << "<text x=\"" << kW - kR << "\" y=\"" << kH - kB + 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(sc.x1)
      << "</text>\n"
      << "<text x=\"" << kL - 6 << "\" y=\"" << kH - kB
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(sc.y0)
      << "</text>\n"
      << "<text x=\"" << kL - 6 << "\" y=\"" << kT + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(sc.y1)
      << "</text>\n";

  // zero line when visible
  if (sc.y0 < 0.0 && sc.y1 > 0.0) {
    out << "<line x1=\"" << kL << "\" y1=\"" << fmt(sc.py(0.0)) << "\" x2=\"" << kW - kR
        << "\" y2=\"" << fmt(sc.py(0.0)) << "\" stroke=\"#cccccc\" stroke-dasharray=\"4 4\"/>\n";
  }

  int color = 0;
  for (const auto& s : series) {
    const char* col = kColors[color % 4];
    if (!s.band_lo.empty() && s.band_lo.size() == xs.size() &&
        s.band_hi.size() == xs.size()) {
      out << "<path d=\"M";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out << ' ' << fmt(sc.px(xs[i])) << ' ' << fmt(sc.py(s.band_hi[i]));
      }
      for (std::size_t i = xs.size(); i-- > 0;) {
        out << " L " << fmt(sc.px(xs[i])) << ' ' << fmt(sc.py(s.band_lo[i]));
      }
      out << " Z\" fill=\"" << col << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << fmt(sc.px(xs[i])) << ',' << fmt(sc.py(s.ys[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kW - kR - 4 << "\" y=\"" << kT + 16 + 14 * color
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << col
        << "\">" << s.label << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<std::string> write_irf_svgs(const vecm::IrfResult& r,
                                        const std::array<std::string, 2>& labels,
                                        const std::string& out_dir) {
  std::vector<double> xs(r.horizon + 1);
  for (int h = 0; h <= r.horizon; ++h) xs[static_cast<std::size_t>(h)] = h;
  std::vector<std::string> files;
  for (int imp = 0; imp < 2; ++imp) {
    for (int resp = 0; resp < 2; ++resp) {
      SvgSeries s;
      s.label = labels[imp] + " -> " + labels[resp];
      s.ys = r.responses[imp][resp];
      const std::string name = "irf_" + labels[imp] + "_to_" + labels[resp] + ".svg";
      write_file(out_dir + "/" + name,
                 svg_line_chart("Impulse: " + labels[imp] + " -> " + labels[resp], xs, {s}));
      files.push_back(name);
    }
  }
  return files;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path);
  out << content;
  if (!out) throw IngestError("write failed: " + path);
}

}  // namespace proxylab::report
