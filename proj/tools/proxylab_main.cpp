// proxylab CLI: simulation, estimation, Monte Carlo and the
// cointegration/VECM pipeline, with reproducible on-disk artifacts.
//
// Exit codes: 0 success, 1 usage error, 2 data or numerical error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "proxylab/dgp.hpp"
#include "proxylab/monte_carlo.hpp"
#include "proxylab/report.hpp"
#include "proxylab/vecm.hpp"

namespace fs = std::filesystem;
using proxylab::report::json;

namespace {

int run_cli(const std::vector<std::string>& args);

struct Common {
  std::string out_dir = ".";
  std::string format = "json";
  std::uint64_t seed = 0;
};

void write_manifest(const std::string& out_dir, const std::vector<std::string>& argv,
                    std::uint64_t seed) {
  json m;
  m["command"] = argv.empty() ? "" : argv[0];
  m["argv"] = argv;
  m["seed"] = seed;
  m["tables"] = proxylab::vecm::critical_value_table_version();
  m["seed_derivation"] = "per-replication seed = mix64(base) XOR mix64(rep + C), splitmix64 mix";
  proxylab::report::write_file(out_dir + "/manifest.json", m.dump(2) + "\n");
}

void ensure_out(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw proxylab::IngestError("cannot create output dir " + out_dir);
}

void emit(const Common& c, const std::string& stem, const json& j,
          const std::string& text) {
  if (c.format == "text") {
    proxylab::report::write_file(c.out_dir + "/" + stem + ".txt", text);
    std::cout << text;
  } else {
    proxylab::report::write_file(c.out_dir + "/" + stem + ".json", j.dump(2) + "\n");
  }
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
  return grid;
}

proxylab::vecm::TimeSeriesPair load_pair(const std::string& path) {
  return proxylab::vecm::read_timeseries_csv(path);
}

int cmd_simulate(const std::string& config_path, int n, const Common& c,
                 const std::vector<std::string>& argv) {
  const auto cfg = proxylab::dgp::load_config(config_path);
  const auto s = proxylab::dgp::simulate(cfg, n, c.seed);
  ensure_out(c.out_dir);
  proxylab::dgp::write_sample_csv(s, c.out_dir + "/sample.csv");
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_estimate(const std::string& config_path, int n, const std::string& mode,
                 const Common& c, const std::vector<std::string>& argv) {
  const auto cfg = proxylab::dgp::load_config(config_path);
  const auto s = proxylab::dgp::simulate(cfg, n, c.seed);
  json j = json::object();
  std::string text;
  if (mode == "omitted") {
    const auto r = proxylab::dgp::estimate_omitted(s, cfg);
    j[r.estimator_name] = proxylab::report::to_json(r);
    text = proxylab::report::to_text(r);
  } else if (mode == "perfect") {
    const auto [g1, g2] = proxylab::dgp::estimate_perfect_proxy(s, cfg);
    j[g1.estimator_name] = proxylab::report::to_json(g1);
    j[g2.estimator_name] = proxylab::report::to_json(g2);
    j["alpha2_rescaled"] = proxylab::dgp::rescale_gamma2(g2.estimate, cfg.lambda);
    text = proxylab::report::to_text(g1) + proxylab::report::to_text(g2);
  } else if (mode == "imperfect") {
    const auto [mx, mp] = proxylab::dgp::estimate_imperfect_proxy(s, cfg);
    j[mx.estimator_name] = proxylab::report::to_json(mx);
    j[mp.estimator_name] = proxylab::report::to_json(mp);
    text = proxylab::report::to_text(mx) + proxylab::report::to_text(mp);
  } else {
    std::cerr << "estimate: unknown --mode '" << mode << "'\n";
    return 1;
  }
  ensure_out(c.out_dir);
  emit(c, "estimate", j, text);
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

proxylab::mc::McPlan build_plan(const std::string& config_path, int n, int reps,
                                std::uint64_t seed, const std::string& estimators) {
  proxylab::mc::McPlan plan;
  plan.config = proxylab::dgp::load_config(config_path);
  plan.n_per_rep = n;
  plan.replications = reps;
  plan.base_seed = seed;
  if (estimators.empty()) {
    plan.estimators.push_back(proxylab::mc::Estimator::Omitted);
    plan.estimators.push_back(plan.config.mode == proxylab::dgp::ProxyMode::PerfectProxy
                                  ? proxylab::mc::Estimator::PerfectProxy
                                  : proxylab::mc::Estimator::ImperfectProxy);
  } else {
    std::stringstream ss(estimators);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      plan.estimators.push_back(proxylab::mc::estimator_from_string(tok));
    }
  }
  return plan;
}

int cmd_mc(const std::string& config_path, int n, int reps, const std::string& estimators,
           const Common& c, const std::vector<std::string>& argv) {
  const auto plan = build_plan(config_path, n, reps, c.seed, estimators);
  const auto res = proxylab::mc::run_plan(plan);
  ensure_out(c.out_dir);
  emit(c, "mc_result", proxylab::report::to_json(res), proxylab::report::to_text(res));
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_sweep(const std::string& config_path, int n, int reps, const std::string& estimators,
              const std::string& sweep_spec, bool plot, const Common& c,
              const std::vector<std::string>& argv) {
  const auto colon = sweep_spec.find(':');
  if (colon == std::string::npos) {
    std::cerr << "sweep: expected --sweep <param>:<v1,v2,...>\n";
    return 1;
  }
  const std::string pname = sweep_spec.substr(0, colon);
  const auto param = proxylab::mc::sweep_param_from_string(pname);
  const auto grid = parse_grid(sweep_spec.substr(colon + 1));

  const auto plan = build_plan(config_path, n, reps, c.seed, estimators);
  const auto curve = proxylab::mc::bias_curve(plan, param, grid);
  ensure_out(c.out_dir);
  proxylab::report::write_file(c.out_dir + "/sweep.csv",
                               proxylab::report::sweep_csv(pname, curve));
  if (plot) {
    std::vector<proxylab::report::SvgSeries> series;
    for (const auto& [label, first] : curve.front().second.summaries) {
      (void)first;
      proxylab::report::SvgSeries s;
      s.label = label;
      for (const auto& [v, res] : curve) {
        (void)v;
        const auto& sum = res.summaries.at(label);
        s.ys.push_back(sum.mean);
        s.band_lo.push_back(sum.mean - 2.0 * sum.mc_se);
        s.band_hi.push_back(sum.mean + 2.0 * sum.mc_se);
      }
      series.push_back(std::move(s));
    }
    proxylab::report::write_file(
        c.out_dir + "/sweep.svg",
        proxylab::report::svg_line_chart("Mean estimate vs " + pname + " (+/- 2 mc_se)", grid,
                                         series));
  }
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_adf(const std::string& input, int column, const std::string& spec_name,
            int max_lags, const Common& c, const std::vector<std::string>& argv) {
  const auto ts = load_pair(input);
  if (column < 1 || column > 2) {
    std::cerr << "adf: --column must be 1 or 2\n";
    return 1;
  }
  const auto spec = spec_name == "constant_trend" ? proxylab::vecm::AdfSpec::ConstantTrend
                                                  : proxylab::vecm::AdfSpec::Constant;
  const auto res = proxylab::vecm::adf_test(ts.column(column - 1), spec, max_lags);
  ensure_out(c.out_dir);
  emit(c, "adf", proxylab::report::to_json(res), proxylab::report::to_text(res));
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_johansen(const std::string& input, int lags, const Common& c,
                 const std::vector<std::string>& argv) {
  const auto res = proxylab::vecm::johansen_trace(load_pair(input), lags);
  ensure_out(c.out_dir);
  emit(c, "johansen", proxylab::report::to_json(res), "");
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_vecm(const std::string& input, int lags, const Common& c,
             const std::vector<std::string>& argv) {
  const auto model = proxylab::vecm::fit_vecm(load_pair(input), 1, lags);
  ensure_out(c.out_dir);
  emit(c, "vecm", proxylab::report::to_json(model), proxylab::report::to_text(model));
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_irf(const std::string& input, int lags, int horizon, const std::string& ordering,
            bool plot, const Common& c, const std::vector<std::string>& argv) {
  const auto ts = load_pair(input);
  const auto model = proxylab::vecm::fit_vecm(ts, 1, lags);
  std::array<int, 2> ord{0, 1};
  if (ordering == "21") ord = {1, 0};
  else if (!ordering.empty() && ordering != "12") {
    std::cerr << "irf: --ordering must be 12 or 21\n";
    return 1;
  }
  const auto res = proxylab::vecm::irf(model, horizon, ord);
  ensure_out(c.out_dir);
  proxylab::report::write_file(c.out_dir + "/irf.json",
                               proxylab::report::to_json(res).dump(2) + "\n");
  if (plot) proxylab::report::write_irf_svgs(res, model.labels, c.out_dir);
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_criteria(const std::string& config_path, const std::string& input, int n,
                 const Common& c, const std::vector<std::string>& argv) {
  proxylab::dgp::Sample s;
  proxylab::dgp::DgpConfig cfg;
  if (!input.empty()) {
    s = proxylab::dgp::read_sample_csv(input);
  } else if (!config_path.empty()) {
    cfg = proxylab::dgp::load_config(config_path);
    s = proxylab::dgp::simulate(cfg, n, c.seed);
  } else {
    std::cerr << "criteria: need --config (simulation) or --input (observational)\n";
    return 1;
  }
  const auto rep = proxylab::dgp::proxy_criteria_report(s, cfg);
  ensure_out(c.out_dir);
  emit(c, "criteria", proxylab::report::to_json(rep), proxylab::report::to_text(rep));
  write_manifest(c.out_dir, argv, c.seed);
  return 0;
}

int cmd_rerun(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw proxylab::IngestError("cannot open manifest " + manifest_path);
  json m = json::parse(in);
  std::vector<std::string> argv = m.at("argv").get<std::vector<std::string>>();
  if (!argv.empty() && argv[0] == "rerun") {
    throw proxylab::IngestError("manifest records a rerun; refusing to recurse");
  }
  return run_cli(argv);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"proxylab: proxy-variable regression lab and VECM pipeline"};
  app.require_subcommand(1);

  Common c;
  std::string config_path, input, mode = "omitted", estimators, sweep_spec;
  std::string spec_name = "constant", ordering = "12", manifest_path;
  int n = 200, reps = 1000, column = 1, max_lags = 4, lags = 1, horizon = 20;
  bool plot = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out_dir, "output directory");
    sub->add_option("--seed", c.seed, "base RNG seed");
    sub->add_option("--format", c.format, "json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
  };

  auto* sim = app.add_subcommand("simulate", "draw a sample from the DGP");
  sim->add_option("--config", config_path, "DGP config file")->required();
  sim->add_option("--n", n, "sample size");
  add_common(sim);

  auto* est = app.add_subcommand("estimate", "estimators + bias reports on one sample");
  est->add_option("--config", config_path)->required();
  est->add_option("--n", n);
  est->add_option("--mode", mode, "omitted|perfect|imperfect");
  add_common(est);

  auto* mcsub = app.add_subcommand("mc", "Monte Carlo verification of expectation claims");
  mcsub->add_option("--config", config_path)->required();
  mcsub->add_option("--n", n, "observations per replication");
  mcsub->add_option("--reps", reps, "replications");
  mcsub->add_option("--estimators", estimators, "comma list: omitted,perfect_proxy,imperfect_proxy");
  add_common(mcsub);

  auto* sweep = app.add_subcommand("sweep", "bias curve over a parameter grid");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--n", n);
  sweep->add_option("--reps", reps);
  sweep->add_option("--estimators", estimators);
  sweep->add_option("--sweep", sweep_spec, "<param>:<v1,v2,...>")->required();
  sweep->add_flag("--plot", plot, "emit SVG");
  add_common(sweep);

  auto* adf = app.add_subcommand("adf", "augmented Dickey-Fuller unit-root test");
  adf->add_option("--input", input, "bivariate time-series CSV")->required();
  adf->add_option("--column", column, "1 or 2");
  adf->add_option("--spec", spec_name, "constant|constant_trend")
      ->check(CLI::IsMember({"constant", "constant_trend"}));
  adf->add_option("--max-lags", max_lags);
  add_common(adf);

  auto* jo = app.add_subcommand("johansen", "trace test for cointegration rank");
  jo->add_option("--input", input)->required();
  jo->add_option("--lags", lags, "lagged differences");
  add_common(jo);

  auto* ve = app.add_subcommand("vecm", "fit the rank-1 restricted-constant VECM");
  ve->add_option("--input", input)->required();
  ve->add_option("--lags", lags);
  add_common(ve);

  auto* ir = app.add_subcommand("irf", "orthogonalized impulse responses");
  ir->add_option("--input", input)->required();
  ir->add_option("--lags", lags);
  ir->add_option("--horizon", horizon);
  ir->add_option("--ordering", ordering, "12 (default) or 21");
  ir->add_flag("--plot", plot, "one SVG per impulse-response pair");
  add_common(ir);

  auto* cr = app.add_subcommand("criteria", "proxy-quality criteria report");
  cr->add_option("--config", config_path, "simulate then report");
  cr->add_option("--input", input, "sample CSV (y,x,p[,c,u,v])");
  cr->add_option("--n", n);
  add_common(cr);

  auto* re = app.add_subcommand("rerun", "repeat a run from its manifest");
  re->add_option("--manifest", manifest_path)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, n, c, args);
    if (est->parsed()) return cmd_estimate(config_path, n, mode, c, args);
    if (mcsub->parsed()) return cmd_mc(config_path, n, reps, estimators, c, args);
    if (sweep->parsed())
      return cmd_sweep(config_path, n, reps, estimators, sweep_spec, plot, c, args);
    if (adf->parsed()) return cmd_adf(input, column, spec_name, max_lags, c, args);
    if (jo->parsed()) return cmd_johansen(input, lags, c, args);
    if (ve->parsed()) return cmd_vecm(input, lags, c, args);
    if (ir->parsed()) return cmd_irf(input, lags, horizon, ordering, plot, c, args);
    if (cr->parsed()) return cmd_criteria(config_path, input, n, c, args);
    if (re->parsed()) return cmd_rerun(manifest_path);
  } catch (const proxylab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}
