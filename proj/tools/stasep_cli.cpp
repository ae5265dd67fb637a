// stasep: batch front-end for the stationary-TASEP fluctuation laboratory.
// Subcommands: distribution (analytic tables), simulate (Monte Carlo runs),
// validate (cross-module identity suites). Exit codes: 0 success,
// 1 validation failure, 2 usage error, 3 runtime/model error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stasep/airy_edge.hpp"
#include "stasep/lpp.hpp"
#include "stasep/manifest.hpp"
#include "stasep/painleve.hpp"
#include "stasep/stats.hpp"
#include "stasep/suites.hpp"
#include "stasep/tasep.hpp"

using nlohmann::json;
using namespace stasep;

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw CLI::ValidationError("grid", "need s-min < s-max and s-step > 0");
  std::vector<double> g;
  for (double s = lo; s <= hi + 1e-12; s += step) g.push_back(s);
  return g;
}

// Painleve-route table of F_w: d/ds[F_GUE^{PII}(s+w^2) g_BR(s+w^2, w)].
table::DistributionTable painleve_fw_table(const painleve::PainleveSolution& sol, double w,
                                           const std::vector<double>& grid) {
  const double hd = 1e-2;
  auto theta = [&](double s) {
    return painleve::f_gue_painleve(sol, s + w * w) * painleve::g_br(sol, s + w * w, w);
  };
  table::DistributionTable t;
  t.grid = grid;
  t.cdf.resize(grid.size());
  t.provenance = table::Provenance::Painleve;
  t.params = {{"w", w}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double th[5];
    for (int k = -2; k <= 2; ++k) th[k + 2] = theta(grid[i] + k * hd);
    t.cdf[i] = (-th[4] + 8 * th[3] - 8 * th[1] + th[0]) / (12 * hd);
  }
  return t;
}

int cmd_distribution(const std::string& which, double w, double smin, double smax, double sstep,
                     int order, const std::string& method, const std::string& out,
                     const std::string& cmdline) {
  manifest::RunManifest man;
  man.command_line = cmdline;
  man.started_at = manifest::now_iso();
  man.config = {{"which", which}, {"w", w},       {"s_min", smin},   {"s_max", smax},
                {"s_step", sstep}, {"order", order}, {"method", method}};
  const bool want_fred = (method == "fredholm" || method == "both");
  const bool want_pain = (method == "painleve" || method == "both");
  json summary;

  if (which == "fgue") {
    auto grid = make_grid(smin, smax, sstep);
    std::vector<double> fred(grid.size()), pain(grid.size());
    painleve::PainleveSolution sol;
    if (want_pain) sol = painleve::hastings_mcleod();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (want_fred) fred[i] = edge::f_gue(grid[i], order);
      if (want_pain) pain[i] = painleve::f_gue_painleve(sol, grid[i]);
    }
    std::vector<std::string> names = {"s"};
    std::vector<std::vector<double>> cols = {grid};
    if (want_fred) {
      names.push_back("cdf_fredholm");
      cols.push_back(fred);
    }
    if (want_pain) {
      names.push_back("cdf_painleve");
      cols.push_back(pain);
    }
    if (want_fred && want_pain) {
      std::vector<double> diff(grid.size());
      double mx = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        diff[i] = fred[i] - pain[i];
        mx = std::fmax(mx, std::fabs(diff[i]));
      }
      names.push_back("diff");
      cols.push_back(diff);
      summary["max_abs_diff"] = mx;
      std::printf("max |fredholm - painleve| = %.3e\n", mx);
    }
    manifest::write_columns_csv(out + ".csv", names, cols);
    man.add_output(out + ".csv");
  } else if (which == "fw") {
    auto grid = make_grid(smin, smax, sstep);
    table::DistributionTable tf, tp;
    if (want_fred) {
      tf = edge::f_w_table(w, grid, order);
      manifest::write_table_csv(out + ".csv", tf);
      man.add_output(out + ".csv");
      const double mean = table::mean(tf);
      summary["mean_fredholm"] = mean;
      std::printf("mean-zero residual (fredholm table): %.3e\n", mean);
    }
    if (want_pain) {
      auto sol = painleve::hastings_mcleod();
      tp = painleve_fw_table(sol, w, grid);
      manifest::write_table_csv(out + "_painleve.csv", tp);
      man.add_output(out + "_painleve.csv");
    }
    if (want_fred && want_pain) {
      double mx = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) mx = std::fmax(mx, std::fabs(tf.cdf[i] - tp.cdf[i]));
      summary["max_abs_diff"] = mx;
      std::printf("max |fredholm - painleve| = %.3e\n", mx);
    }
  } else if (which == "g") {
    auto grid = make_grid(smin, smax, sstep);
    std::vector<double> gv(grid.size()), gb(grid.size());
    painleve::PainleveSolution sol;
    if (want_pain) sol = painleve::hastings_mcleod();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (want_fred) gv[i] = edge::g_scaling(grid[i], w, order);
      if (want_pain) gb[i] = painleve::g_br(sol, grid[i], w);
    }
    std::vector<std::string> names = {"s"};
    std::vector<std::vector<double>> cols = {grid};
    if (want_fred) {
      names.push_back("g_fredholm");
      cols.push_back(gv);
    }
    if (want_pain) {
      names.push_back("g_painleve");
      cols.push_back(gb);
    }
    if (want_fred && want_pain) {
      std::vector<double> diff(grid.size());
      double mx = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        diff[i] = gv[i] - gb[i];
        mx = std::fmax(mx, std::fabs(diff[i]));
      }
      names.push_back("diff");
      cols.push_back(diff);
      summary["max_abs_diff"] = mx;
      std::printf("max |fredholm - painleve| = %.3e\n", mx);
    }
    manifest::write_columns_csv(out + ".csv", names, cols);
    man.add_output(out + ".csv");
  } else if (which == "gsc") {
    auto wgrid = make_grid(0.0, std::fmax(w, sstep), sstep);
    std::vector<double> gs(wgrid.size());
    for (std::size_t i = 0; i < wgrid.size(); ++i) gs[i] = edge::g_sc(wgrid[i], order);
    manifest::write_columns_csv(out + ".csv", {"w", "gsc"}, {wgrid, gs});
    man.add_output(out + ".csv");
  } else if (which == "a0") {
    auto r = edge::a0_constant(0.25, order);
    std::printf("a0 = %.6f (integral %.6f, tail estimate %.2e)\n", r.a0, r.integral, r.tail_estimate);
    summary["a0"] = r.a0;
    summary["integral"] = r.integral;
    summary["tail_estimate"] = r.tail_estimate;
    manifest::write_columns_csv(out + ".csv", {"w", "gsc"}, {r.w_grid, r.gsc});
    man.add_output(out + ".csv");
  } else {
    throw CLI::ValidationError("--which", "unknown table " + which);
  }

  man.finished_at = manifest::now_iso();
  man.config["summary"] = summary;
  man.write(out + "_manifest.json");
  return 0;
}

int cmd_simulate_tasep(const json& cfgj, long replicas_override, std::uint64_t seed_override,
                       bool compare_limit, bool dump_trajectory, int two_point_halfwidth,
                       const std::string& out, manifest::RunManifest& man) {
  tasep::TasepConfig cfg;
  cfg.rho = cfgj.at("rho").get<double>();
  cfg.t_max = cfgj.at("t_max").get<double>();
  cfg.window_halfwidth = cfgj.at("window_halfwidth").get<int>();
  cfg.replicas = cfgj.at("replicas").get<long>();
  cfg.master_seed = cfgj.at("master_seed").get<std::uint64_t>();
  if (cfgj.contains("observation_sites"))
    cfg.observation_sites = cfgj.at("observation_sites").get<std::vector<int>>();
  if (replicas_override > 0) cfg.replicas = replicas_override;
  if (seed_override) cfg.master_seed = seed_override;
  if (cfg.observation_sites.empty()) cfg.observation_sites = {0};
  man.master_seed = cfg.master_seed;

  // infer w for each observation site from the stationary characteristics
  const double ch = tasep::chi(cfg.rho);
  const double denom = 2.0 * std::cbrt(ch) * std::pow(cfg.t_max, 2.0 / 3.0);
  std::vector<double> ws;
  for (int j : cfg.observation_sites)
    ws.push_back((j - (1.0 - 2.0 * cfg.rho) * cfg.t_max) / denom);
  std::vector<double> grid;
  for (double s = -5.0; s <= 4.0 + 1e-9; s += 0.1) grid.push_back(s);
  auto samples = tasep::empirical_fw_multi(cfg, ws, grid);

  if (dump_trajectory) {
    auto tr = tasep::evolve_replica(cfg, 0);
    std::vector<double> site, occ0, occ, cross;
    for (int j = -tr.M; j <= tr.M; ++j) {
      site.push_back(j);
      occ0.push_back(tr.occ0[j + tr.M]);
      occ.push_back(tr.occ[j + tr.M]);
      cross.push_back(j < tr.M ? tr.crossings[j + tr.M] : 0.0);
    }
    const std::string path = out + "_trajectory0.csv";
    manifest::write_columns_csv(path, {"site", "eta0", "eta_t", "crossings"}, {site, occ0, occ, cross});
    man.add_output(path);
  }
  if (two_point_halfwidth > 0) {
    std::vector<int> js;
    for (int j = -two_point_halfwidth; j <= two_point_halfwidth; ++j) js.push_back(j);
    auto est = tasep::two_point(cfg, js);
    std::vector<double> jc(js.begin(), js.end());
    const std::string path = out + "_two_point.csv";
    manifest::write_columns_csv(path, {"j", "S", "stderr"}, {jc, est.S, est.se});
    man.add_output(path);
    std::printf("sum_j S = %.6f +- %.6f (chi = %.6f)\n", est.sum, est.sum_se, tasep::chi(cfg.rho));
  }
  json summary = json::array();
  for (std::size_t q = 0; q < samples.size(); ++q) {
    const auto& f = samples[q];
    const std::string path = out + "_fw_site" + std::to_string(f.site) + ".csv";
    manifest::write_table_csv(path, f.table);
    man.add_output(path);
    json s;
    s["site"] = f.site;
    s["w"] = f.w;
    s["mean_scaled"] = f.mean_scaled;
    s["se_scaled"] = f.se_scaled;
    if (compare_limit) {
      std::vector<double> fine;
      for (double x = -6.0; x <= 5.0 + 1e-9; x += 0.1) fine.push_back(x);
      auto limit = edge::f_w_table(f.w, fine);
      const double ks = table::ks_distance(f.table, [&](double x) { return table::cdf_at(limit, x); });
      s["ks_vs_limit"] = ks;
      std::printf("site %d (w = %.3f): KS vs limit table = %.4f\n", f.site, f.w, ks);
    }
    summary.push_back(s);
  }
  man.config["summary"] = summary;
  return 0;
}

int cmd_simulate_lpp(const json& cfgj, long replicas_override, std::uint64_t seed_override,
                     const std::string& out, manifest::RunManifest& man) {
  lpp::LppConfig cfg;
  const std::string model = cfgj.at("model").get<std::string>();
  if (model == "stationary-zeta")
    cfg.model = lpp::WeightModel::StationaryZeta;
  else if (model == "ab-exponential")
    cfg.model = lpp::WeightModel::AbExponential;
  else if (model == "ab-exponential-zero-corner")
    cfg.model = lpp::WeightModel::AbExponentialZeroCorner;
  else if (model == "geometric")
    cfg.model = lpp::WeightModel::Geometric;
  else
    throw std::invalid_argument("unknown lpp weight model " + model);
  cfg.cols = cfgj.at("cols").get<int>();
  cfg.rows = cfgj.at("rows").get<int>();
  if (cfgj.contains("rho")) cfg.rho = cfgj.at("rho").get<double>();
  if (cfgj.contains("a")) cfg.a = cfgj.at("a").get<double>();
  if (cfgj.contains("b")) cfg.b = cfgj.at("b").get<double>();
  if (cfgj.contains("q")) cfg.q = cfgj.at("q").get<double>();
  if (cfgj.contains("alpha")) cfg.alpha = cfgj.at("alpha").get<double>();
  if (cfgj.contains("beta")) cfg.beta = cfgj.at("beta").get<double>();
  cfg.replicas = cfgj.at("replicas").get<long>();
  cfg.master_seed = cfgj.at("master_seed").get<std::uint64_t>();
  if (replicas_override > 0) cfg.replicas = replicas_override;
  if (seed_override) cfg.master_seed = seed_override;
  cfg.validate();
  man.master_seed = cfg.master_seed;

  struct Acc {
    std::vector<double> g;
    std::vector<double> inc;
  };
  const int m = cfg.cols, n = cfg.rows;
  auto chunks = parallel::run_replicas<Acc>(cfg.replicas, 1024, [&](long r, Acc& acc) {
    auto grid = lpp::last_passage(lpp::sample_weights(cfg, r));
    acc.g.push_back(grid.at(m, n));
    if (m >= 2 && n >= 1) acc.inc.push_back(grid.at(m, n) - grid.at(m - 1, n));
  });
  std::vector<double> g, inc;
  for (auto& a : chunks) {
    g.insert(g.end(), a.g.begin(), a.g.end());
    inc.insert(inc.end(), a.inc.begin(), a.inc.end());
  }
  std::vector<double> sorted = g;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> ggrid, gcdf;
  for (int i = 1; i <= 60; ++i) {
    const std::size_t idx = std::min(sorted.size() - 1, sorted.size() * i / 61);
    ggrid.push_back(sorted[idx]);
    gcdf.push_back(static_cast<double>(idx + 1) / sorted.size());
  }
  manifest::write_columns_csv(out + "_gcdf.csv", {"g", "cdf"}, {ggrid, gcdf});
  man.add_output(out + "_gcdf.csv");
  json summary;
  double mean = 0.0;
  for (double v : g) mean += v;
  mean /= g.size();
  summary["g_mean"] = mean;
  summary["g_quantile_50"] = sorted[sorted.size() / 2];
  if (!inc.empty() && cfg.model == lpp::WeightModel::AbExponentialZeroCorner) {
    const double rate = 0.5 + cfg.a;
    auto ks = stats::ks_test(std::move(inc), [&](double x) { return 1.0 - std::exp(-rate * x); });
    summary["increment_ks_p"] = ks.p_value;
    std::printf("stationary increment KS p-value = %.4f\n", ks.p_value);
  }
  man.config["summary"] = summary;
  std::printf("G(%d,%d): mean %.4f over %zu replicas\n", m, n, mean, g.size());
  return 0;
}

int cmd_validate(const std::string& suite, const std::string& budget) {
  const bool full = (budget == "full");
  std::vector<suites::SuiteReport> reports;
  if (suite == "identities" || suite == "all") reports.push_back(suites::identities_suite(full));
  if (suite == "finite-size" || suite == "all") reports.push_back(suites::finite_size_suite(full));
  if (suite == "edge-convergence" || suite == "all") reports.push_back(suites::edge_convergence_suite(full));
  if (reports.empty()) throw CLI::ValidationError("--suite", "unknown suite " + suite);
  bool all = true;
  for (const auto& rep : reports) {
    std::printf("suite %-16s (%.1f s)\n", rep.suite.c_str(), rep.seconds);
    for (const auto& c : rep.checks) {
      std::printf("  [%s] %-45s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      all = all && c.pass;
    }
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary TASEP fluctuation laboratory"};
  app.require_subcommand(1);

  auto* dist = app.add_subcommand("distribution", "compute analytic distribution tables");
  std::string which = "fgue", method = "fredholm", out = "stasep_out";
  double w = 0.0, smin = -8.0, smax = 6.0, sstep = 0.1;
  int order = 64;
  dist->add_option("--which", which, "fgue|fw|g|gsc|a0");
  dist->add_option("--w", w, "rescaled spatial offset");
  dist->add_option("--s-min", smin);
  dist->add_option("--s-max", smax);
  dist->add_option("--s-step", sstep);
  dist->add_option("--quad-order", order)->check(CLI::Range(16, 512));
  dist->add_option("--method", method)->check(CLI::IsMember({"fredholm", "painleve", "both"}));
  dist->add_option("--out", out);

  auto* sim = app.add_subcommand("simulate", "run the Monte Carlo engines");
  std::string model = "tasep", config_path, sim_out = "stasep_sim";
  long replicas = 0;
  std::uint64_t seed = 0;
  bool no_compare = false;
  sim->add_option("--model", model)->check(CLI::IsMember({"tasep", "lpp"}));
  sim->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  sim->add_option("--replicas", replicas);
  sim->add_option("--seed", seed);
  sim->add_option("--out", sim_out);
  sim->add_flag("--no-compare", no_compare, "skip the KS comparison against the limit table");
  bool dump_traj = false;
  int two_point_hw = 0;
  sim->add_flag("--dump-trajectory", dump_traj, "write the first replica's trajectory as CSV");
  sim->add_option("--two-point", two_point_hw, "also estimate S(j,t) for |j| <= this halfwidth");

  auto* val = app.add_subcommand("validate", "run the cross-module identity suites");
  std::string suite = "all", budget = "fast";
  val->add_option("--suite", suite)->check(CLI::IsMember({"identities", "finite-size", "edge-convergence", "all"}));
  val->add_option("--budget", budget)->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (dist->parsed()) {
      return cmd_distribution(which, w, smin, smax, sstep, order, method, out, join_args(argc, argv));
    }
    if (sim->parsed()) {
      std::ifstream in(config_path);
      json cfgj = json::parse(in);
      manifest::RunManifest man;
      man.command_line = join_args(argc, argv);
      man.started_at = manifest::now_iso();
      man.config = cfgj;
      int rc;
      if (model == "tasep")
        rc = cmd_simulate_tasep(cfgj, replicas, seed, !no_compare, dump_traj, two_point_hw, sim_out, man);
      else
        rc = cmd_simulate_lpp(cfgj, replicas, seed, sim_out, man);
      man.finished_at = manifest::now_iso();
      man.write(sim_out + "_manifest.json");
      return rc;
    }
    if (val->parsed()) return cmd_validate(suite, budget);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
