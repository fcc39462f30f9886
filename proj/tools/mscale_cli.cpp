// mscale: simulate paths, estimate scaling, run the two-stage test and drive
// Monte Carlo studies from the command line. JSON on stdout; one JSON error
// line on stderr and a nonzero exit status on failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mscale/error.hpp"
#include "mscale/experiment.hpp"
#include "mscale/ghe.hpp"
#include "mscale/hypothesis.hpp"
#include "mscale/processes.hpp"
#include "mscale/serialize.hpp"
#include "mscale/series_io.hpp"
#include "mscale/tuning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out = "out";
  bool seed_set = false;
  bool workers_set = false;
  bool out_set = false;
};

struct ProcessFlags {
  std::string process = "rbergomi";
  std::size_t n = 4096;
  std::size_t count = 1;
  std::optional<double> hurst, xi0, eta, rho, dt, lambda, alpha, scale;
  std::size_t large_scale = 0, kernel_cutoff = 0;
};

void print(const json& j) { std::cout << j.dump() << '\n'; }

void write_json(const fs::path& path, const json& j) { mscale::write_file_atomic(path, j.dump(2) + "\n"); }

mscale::ProcessParams build_params(const ProcessFlags& f) {
  using namespace mscale;
  switch (parse_process_kind(f.process)) {
    case ProcessKind::fbm: {
      FbmParams p;
      p.n = f.n;
      if (f.hurst) p.hurst = *f.hurst;
      if (f.scale) p.scale = *f.scale;
      return p;
    }
    case ProcessKind::rbergomi: {
      RBergomiParams p;
      p.n = f.n;
      if (f.hurst) p.hurst = *f.hurst;
      if (f.xi0) p.xi0 = *f.xi0;
      if (f.eta) p.eta = *f.eta;
      if (f.rho) p.rho = *f.rho;
      if (f.dt) p.dt = *f.dt;
      return p;
    }
    case ProcessKind::mrw: {
      MrwParams p;
      p.n = f.n;
      p.lambda = f.lambda.value_or(0.25);
      p.large_scale = f.large_scale;
      if (f.scale) p.sigma = *f.scale;
      return p;
    }
    case ProcessKind::flsm: {
      FlsmParams p;
      p.n = f.n;
      p.alpha = f.alpha.value_or(1.9);
      p.hurst = f.hurst.value_or(0.5);
      p.kernel_cutoff = f.kernel_cutoff;
      return p;
    }
    default:
      throw InvalidArgument("simulate: --process must be fbm, rbergomi, mrw or flsm");
  }
}

int run_simulate(const Globals& g, const ProcessFlags& f) {
  const auto params = build_params(f);
  const fs::path dir = fs::path(g.out) / "paths";
  json files = json::array();
  for (std::size_t i = 0; i < f.count; ++i) {
    const mscale::RngSpec rng{g.seed, i};
    const std::string stem = f.process + "_" + std::to_string(i);
    if (const auto* rb = std::get_if<mscale::RBergomiParams>(&params)) {
      const auto path = mscale::simulate_rbergomi(*rb, rng);
      mscale::write_series_csv(dir / (stem + ".csv"), path.log_price.values, "log_price");
      mscale::write_series_csv(dir / (stem + "_variance.csv"), path.variance, "variance");
      files.push_back((dir / (stem + ".csv")).string());
      files.push_back((dir / (stem + "_variance.csv")).string());
    } else {
      const auto path = mscale::simulate(params, rng);
      mscale::write_series_csv(dir / (stem + ".csv"), path.values, "value");
      files.push_back((dir / (stem + ".csv")).string());
    }
  }
  print({{"command", "simulate"}, {"params", mscale::params_to_json(params)}, {"seed", g.seed}, {"files", files}});
  return 0;
}

mscale::TuningOptions tuning_from(double safety, double threshold, double q_step, const std::vector<int>& taus) {
  mscale::TuningOptions t;
  t.safety = safety;
  t.threshold = threshold;
  t.q_step = q_step;
  t.tau_candidates = taus;
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscaling detection and source attribution"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base RNG seed")->each([&](const std::string&) { g.seed_set = true; });
  app.add_option("--workers", g.workers, "Worker threads (0 = all cores)")
      ->each([&](const std::string&) { g.workers_set = true; });
  app.add_option("--out", g.out, "Output directory")->each([&](const std::string&) { g.out_set = true; });

  ProcessFlags pf;
  auto* sim = app.add_subcommand("simulate", "Write simulated paths as CSV");
  sim->add_option("--process", pf.process, "fbm | rbergomi | mrw | flsm")->capture_default_str();
  sim->add_option("--n", pf.n, "Path length")->capture_default_str();
  sim->add_option("--count", pf.count, "Number of paths")->capture_default_str();
  sim->add_option("--hurst", pf.hurst);
  sim->add_option("--xi0", pf.xi0);
  sim->add_option("--eta", pf.eta);
  sim->add_option("--rho", pf.rho);
  sim->add_option("--dt", pf.dt);
  sim->add_option("--lambda", pf.lambda);
  sim->add_option("--alpha", pf.alpha);
  sim->add_option("--scale", pf.scale, "fBm increment sd, MRW sigma");
  sim->add_option("--large-scale", pf.large_scale);
  sim->add_option("--kernel-cutoff", pf.kernel_cutoff);

  std::string input;
  double safety = 0.8, threshold = 0.98, q_step = 0.1;
  std::vector<int> tau_candidates;
  std::vector<double> qs_override;
  int tau_max_override = 0;
  auto* analyze = app.add_subcommand("analyze", "GHE and tuning for a series file");
  analyze->add_option("--input", input, "Single-column CSV of levels")->required();
  analyze->add_option("--safety", safety)->capture_default_str();
  analyze->add_option("--threshold", threshold)->capture_default_str();
  analyze->add_option("--q-step", q_step)->capture_default_str();
  analyze->add_option("--tau-candidates", tau_candidates)->delimiter(',');
  analyze->add_option("--qs", qs_override, "Fixed moment grid (skips tuning of q)")->delimiter(',');
  analyze->add_option("--tau-max", tau_max_override, "Fixed scale range (skips tuning of tau)");

  std::size_t I = 1000, J = 1000;
  double alpha_level = 0.05;
  bool keep_b = false;
  auto* test = app.add_subcommand("test", "Two-stage multiscaling test for a series file");
  test->add_option("--input", input, "Single-column CSV of levels")->required();
  test->add_option("--I", I, "Matched fBm surrogates")->capture_default_str();
  test->add_option("--J", J, "Shuffled surrogates")->capture_default_str();
  test->add_option("--alpha", alpha_level, "Test level")->capture_default_str();
  test->add_option("--safety", safety)->capture_default_str();
  test->add_option("--threshold", threshold)->capture_default_str();
  test->add_option("--q-step", q_step)->capture_default_str();
  test->add_option("--tau-candidates", tau_candidates)->delimiter(',');
  test->add_flag("--keep-b", keep_b, "Include surrogate B values");

  std::string config_path, preset_name;
  std::optional<std::size_t> n_sims, n_len, exp_I, exp_J;
  bool no_resume = false;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo study");
  auto* cfg_opt = experiment->add_option("--config", config_path, "Config file");
  experiment->add_option("--preset", preset_name, "Named preset")->excludes(cfg_opt);
  experiment->add_option("--n-sims", n_sims);
  experiment->add_option("--n", n_len);
  experiment->add_option("--I", exp_I);
  experiment->add_option("--J", exp_J);
  experiment->add_flag("--no-resume", no_resume);
  experiment->add_flag_callback("--list-presets", [] {
    print({{"presets", mscale::preset_names()}});
    std::exit(0);
  });

  std::string report_dir;
  auto* tables = app.add_subcommand("tables", "Format tables from an experiment directory");
  tables->add_option("--report", report_dir, "Experiment output directory (default: --out)");

  std::vector<double> fig_hursts{0.05, 0.1, 0.2};
  std::size_t fig_n = 4096;
  bool paths_only = false;
  auto* figures = app.add_subcommand("figures", "Write figure data as long-format CSV");
  figures->add_option("--report", report_dir, "Experiment output directory (default: --out)");
  figures->add_option("--hursts", fig_hursts, "H values of the path traces")->delimiter(',');
  figures->add_option("--n", fig_n, "Length of the path traces")->capture_default_str();
  figures->add_flag("--paths-only", paths_only, "Only the path traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  }

  try {
    if (*sim) return run_simulate(g, pf);

    if (*analyze) {
      const auto series = mscale::read_series_csv(input);
      const auto tuning = mscale::tune(series, tuning_from(safety, threshold, q_step, tau_candidates));
      const auto qs = qs_override.empty() ? tuning.qs : qs_override;
      const auto taus = tau_max_override > 0 ? mscale::tau_range(tau_max_override) : tuning.taus;
      const auto ghe = mscale::estimate_ghe(series.values, taus, qs);
      json j{{"ghe", ghe}, {"tuning", tuning}};
      if (g.out_set) write_json(fs::path(g.out) / "analyze.json", j);
      print(ghe);
      return 0;
    }

    if (*test) {
      const auto series = mscale::read_series_csv(input);
      mscale::TwoStageConfig cfg;
      cfg.fbm_surrogates = I;
      cfg.shuffle_surrogates = J;
      cfg.alpha_level = alpha_level;
      cfg.tuning = tuning_from(safety, threshold, q_step, tau_candidates);
      cfg.workers = g.workers;
      cfg.keep_surrogate_b = keep_b;
      const auto verdict = mscale::run_two_stage(series, cfg, mscale::RngSpec{g.seed, 0});
      json j = verdict;
      if (g.out_set) write_json(fs::path(g.out) / "verdict.json", j);
      print(j);
      return 0;
    }

    if (*experiment) {
      mscale::ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = mscale::load_config(config_path);
      } else if (!preset_name.empty()) {
        cfg = mscale::preset(preset_name);
      } else {
        throw mscale::InvalidArgument("experiment: one of --config or --preset is required");
      }
      if (g.seed_set) cfg.seed = g.seed;
      if (g.workers_set) cfg.workers = g.workers;
      if (g.out_set) cfg.out_dir = g.out;
      if (n_sims) cfg.n_sims = *n_sims;
      if (n_len) cfg.n = *n_len;
      if (exp_I) cfg.fbm_surrogates = *exp_I;
      if (exp_J) cfg.shuffle_surrogates = *exp_J;
      if (no_resume) cfg.resume = false;
      const auto report = mscale::run_experiment(cfg);
      json rows = json::array();
      for (const auto& r : report.rows) {
        rows.push_back({{"param", r.param},
                        {"sig_pct", r.sig_pct},
                        {"distributional_pct", r.distributional_pct},
                        {"temporal_pct", r.temporal_pct},
                        {"mean_B", r.mean_b},
                        {"sd_B", r.sd_b},
                        {"failed", r.failed}});
      }
      print({{"command", "experiment"},
             {"name", cfg.name},
             {"out", cfg.out_dir.string()},
             {"grid_param", cfg.grid_param},
             {"rows", rows}});
      return 0;
    }

    if (*tables) {
      const auto report = mscale::load_report(report_dir.empty() ? g.out : report_dir);
      json files = json::array();
      for (const auto& p : mscale::emit_tables(report, g.out)) files.push_back(p.string());
      print({{"command", "tables"}, {"files", files}});
      return 0;
    }

    if (*figures) {
      json files = json::array();
      if (!paths_only) {
        const auto report = mscale::load_report(report_dir.empty() ? g.out : report_dir);
        for (const auto& p : mscale::emit_figure_data(report, g.out)) files.push_back(p.string());
      }
      mscale::RBergomiParams base;
      base.n = fig_n;
      files.push_back(mscale::emit_path_figure(fig_hursts, base, g.seed, g.out).string());
      print({{"command", "figures"}, {"files", files}});
      return 0;
    }
  } catch (const mscale::Error& e) {
    std::cerr << json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
  return 0;
}
