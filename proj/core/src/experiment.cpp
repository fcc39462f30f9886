#include "mscale/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mscale/error.hpp"
#include "mscale/parallel.hpp"
#include "mscale/serialize.hpp"
#include "mscale/series_io.hpp"

namespace mscale {

using nlohmann::json;
namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && !text.empty(), "config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  require(v >= 0.0 && v == std::floor(v), "config: '" + key + "' expects a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidArgument("config: '" + key + "' expects true or false");
}

std::vector<double> to_list(const std::string& key, std::string text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') text.erase(0, 1);
  if (!text.empty() && text.back() == ']') text.pop_back();
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

template <typename T>
std::string render_list(const std::vector<T>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out + "]";
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  if (s == "-0.0" || s == "-0.0000") s.erase(0, 1);
  return s;
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  return {empirical_quantile(values, 0.25), empirical_quantile(values, 0.5), empirical_quantile(values, 0.75)};
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

// ---------------------------------------------------------------------------
// config

void ExperimentConfig::validate() const {
  require(!grid.empty(), "experiment: grid must not be empty");
  require(n_sims >= 1, "experiment: n_sims must be >= 1");
  require(n >= 2, "experiment: n must be >= 2");
  require(fbm_surrogates >= 1 && shuffle_surrogates >= 1, "experiment: surrogate counts must be >= 1");
  require(alpha_level > 0.0 && alpha_level < 1.0, "experiment: alpha_level must lie in (0, 1)");
  require(process != ProcessKind::shuffled && process != ProcessKind::external,
          "experiment: process must be fbm, rbergomi, mrw or flsm");
  for (std::size_t i = 0; i < grid.size(); ++i) std::visit([](const auto& p) {
      if constexpr (!std::is_same_v<std::decay_t<decltype(p)>, std::monostate>) p.validate();
    }, params_at(i));
}

ProcessParams ExperimentConfig::params_at(std::size_t grid_index) const {
  require(grid_index < grid.size(), "experiment: grid index out of range");
  const double value = grid[grid_index];
  const auto bad = [&] {
    return InvalidArgument("experiment: '" + grid_param + "' is not a parameter of " + std::string(to_string(process)));
  };
  switch (process) {
    case ProcessKind::fbm: {
      auto p = fbm;
      p.n = n;
      if (grid_param == "hurst") p.hurst = value;
      else if (grid_param == "scale") p.scale = value;
      else throw bad();
      return p;
    }
    case ProcessKind::rbergomi: {
      auto p = rbergomi;
      p.n = n;
      if (grid_param == "hurst") p.hurst = value;
      else if (grid_param == "eta") p.eta = value;
      else if (grid_param == "rho") p.rho = value;
      else if (grid_param == "xi0") p.xi0 = value;
      else if (grid_param == "dt") p.dt = value;
      else throw bad();
      return p;
    }
    case ProcessKind::mrw: {
      auto p = mrw;
      p.n = n;
      if (grid_param == "lambda") p.lambda = value;
      else if (grid_param == "sigma") p.sigma = value;
      else throw bad();
      return p;
    }
    case ProcessKind::flsm: {
      auto p = flsm;
      p.n = n;
      if (grid_param == "hurst") p.hurst = value;
      else if (grid_param == "alpha") p.alpha = value;
      else throw bad();
      return p;
    }
    default:
      throw bad();
  }
}

std::string ExperimentConfig::grid_label() const {
  if (grid_param == "hurst") return "H";
  return grid_param;
}

std::string ExperimentConfig::digest() const {
  auto copy = *this;
  copy.workers = 1;
  copy.out_dir = "out";
  copy.resume = true;
  const auto text = render_config(copy);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(std::string_view text) {
  std::string cleaned;
  {
    std::stringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      const auto t = trim(line);
      if (!t.empty() && t.front() == '#') continue;
      cleaned += line;
      cleaned += '\n';
    }
  }
  pt::ptree tree;
  try {
    std::stringstream in(cleaned);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }

  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw InvalidArgument("config: key '" + section + "' must appear inside a section");
    }
    for (const auto& [key_raw, node] : body) {
      const std::string key = section + "." + key_raw;
      const std::string v = trim(node.data());
      if (section == "experiment") {
        if (key_raw == "name") c.name = v;
        else if (key_raw == "process") c.process = parse_process_kind(v);
        else if (key_raw == "grid_param") c.grid_param = v;
        else if (key_raw == "grid") c.grid = to_list(key, v);
        else if (key_raw == "n_sims") c.n_sims = to_count(key, v);
        else if (key_raw == "n") c.n = to_count(key, v);
        else if (key_raw == "seed") c.seed = std::stoull(v);
        else if (key_raw == "workers") c.workers = static_cast<unsigned>(to_count(key, v));
        else if (key_raw == "out_dir") c.out_dir = v;
        else if (key_raw == "resume") c.resume = to_bool(key, v);
        else if (key_raw == "acf_lags") c.acf_lags = to_count(key, v);
        else throw InvalidArgument("config: unknown key '" + key + "'");
      } else if (section == "test") {
        if (key_raw == "I" || key_raw == "fbm_surrogates") c.fbm_surrogates = to_count(key, v);
        else if (key_raw == "J" || key_raw == "shuffle_surrogates") c.shuffle_surrogates = to_count(key, v);
        else if (key_raw == "alpha_level") c.alpha_level = to_double(key, v);
        else throw InvalidArgument("config: unknown key '" + key + "'");
      } else if (section == "tuning") {
        if (key_raw == "safety") c.tuning.safety = to_double(key, v);
        else if (key_raw == "threshold") c.tuning.threshold = to_double(key, v);
        else if (key_raw == "q_step") c.tuning.q_step = to_double(key, v);
        else if (key_raw == "refine_ml") c.tuning.tail.refine_ml = to_bool(key, v);
        else if (key_raw == "tau_candidates") {
          c.tuning.tau_candidates.clear();
          for (double t : to_list(key, v)) c.tuning.tau_candidates.push_back(static_cast<int>(t));
        } else throw InvalidArgument("config: unknown key '" + key + "'");
      } else if (section == "fbm") {
        if (key_raw == "hurst") c.fbm.hurst = to_double(key, v);
        else if (key_raw == "scale") c.fbm.scale = to_double(key, v);
        else throw InvalidArgument("config: unknown key '" + key + "'");
      } else if (section == "rbergomi") {
        if (key_raw == "hurst") c.rbergomi.hurst = to_double(key, v);
        else if (key_raw == "xi0") c.rbergomi.xi0 = to_double(key, v);
        else if (key_raw == "eta") c.rbergomi.eta = to_double(key, v);
        else if (key_raw == "rho") c.rbergomi.rho = to_double(key, v);
        else if (key_raw == "dt") c.rbergomi.dt = to_double(key, v);
        else throw InvalidArgument("config: unknown key '" + key + "'");
      } else if (section == "mrw") {
        if (key_raw == "lambda") c.mrw.lambda = to_double(key, v);
        else if (key_raw == "large_scale") c.mrw.large_scale = to_count(key, v);
        else if (key_raw == "sigma") c.mrw.sigma = to_double(key, v);
        else throw InvalidArgument("config: unknown key '" + key + "'");
      } else if (section == "flsm") {
        if (key_raw == "alpha") c.flsm.alpha = to_double(key, v);
        else if (key_raw == "hurst") c.flsm.hurst = to_double(key, v);
        else if (key_raw == "kernel_cutoff") c.flsm.kernel_cutoff = to_count(key, v);
        else throw InvalidArgument("config: unknown key '" + key + "'");
      } else {
        throw InvalidArgument("config: unknown section '" + section + "'");
      }
    }
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[experiment]\n"
    << "name = " << c.name << "\n"
    << "process = " << to_string(c.process) << "\n"
    << "grid_param = " << c.grid_param << "\n"
    << "grid = " << render_list(c.grid) << "\n"
    << "n_sims = " << c.n_sims << "\n"
    << "n = " << c.n << "\n"
    << "seed = " << c.seed << "\n"
    << "workers = " << c.workers << "\n"
    << "out_dir = " << c.out_dir.string() << "\n"
    << "resume = " << (c.resume ? "true" : "false") << "\n"
    << "acf_lags = " << c.acf_lags << "\n\n"
    << "[test]\n"
    << "I = " << c.fbm_surrogates << "\n"
    << "J = " << c.shuffle_surrogates << "\n"
    << "alpha_level = " << format_double(c.alpha_level) << "\n\n"
    << "[tuning]\n"
    << "safety = " << format_double(c.tuning.safety) << "\n"
    << "threshold = " << format_double(c.tuning.threshold) << "\n"
    << "q_step = " << format_double(c.tuning.q_step) << "\n"
    << "tau_candidates = " << render_list(c.tuning.tau_candidates) << "\n"
    << "refine_ml = " << (c.tuning.tail.refine_ml ? "true" : "false") << "\n\n"
    << "[fbm]\n"
    << "hurst = " << format_double(c.fbm.hurst) << "\n"
    << "scale = " << format_double(c.fbm.scale) << "\n\n"
    << "[rbergomi]\n"
    << "hurst = " << format_double(c.rbergomi.hurst) << "\n"
    << "xi0 = " << format_double(c.rbergomi.xi0) << "\n"
    << "eta = " << format_double(c.rbergomi.eta) << "\n"
    << "rho = " << format_double(c.rbergomi.rho) << "\n"
    << "dt = " << format_double(c.rbergomi.dt) << "\n\n"
    << "[mrw]\n"
    << "lambda = " << format_double(c.mrw.lambda) << "\n"
    << "large_scale = " << c.mrw.large_scale << "\n"
    << "sigma = " << format_double(c.mrw.sigma) << "\n\n"
    << "[flsm]\n"
    << "alpha = " << format_double(c.flsm.alpha) << "\n"
    << "hurst = " << format_double(c.flsm.hurst) << "\n"
    << "kernel_cutoff = " << c.flsm.kernel_cutoff << "\n";
  return o.str();
}

std::vector<std::string> preset_names() {
  return {"rbergomi_very_rough", "rbergomi_moderate", "rbergomi_intro", "mrw", "flsm", "fbm_null"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  if (name == "rbergomi_very_rough") {
    c.grid = {0.001, 0.005, 0.01};
  } else if (name == "rbergomi_moderate") {
    c.grid = {0.05, 0.1, 0.2};
  } else if (name == "rbergomi_intro") {
    c.grid = {0.05, 0.1, 0.2, 0.3};
  } else if (name == "mrw") {
    c.process = ProcessKind::mrw;
    c.grid_param = "lambda";
    c.grid = {0.05, 0.15, 0.25};
  } else if (name == "flsm") {
    c.process = ProcessKind::flsm;
    c.flsm.alpha = 1.9;
    c.grid = {0.1, 0.5, 0.9};
  } else if (name == "fbm_null") {
    c.process = ProcessKind::fbm;
    c.grid = {0.3, 0.5, 0.7};
  } else {
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------
// records

json record_to_json(const SimulationRecord& r, std::string_view digest) {
  json j{{"digest", digest},     {"grid_index", r.grid_index}, {"sim_index", r.sim_index}, {"param", r.param},
         {"rng", r.rng},         {"ok", r.ok}};
  if (r.ok) {
    j["b"] = r.b;
    j["classification"] = to_string(r.classification);
    j["diagnostics"] = r.diagnostics;
    j["verdict"] = r.verdict;
  } else {
    j["error"] = r.error;
  }
  return j;
}

SimulationRecord record_from_json(const json& j) {
  SimulationRecord r;
  j.at("grid_index").get_to(r.grid_index);
  j.at("sim_index").get_to(r.sim_index);
  j.at("param").get_to(r.param);
  j.at("rng").get_to(r.rng);
  j.at("ok").get_to(r.ok);
  if (r.ok) {
    j.at("b").get_to(r.b);
    r.classification = parse_classification(j.at("classification").get<std::string>());
    j.at("diagnostics").get_to(r.diagnostics);
    if (j.contains("verdict")) r.verdict = j.at("verdict");
  } else {
    r.error = j.value("error", std::string{});
  }
  return r;
}

// ---------------------------------------------------------------------------
// running

RngSpec simulation_rng(std::uint64_t base_seed, std::size_t grid, std::size_t sim) {
  return RngSpec{mix_seed({base_seed, static_cast<std::uint64_t>(grid), static_cast<std::uint64_t>(sim)}), 0};
}

SimulationRecord run_simulation(const ExperimentConfig& config, std::size_t grid_index, std::size_t sim_index) {
  SimulationRecord r;
  r.grid_index = grid_index;
  r.sim_index = sim_index;
  r.param = config.grid.at(grid_index);
  r.rng = simulation_rng(config.seed, grid_index, sim_index);
  try {
    const auto path = simulate(config.params_at(grid_index), r.rng);
    TwoStageConfig test;
    test.fbm_surrogates = config.fbm_surrogates;
    test.shuffle_surrogates = config.shuffle_surrogates;
    test.alpha_level = config.alpha_level;
    test.tuning = config.tuning;
    test.workers = 1;
    const auto verdict = run_two_stage(path, test, r.rng);
    const auto returns = path.increments();
    r.diagnostics = diagnostics(returns, config.acf_lags);
    r.b = verdict.b_original;
    r.classification = verdict.classification;
    r.verdict = verdict;
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

std::vector<GridSummary> aggregate(const ExperimentConfig& config, std::vector<SimulationRecord>& records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.grid_index, a.sim_index) < std::tie(b.grid_index, b.sim_index);
  });
  std::vector<GridSummary> rows(config.grid.size());
  std::vector<std::vector<double>> bs(rows.size()), kurt(rows.size()), vc(rows.size());
  for (std::size_t g = 0; g < rows.size(); ++g) {
    rows[g].grid_index = g;
    rows[g].param = config.grid[g];
  }
  for (const auto& r : records) {
    if (r.grid_index >= rows.size()) continue;
    auto& row = rows[r.grid_index];
    ++row.n_sims;
    if (!r.ok) {
      ++row.failed;
      continue;
    }
    ++row.completed;
    bs[r.grid_index].push_back(r.b);
    kurt[r.grid_index].push_back(r.diagnostics.kurtosis);
    vc[r.grid_index].push_back(r.diagnostics.vol_clustering);
    switch (r.classification) {
      case Classification::not_multiscaling: break;
      case Classification::distributional:
        ++row.rejections;
        ++row.distributional;
        break;
      case Classification::temporal_enhancing:
        ++row.rejections;
        ++row.temporal;
        ++row.temporal_enhancing;
        break;
      case Classification::temporal_reducing:
        ++row.rejections;
        ++row.temporal;
        break;
    }
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    auto& row = rows[g];
    if (row.completed > 0) row.sig_pct = 100.0 * static_cast<double>(row.rejections) / static_cast<double>(row.completed);
    if (row.rejections > 0) {
      row.distributional_pct = 100.0 * static_cast<double>(row.distributional) / static_cast<double>(row.rejections);
      row.temporal_pct = 100.0 * static_cast<double>(row.temporal) / static_cast<double>(row.rejections);
    }
    const auto& b = bs[g];
    if (!b.empty()) {
      row.mean_b = compensated_sum(b) / static_cast<double>(b.size());
      if (b.size() > 1) {
        std::vector<double> sq(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) sq[i] = (b[i] - row.mean_b) * (b[i] - row.mean_b);
        row.sd_b = std::sqrt(compensated_sum(sq) / static_cast<double>(b.size() - 1));
      }
    }
    row.kurtosis = quartiles(kurt[g]);
    row.vol_clustering = quartiles(vc[g]);
  }
  return rows;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto digest = config.digest();
  const fs::path dir = config.out_dir;
  fs::create_directories(dir);
  const fs::path records_path = dir / "records.jsonl";

  std::vector<SimulationRecord> done;
  std::set<std::pair<std::size_t, std::size_t>> finished;
  std::string kept;
  if (config.resume && fs::exists(records_path)) {
    for (const auto& line : read_lines(records_path)) {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || j.value("digest", std::string{}) != digest) continue;
      try {
        auto r = record_from_json(j);
        if (r.grid_index >= config.grid.size() || r.sim_index >= config.n_sims) continue;
        if (!finished.emplace(r.grid_index, r.sim_index).second) continue;
        done.push_back(std::move(r));
        kept += line;
        kept += '\n';
      } catch (const std::exception&) {
      }
    }
  }
  write_file_atomic(records_path, kept);

  json meta{{"name", config.name}, {"digest", digest}, {"config", render_config(config)}};
  write_file_atomic(dir / "metadata.json", meta.dump(2) + "\n");
  write_file_atomic(dir / "config.toml", render_config(config));

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    for (std::size_t s = 0; s < config.n_sims; ++s) {
      if (!finished.count({g, s})) jobs.emplace_back(g, s);
    }
  }

  std::ofstream out(records_path, std::ios::app);
  if (!out) throw IoError("cannot append to '" + records_path.string() + "'");
  std::mutex writer;
  std::vector<SimulationRecord> fresh(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
    auto r = run_simulation(config, jobs[i].first, jobs[i].second);
    const auto line = record_to_json(r, digest).dump();
    {
      std::lock_guard lock(writer);
      out << line << '\n';
      out.flush();
    }
    fresh[i] = std::move(r);
  });
  out.close();

  ExperimentReport report;
  report.config = config;
  report.records = std::move(done);
  for (auto& r : fresh) report.records.push_back(std::move(r));
  report.rows = aggregate(config, report.records);

  for (const auto& row : report.rows) {
    if (static_cast<double>(row.failed) > 0.05 * static_cast<double>(config.n_sims)) {
      std::string first;
      for (const auto& r : report.records) {
        if (r.grid_index == row.grid_index && !r.ok) {
          first = r.error;
          break;
        }
      }
      throw NumericalError("grid point " + std::to_string(row.grid_index) + " (" + config.grid_param + "=" +
                           format_double(row.param) + ") failed " + std::to_string(row.failed) + " of " +
                           std::to_string(config.n_sims) + " simulations; first error: " + first);
    }
  }
  write_file_atomic(dir / "report.csv", report_csv(report));
  return report;
}

ExperimentReport load_report(const fs::path& dir) {
  const auto meta_path = dir / "metadata.json";
  std::ifstream in(meta_path);
  if (!in) throw IoError("no experiment metadata in '" + dir.string() + "'");
  json meta;
  try {
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("bad metadata '" + meta_path.string() + "': " + e.what());
  }
  ExperimentReport report;
  report.config = parse_config(meta.at("config").get<std::string>());
  const auto digest = meta.at("digest").get<std::string>();
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& line : read_lines(dir / "records.jsonl")) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("digest", std::string{}) != digest) continue;
    auto r = record_from_json(j);
    if (seen.emplace(r.grid_index, r.sim_index).second) report.records.push_back(std::move(r));
  }
  report.rows = aggregate(report.config, report.records);
  return report;
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream o;
  o << "grid_index,grid_param,param,n_sims,completed,failed,rejections,distributional,temporal,temporal_enhancing,"
       "sig_pct,distributional_pct,temporal_pct,mean_B,sd_B,kurtosis_q1,kurtosis_median,kurtosis_q3,"
       "vol_clustering_q1,vol_clustering_median,vol_clustering_q3\n";
  for (const auto& r : report.rows) {
    o << r.grid_index << ',' << report.config.grid_param << ',' << format_double(r.param) << ',' << r.n_sims << ','
      << r.completed << ',' << r.failed << ',' << r.rejections << ',' << r.distributional << ',' << r.temporal << ','
      << r.temporal_enhancing << ',' << format_double(r.sig_pct) << ',' << format_double(r.distributional_pct) << ','
      << format_double(r.temporal_pct) << ',' << format_double(r.mean_b) << ',' << format_double(r.sd_b) << ','
      << format_double(r.kurtosis.q1) << ',' << format_double(r.kurtosis.median) << ','
      << format_double(r.kurtosis.q3) << ',' << format_double(r.vol_clustering.q1) << ','
      << format_double(r.vol_clustering.median) << ',' << format_double(r.vol_clustering.q3) << '\n';
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// tables and figures

std::vector<fs::path> emit_tables(const ExperimentReport& report, const fs::path& out_dir) {
  if (report.rows.empty() || report.records.empty()) throw InvalidArgument("emit_tables: report is empty");
  const std::vector<std::string> header{report.config.grid_label(), "Sig", "Distributional", "Temporal", "Mean B",
                                        "SD(B)"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : report.rows) {
    cells.push_back({format_double(r.param), fixed(r.sig_pct, 1), fixed(r.distributional_pct, 1),
                     fixed(r.temporal_pct, 1), fixed(r.mean_b, 4), fixed(r.sd_b, 4)});
  }

  std::string csv;
  for (std::size_t c = 0; c < header.size(); ++c) csv += (c ? "," : "") + header[c];
  csv += '\n';
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) csv += (c ? "," : "") + row[c];
    csv += '\n';
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  const auto line = [&](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += "  ";
      s += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    return s + "\n";
  };
  std::string txt = line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  txt += std::string(total + 2 * (width.size() - 1), '-') + "\n";
  for (const auto& row : cells) txt += line(row);

  const fs::path base = out_dir / "tables" / report.config.name;
  auto csv_path = base;
  csv_path += ".csv";
  auto txt_path = base;
  txt_path += ".txt";
  write_file_atomic(csv_path, csv);
  write_file_atomic(txt_path, txt);
  return {csv_path, txt_path};
}

std::vector<fs::path> emit_figure_data(const ExperimentReport& report, const fs::path& out_dir) {
  if (report.records.empty()) throw InvalidArgument("emit_figure_data: report is empty");
  const std::string label = report.config.grid_label();
  const std::pair<const char*, double (*)(const SimulationRecord&)> stats[] = {
      {"B", [](const SimulationRecord& r) { return r.b; }},
      {"kurtosis", [](const SimulationRecord& r) { return r.diagnostics.kurtosis; }},
      {"vol_clustering", [](const SimulationRecord& r) { return r.diagnostics.vol_clustering; }},
  };
  std::vector<fs::path> written;
  for (const auto& [name, get] : stats) {
    std::string csv = "grid_point,sim,statistic,value\n";
    for (const auto& r : report.records) {
      if (!r.ok) continue;
      csv += format_double(r.param) + "," + std::to_string(r.sim_index) + "," + name + "," + format_double(get(r)) +
             "\n";
    }
    const auto path = out_dir / "figures" / (report.config.name + "_" + name + ".csv");
    write_file_atomic(path, csv);
    written.push_back(path);
  }
  return written;
}

fs::path emit_path_figure(std::span<const double> hursts, const RBergomiParams& base, std::uint64_t seed,
                          const fs::path& out_dir) {
  if (hursts.empty()) throw InvalidArgument("emit_path_figure: no H values");
  std::string csv = "hurst,t,statistic,value\n";
  for (std::size_t i = 0; i < hursts.size(); ++i) {
    auto p = base;
    p.hurst = hursts[i];
    const auto path = simulate_rbergomi(p, RngSpec{mix_seed({seed, 0xF1ULL, i}), 0});
    const auto& s = path.log_price.values;
    const std::string h = format_double(hursts[i]);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::string t = format_double(static_cast<double>(k) * p.dt);
      csv += h + "," + t + ",price," + format_double(std::exp(s[k])) + "\n";
      if (k > 0) csv += h + "," + t + ",returns," + format_double(std::exp(s[k]) - std::exp(s[k - 1])) + "\n";
      csv += h + "," + t + ",vol," + format_double(std::sqrt(path.variance[k])) + "\n";
    }
  }
  const auto out = out_dir / "figures" / "paths.csv";
  write_file_atomic(out, csv);
  return out;
}

}  // namespace mscale
