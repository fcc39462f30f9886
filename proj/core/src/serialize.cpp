#include "mscale/serialize.hpp"

namespace mscale {

using nlohmann::json;

void to_json(json& j, const RngSpec& v) { j = json{{"seed", v.seed}, {"stream_id", v.stream_id}}; }
void from_json(const json& j, RngSpec& v) {
  j.at("seed").get_to(v.seed);
  j.at("stream_id").get_to(v.stream_id);
}

void to_json(json& j, const HqEstimate& v) {
  j = json{{"q", v.q}, {"hq", v.hq}, {"hq_se", v.hq_se}, {"r2", v.r2}};
}
void from_json(const json& j, HqEstimate& v) {
  j.at("q").get_to(v.q);
  j.at("hq").get_to(v.hq);
  j.at("hq_se").get_to(v.hq_se);
  j.at("r2").get_to(v.r2);
}

void to_json(json& j, const GheResult& v) {
  j = json{{"curve", v.curve}, {"taus", v.taus}, {"qs", v.qs}};
  if (v.fit) {
    j["A"] = v.fit->A;
    j["B"] = v.fit->B;
    j["B_se"] = v.fit->B_se;
  } else {
    j["A"] = nullptr;
    j["B"] = nullptr;
    j["B_se"] = nullptr;
  }
}
void from_json(const json& j, GheResult& v) {
  j.at("curve").get_to(v.curve);
  j.at("taus").get_to(v.taus);
  j.at("qs").get_to(v.qs);
  if (j.contains("B") && !j.at("B").is_null()) {
    v.fit = MultiscalingFit{j.at("A").get<double>(), j.at("B").get<double>(), j.at("B_se").get<double>()};
  } else {
    v.fit.reset();
  }
}

void to_json(json& j, const TuningResult& v) {
  json candidates = json::array();
  for (const auto& [tau, r2] : v.tau_candidates) candidates.push_back({{"tau_max", tau}, {"r2_min", r2}});
  j = json{{"alpha_stable", v.alpha_stable},
           {"alpha_safe", v.alpha_safe},
           {"safety", v.safety},
           {"q_max", v.q_max},
           {"qs", v.qs},
           {"tau_max", v.tau_max},
           {"tau_candidates", candidates},
           {"threshold", v.threshold},
           {"below_threshold", v.below_threshold},
           {"tail_small_sample", v.tail_small_sample},
           {"q1_inserted", v.q1_inserted}};
}
void from_json(const json& j, TuningResult& v) {
  j.at("alpha_stable").get_to(v.alpha_stable);
  j.at("alpha_safe").get_to(v.alpha_safe);
  j.at("safety").get_to(v.safety);
  j.at("q_max").get_to(v.q_max);
  j.at("qs").get_to(v.qs);
  j.at("tau_max").get_to(v.tau_max);
  v.taus = tau_range(v.tau_max);
  v.tau_candidates.clear();
  for (const auto& c : j.at("tau_candidates")) {
    v.tau_candidates.emplace_back(c.at("tau_max").get<int>(), c.at("r2_min").get<double>());
  }
  j.at("threshold").get_to(v.threshold);
  j.at("below_threshold").get_to(v.below_threshold);
  j.at("tail_small_sample").get_to(v.tail_small_sample);
  j.at("q1_inserted").get_to(v.q1_inserted);
}

void to_json(json& j, const Stage1Result& v) {
  j = json{{"p_presence", v.p_presence}, {"I", v.count}, {"reject", v.reject}};
}
void from_json(const json& j, Stage1Result& v) {
  j.at("p_presence").get_to(v.p_presence);
  j.at("I").get_to(v.count);
  j.at("reject").get_to(v.reject);
}

void to_json(json& j, const Stage2Result& v) {
  j = json{{"p_source", v.p_source}, {"J", v.count},         {"median_b", v.median},
           {"d_orig", v.d_orig},     {"reject", v.reject}, {"direction", to_string(v.direction)}};
}
void from_json(const json& j, Stage2Result& v) {
  j.at("p_source").get_to(v.p_source);
  j.at("J").get_to(v.count);
  j.at("median_b").get_to(v.median);
  j.at("d_orig").get_to(v.d_orig);
  j.at("reject").get_to(v.reject);
  v.direction = j.at("direction").get<std::string>() == "enhancing" ? Direction::enhancing : Direction::reducing;
}

void to_json(json& j, const TestVerdict& v) {
  j = json{{"b_original", v.b_original},
           {"h1", v.h1},
           {"h1_clamped", v.h1_clamped},
           {"stage1", v.stage1},
           {"stage2", v.stage2 ? json(*v.stage2) : json(nullptr)},
           {"classification", to_string(v.classification)},
           {"alpha_level", v.alpha_level},
           {"t_statistic", v.t_statistic},
           {"fbm_dropped", v.fbm_dropped},
           {"shuffle_dropped", v.shuffle_dropped},
           {"tuning", v.tuning},
           {"ghe", v.ghe},
           {"rng", v.rng}};
  if (!v.b_fbm.empty()) j["b_fbm"] = v.b_fbm;
  if (!v.b_shuf.empty()) j["b_shuf"] = v.b_shuf;
}

void to_json(json& j, const DiagnosticsRecord& v) {
  j = json{{"kurtosis", v.kurtosis}, {"acf_abs", v.acf_abs}, {"vol_clustering", v.vol_clustering}, {"n", v.n}};
}
void from_json(const json& j, DiagnosticsRecord& v) {
  j.at("kurtosis").get_to(v.kurtosis);
  j.at("acf_abs").get_to(v.acf_abs);
  j.at("vol_clustering").get_to(v.vol_clustering);
  j.at("n").get_to(v.n);
}

json params_to_json(const ProcessParams& params) {
  struct Visitor {
    json operator()(const std::monostate&) const { return json{{"kind", "external"}}; }
    json operator()(const FbmParams& p) const {
      return json{{"kind", "fbm"}, {"hurst", p.hurst}, {"n", p.n}, {"scale", p.scale}};
    }
    json operator()(const RBergomiParams& p) const {
      return json{{"kind", "rbergomi"}, {"hurst", p.hurst}, {"xi0", p.xi0}, {"eta", p.eta},
                  {"rho", p.rho},       {"n", p.n},         {"dt", p.dt}};
    }
    json operator()(const MrwParams& p) const {
      return json{{"kind", "mrw"}, {"lambda", p.lambda}, {"large_scale", p.effective_scale()},
                  {"sigma", p.sigma}, {"n", p.n}};
    }
    json operator()(const FlsmParams& p) const {
      return json{{"kind", "flsm"}, {"alpha", p.alpha}, {"hurst", p.hurst}, {"n", p.n},
                  {"kernel_cutoff", p.effective_cutoff()}};
    }
  };
  return std::visit(Visitor{}, params);
}

}  // namespace mscale
