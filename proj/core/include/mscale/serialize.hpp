#pragma once

#include <nlohmann/json.hpp>

#include "mscale/descriptives.hpp"
#include "mscale/ghe.hpp"
#include "mscale/hypothesis.hpp"
#include "mscale/processes.hpp"
#include "mscale/rng.hpp"
#include "mscale/tuning.hpp"

// JSON encodings with stable field names. Doubles are written by
// nlohmann::json in shortest round-trip form.
namespace mscale {

void to_json(nlohmann::json& j, const RngSpec& v);
void from_json(const nlohmann::json& j, RngSpec& v);

void to_json(nlohmann::json& j, const HqEstimate& v);
void from_json(const nlohmann::json& j, HqEstimate& v);

/// {"curve": [{q, hq, hq_se, r2}...], "A", "B", "B_se", "taus", "qs"}
void to_json(nlohmann::json& j, const GheResult& v);
void from_json(const nlohmann::json& j, GheResult& v);

void to_json(nlohmann::json& j, const TuningResult& v);
void from_json(const nlohmann::json& j, TuningResult& v);

void to_json(nlohmann::json& j, const Stage1Result& v);
void from_json(const nlohmann::json& j, Stage1Result& v);
void to_json(nlohmann::json& j, const Stage2Result& v);
void from_json(const nlohmann::json& j, Stage2Result& v);

void to_json(nlohmann::json& j, const TestVerdict& v);

void to_json(nlohmann::json& j, const DiagnosticsRecord& v);
void from_json(const nlohmann::json& j, DiagnosticsRecord& v);

/// {"kind": ..., plus the parameter fields}
nlohmann::json params_to_json(const ProcessParams& params);

}  // namespace mscale
