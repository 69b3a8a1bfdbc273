#pragma once

// JSON encodings of library results. Documents produced for output carry a
// top-level schema_version.

#include <json.hpp>

#include "ccauction/experiments.hpp"
#include "ccauction/fixed_point.hpp"
#include "ccauction/verification.hpp"

namespace ccauction {

inline constexpr int kSchemaVersion = 1;

namespace cf {
void to_json(nlohmann::json& j, const BoundReport& r);
void to_json(nlohmann::json& j, const KfaForms& f);
}  // namespace cf

void to_json(nlohmann::json& j, const Seed& s);
void from_json(const nlohmann::json& j, Seed& s);
void to_json(nlohmann::json& j, const InterimRates& r);
void from_json(const nlohmann::json& j, InterimRates& r);
void to_json(nlohmann::json& j, const FixedPointSolution& s);
void from_json(const nlohmann::json& j, FixedPointSolution& s);
void to_json(nlohmann::json& j, const RevenueEstimate& e);
void to_json(nlohmann::json& j, const FeasibilityReport& r);
void to_json(nlohmann::json& j, const ValidationReport& r);
void to_json(nlohmann::json& j, const MenuBicReport& r);
void to_json(nlohmann::json& j, const DeviationWitness& w);
void to_json(nlohmann::json& j, const KfBicReport& r);
void to_json(nlohmann::json& j, const SweepRow& r);
void to_json(nlohmann::json& j, const OlsFit& f);
void to_json(nlohmann::json& j, const GrandBundleRow& r);
void to_json(nlohmann::json& j, const KfaStudy& s);

}  // namespace ccauction
