#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/core/types.hpp"

namespace factcheck {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const PipelineConfig& config);

/// Reads a config object. Missing fields keep their defaults; unknown fields
/// and wrongly typed values raise ConfigError. The result is validated.
PipelineConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScoreBreakdown& scores);
ScoreBreakdown breakdown_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CredibilityReport& report);
CredibilityReport report_from_json(const nlohmann::json& j);

/// Sorts evidence by (claim order, rank) and judgments by (claim order,
/// evidence order). Claim order is the order claims appear in the sentences.
void canonicalize(CredibilityReport& report);

/// Canonical bytes of a report: canonical JSON plus a trailing newline.
std::string canonical_serialize(const CredibilityReport& report);
CredibilityReport deserialize_report(std::string_view bytes);

/// Referential integrity and structural invariants. Returns one message per
/// violation; an empty result means the report is valid.
std::vector<std::string> validate_report(const CredibilityReport& report);

}  // namespace factcheck
