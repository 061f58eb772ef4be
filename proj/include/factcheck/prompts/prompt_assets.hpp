#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace factcheck::prompts {

// Names of the bundled templates (file stems under prompts/).
inline constexpr std::string_view kClaimGeneration = "claim_generation";
inline constexpr std::string_view kClaimGenerationRetry = "claim_generation_retry";
inline constexpr std::string_view kJudgeFactuality = "judge_factuality";
inline constexpr std::string_view kCategorizeSource = "categorize_source";

/// Template text compiled from prompts/<name>.txt. Throws DomainError for an
/// unknown name.
const std::string& asset(std::string_view name);
std::vector<std::string> asset_names();

/// Substitutes every `{{key}}` in one pass; substituted values are never
/// rescanned. A placeholder without a value throws DomainError.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values);

}  // namespace factcheck::prompts
