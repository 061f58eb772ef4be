#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/providers/backend.hpp"

namespace factcheck {

/// Simulated providers driven by a scenario file. Used offline to author
/// replay fixtures: run the pipeline in record mode against a scenario and
/// the gateway writes every exchange to the fixture file.
///
/// Scenario file (JSON object, all keys optional):
///   extends     path of a parent scenario, merged underneath this one
///   claims      { sentence text: [claim...] | null | raw string | {"first","retry"} }
///               null means the sentence has no factual claims
///   search      [ {"query": exact} | {"match": [keyword...]}, "results": [...] ]
///   pages       { url: {"status": int, "file": path | "html": text | "error": "transport"|"timeout"} }
///   categories  { hostname: raw model answer }   (unlisted hosts answer "etc")
///   verdicts    [ {"claim": [kw...], "evidence": [kw...], "verdict": "yes"|"no"|null,
///                  "rationale": text} ]          (first match wins)
///   default_verdict  same shape without the keyword lists
/// Keywords match case-insensitively as substrings. Relative "file" paths
/// resolve against the scenario's directory.
class ScenarioBackend final : public Backend {
 public:
  explicit ScenarioBackend(nlohmann::json scenario,
                           std::filesystem::path base_dir = std::filesystem::current_path());
  static std::shared_ptr<ScenarioBackend> load(const std::filesystem::path& path);

  nlohmann::json execute(const ProviderRequest& request) override;

  /// Deterministic 8-dimensional hashed bag-of-words vector (not normalized).
  static std::vector<double> hashed_embedding(const std::string& text);

 private:
  nlohmann::json chat(const nlohmann::json& payload) const;
  nlohmann::json search(const nlohmann::json& payload) const;
  nlohmann::json fetch(const nlohmann::json& payload) const;
  std::string claim_answer(const nlohmann::json& messages) const;
  std::string judge_answer(const std::string& prompt) const;
  std::string category_answer(const std::string& prompt) const;

  nlohmann::json scenario_;
  std::filesystem::path base_dir_;
};

}  // namespace factcheck
