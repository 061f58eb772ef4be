#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/core/types.hpp"
#include "factcheck/eval/metrics.hpp"
#include "factcheck/providers/providers.hpp"

namespace factcheck::eval {

/// One annotated text. Labels are per segmented sentence, 1 = contains a
/// factual error. JSON: {"id","text","gold_sentence_labels","subset"?}.
struct EvalRecord {
  std::string id;
  std::string text;
  std::vector<int> gold_sentence_labels;
  std::string subset;  // empty means ungrouped

  bool operator==(const EvalRecord&) const = default;
};

EvalRecord record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalRecord& r);

/// JSON lines, blank lines ignored. Throws DomainError on a malformed line
/// or when the file holds no records.
std::vector<EvalRecord> load_dataset(const std::filesystem::path& path);

/// One configuration of a sweep.
struct SweepPoint {
  std::vector<std::pair<std::string, std::string>> settings;  // in sweep key order
  PipelineConfig config;

  std::string label() const;
};

/// "evidences=1,3 context=15,30" -> the cartesian grid, first key varying
/// slowest. Keys: evidences (top_n_results), passages (top_k_passages),
/// context (context_window_m), retrieval (dense|sparse), threshold,
/// irrelevant (count_irrelevant_in_total: true|false), profile. An empty
/// spec yields the base config alone. Throws DomainError on bad input.
std::vector<SweepPoint> parse_sweep(std::string_view spec, const PipelineConfig& base);

struct SkippedRecord {
  std::string id;
  std::string reason;
};

struct EvalRow {
  SweepPoint point;
  std::map<std::string, BinaryMetrics> subsets;  // always has "all"
  int records_scored = 0;
  std::vector<SkippedRecord> skipped;
};

struct EvalOptions {
  int parallel = 1;  // records evaluated concurrently
};

/// Sentence prediction: 1 when the sentence is classified not_factual, 0
/// otherwise (including sentences without a score).
std::vector<int> predict_sentences(const CredibilityReport& report);

/// Runs every record through the pipeline under `point.config` and pools
/// sentence predictions per subset. Records whose label count differs from
/// the segmenter's sentence count are skipped with a warning. Provider
/// errors (including replay misses) propagate.
EvalRow evaluate(const std::vector<EvalRecord>& records, const SweepPoint& point,
                 Providers& providers, const EvalOptions& options = {});

std::vector<EvalRow> run_eval(const std::vector<EvalRecord>& records,
                              const std::vector<SweepPoint>& points, Providers& providers,
                              const EvalOptions& options = {});

/// {"schema_version":1,"rows":[{"label","settings","config","records_scored",
///  "skipped","subsets":{name: metrics}}]}
nlohmann::json metrics_json(const std::vector<EvalRow>& rows);

/// Fixed-width table, one line per (row, subset).
std::string format_table(const std::vector<EvalRow>& rows);

}  // namespace factcheck::eval
