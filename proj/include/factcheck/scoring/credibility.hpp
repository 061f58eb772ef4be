#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/core/types.hpp"

namespace factcheck::scoring {

/// Evidence the user switched off. An item is included iff neither its id
/// nor its category is excluded.
struct SelectionMask {
  std::set<std::string> excluded_evidence_ids;
  std::set<SourceCategory> excluded_categories;

  bool empty() const { return excluded_evidence_ids.empty() && excluded_categories.empty(); }
  bool includes(const EvidencePassage& evidence) const;

  bool operator==(const SelectionMask&) const = default;
};

/// {"excluded_evidence_ids": [...], "excluded_categories": [...]}; both keys
/// optional. Unknown keys, wrong types or unknown category names throw
/// ConfigError.
SelectionMask mask_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SelectionMask& mask);

struct SentenceScore {
  std::optional<Fraction> score;  // absent when total is 0
  SentenceCounts counts;
};

/// Pools the given (already selected) judgments of one sentence. Irrelevant
/// verdicts count toward the total only when `count_irrelevant_in_total`.
SentenceScore score_sentence(const std::vector<Judgment>& judgments,
                             bool count_irrelevant_in_total);

/// Mean of the present sentence scores, absent when there are none.
std::optional<Fraction> score_document(const std::map<int, Fraction>& sentence_scores);

/// Sum of support over sum of total across sentences with total > 0.
std::optional<Fraction> pooled_score(const std::map<int, SentenceCounts>& counts);

/// not_factual iff score < threshold.
Classification classify_sentence(const Fraction& score, const Fraction& threshold);

/// Scores of `report` under `mask`, from stored judgments only. Sentences
/// that were verified but keep no counted judgment become unverified.
/// Mask entries must name evidence present in the report (UnknownEvidenceId).
ScoreBreakdown apply_selection(const CredibilityReport& report, const SelectionMask& mask);

/// apply_selection without the mask id check, for assembling new reports.
ScoreBreakdown compute_breakdown(const CredibilityReport& report, const SelectionMask& mask = {});

}  // namespace factcheck::scoring
