#include "factcheck/scoring/credibility.hpp"

#include "factcheck/core/errors.hpp"

namespace factcheck::scoring {

using nlohmann::json;

bool SelectionMask::includes(const EvidencePassage& evidence) const {
  return !excluded_evidence_ids.count(evidence.id) && !excluded_categories.count(evidence.category);
}

SelectionMask mask_from_json(const json& j) {
  if (j.is_null()) return {};
  if (!j.is_object()) throw ConfigError("selection mask must be a JSON object");
  SelectionMask mask;
  for (const auto& [key, value] : j.items()) {
    if (key != "excluded_evidence_ids" && key != "excluded_categories") {
      throw ConfigError("unknown selection mask field '" + key + "'");
    }
    if (!value.is_array()) throw ConfigError("'" + key + "' must be an array of strings");
    for (const auto& item : value) {
      if (!item.is_string()) throw ConfigError("'" + key + "' must be an array of strings");
      const auto s = item.get<std::string>();
      if (key == "excluded_evidence_ids") {
        mask.excluded_evidence_ids.insert(s);
      } else {
        try {
          mask.excluded_categories.insert(parse_category(s));
        } catch (const DomainError&) {
          throw ConfigError("unknown source category '" + s + "'");
        }
      }
    }
  }
  return mask;
}

json to_json(const SelectionMask& mask) {
  json categories = json::array();
  for (auto c : mask.excluded_categories) categories.push_back(to_string(c));
  return json{{"excluded_evidence_ids", mask.excluded_evidence_ids},
              {"excluded_categories", std::move(categories)}};
}

SentenceScore score_sentence(const std::vector<Judgment>& judgments,
                             bool count_irrelevant_in_total) {
  SentenceScore out;
  for (const auto& j : judgments) {
    if (j.verdict == Verdict::supported) ++out.counts.support;
    if (j.verdict != Verdict::irrelevant || count_irrelevant_in_total) ++out.counts.total;
  }
  if (out.counts.total > 0) out.score = Fraction(out.counts.support, out.counts.total);
  return out;
}

std::optional<Fraction> score_document(const std::map<int, Fraction>& sentence_scores) {
  if (sentence_scores.empty()) return std::nullopt;
  Fraction sum = 0;
  for (const auto& [_, s] : sentence_scores) sum += s;
  return sum / static_cast<long long>(sentence_scores.size());
}

std::optional<Fraction> pooled_score(const std::map<int, SentenceCounts>& counts) {
  std::int64_t support = 0;
  std::int64_t total = 0;
  for (const auto& [_, c] : counts) {
    if (c.total == 0) continue;
    support += c.support;
    total += c.total;
  }
  if (total == 0) return std::nullopt;
  return Fraction(support, total);
}

Classification classify_sentence(const Fraction& score, const Fraction& threshold) {
  return score < threshold ? Classification::not_factual : Classification::factual;
}

ScoreBreakdown compute_breakdown(const CredibilityReport& report, const SelectionMask& mask) {
  std::map<std::string, int, std::less<>> sentence_of_claim;
  for (const auto& s : report.sentences) {
    for (const auto& c : s.claims) sentence_of_claim.emplace(c.id, s.index);
  }
  std::map<std::string, const EvidencePassage*, std::less<>> evidence_by_id;
  for (const auto& e : report.evidence) evidence_by_id.emplace(e.id, &e);

  std::map<int, std::vector<Judgment>> selected;
  for (const auto& j : report.judgments) {
    auto e = evidence_by_id.find(j.evidence_id);
    auto s = sentence_of_claim.find(j.claim_id);
    if (e == evidence_by_id.end() || s == sentence_of_claim.end()) continue;
    if (mask.includes(*e->second)) selected[s->second].push_back(j);
  }

  ScoreBreakdown b;
  for (const auto& sentence : report.sentences) {
    const auto it = selected.find(sentence.index);
    const SentenceScore score =
        score_sentence(it == selected.end() ? std::vector<Judgment>{} : it->second,
                       report.config.count_irrelevant_in_total);
    b.counts[sentence.index] = score.counts;
    if (sentence.status != SentenceStatus::verified) {
      b.status[sentence.index] = sentence.status;
      continue;
    }
    if (!score.score) {
      b.status[sentence.index] = SentenceStatus::unverified;
      continue;
    }
    b.status[sentence.index] = SentenceStatus::verified;
    b.sentence_scores[sentence.index] = *score.score;
    b.classification[sentence.index] =
        classify_sentence(*score.score, report.config.threshold_t);
  }
  b.overall_score = score_document(b.sentence_scores);
  std::map<int, SentenceCounts> scored_counts;
  for (const auto& [index, _] : b.sentence_scores) scored_counts[index] = b.counts[index];
  b.pooled_score = pooled_score(scored_counts);
  return b;
}

ScoreBreakdown apply_selection(const CredibilityReport& report, const SelectionMask& mask) {
  for (const auto& id : mask.excluded_evidence_ids) {
    if (!report.find_evidence(id)) throw UnknownEvidenceId(id);
  }
  return compute_breakdown(report, mask);
}

}  // namespace factcheck::scoring
