#include <map>
#include <set>

#include "factcheck/core/serialization.hpp"

namespace factcheck {

std::vector<std::string> validate_report(const CredibilityReport& r) {
  std::vector<std::string> problems;
  auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

  std::set<std::string, std::less<>> claim_ids;
  for (std::size_t i = 0; i < r.sentences.size(); ++i) {
    const auto& s = r.sentences[i];
    if (s.index != static_cast<int>(i)) {
      fail("sentence indices are not contiguous at position " + std::to_string(i));
    }
    if ((s.status == SentenceStatus::no_claims) != s.claims.empty() &&
        s.status != SentenceStatus::unverified) {
      fail("sentence " + std::to_string(s.index) + " status disagrees with its claims");
    }
    for (const auto& c : s.claims) {
      if (!claim_ids.insert(c.id).second) fail("duplicate claim id " + c.id);
      if (c.sentence_index != s.index) fail("claim " + c.id + " points at the wrong sentence");
      if (c.text.empty()) fail("claim " + c.id + " has empty text");
      if (c.query.empty()) fail("claim " + c.id + " has empty query");
    }
  }

  std::set<std::string, std::less<>> evidence_ids;
  for (const auto& e : r.evidence) {
    if (!evidence_ids.insert(e.id).second) fail("duplicate evidence id " + e.id);
    if (!claim_ids.count(e.claim_id)) fail("evidence " + e.id + " references unknown claim");
    if (!(e.window_start <= e.match_sentence_index && e.match_sentence_index <= e.window_end)) {
      fail("evidence " + e.id + " match index outside its window");
    }
    if (e.text.empty()) fail("evidence " + e.id + " has empty text");
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& j : r.judgments) {
    if (!claim_ids.count(j.claim_id)) fail("judgment references unknown claim " + j.claim_id);
    const auto* e = r.find_evidence(j.evidence_id);
    if (!e) {
      fail("judgment references unknown evidence " + j.evidence_id);
    } else if (e->claim_id != j.claim_id) {
      fail("judgment pairs claim " + j.claim_id + " with evidence of another claim");
    }
    if (!pairs.emplace(j.claim_id, j.evidence_id).second) {
      fail("duplicate judgment for " + j.claim_id + "/" + j.evidence_id);
    }
    if (j.rationale.empty() && j.verdict != Verdict::irrelevant) {
      fail("judgment " + j.claim_id + "/" + j.evidence_id + " has an empty rationale");
    }
  }

  for (const auto& [index, score] : r.scores.sentence_scores) {
    if (score < 0 || score > 1) fail("sentence score out of range at " + std::to_string(index));
    if (index < 0 || index >= static_cast<int>(r.sentences.size()) ||
        r.sentences[index].status != SentenceStatus::verified) {
      fail("score present for sentence " + std::to_string(index) + " that is not verified");
    }
  }
  if (r.scores.overall_score &&
      (*r.scores.overall_score < 0 || *r.scores.overall_score > 1)) {
    fail("overall score out of range");
  }
  return problems;
}

}  // namespace factcheck
