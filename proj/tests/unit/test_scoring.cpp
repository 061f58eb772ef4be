#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/scoring/credibility.hpp"
#include "test_support.hpp"

using namespace factcheck;
using namespace factcheck::scoring;
using nlohmann::json;

namespace {

std::vector<Judgment> verdicts(std::initializer_list<Verdict> vs) {
  std::vector<Judgment> out;
  int i = 0;
  for (auto v : vs) {
    Judgment j;
    j.claim_id = "s0c1";
    j.evidence_id = "s0c1e" + std::to_string(++i) + "w1";
    j.verdict = v;
    out.push_back(j);
  }
  return out;
}

CredibilityReport golden() {
  return deserialize_report(testing::read_text(testing::java_tea_dir() / "golden_report.json"));
}

constexpr auto S = Verdict::supported;
constexpr auto N = Verdict::not_supported;
constexpr auto I = Verdict::irrelevant;

}  // namespace

TEST_SUITE("scoring") {

TEST_CASE("sentence score pools supported over total") {
  auto s = score_sentence(verdicts({S, S, N, I}), true);
  CHECK(s.counts == SentenceCounts{2, 4});
  CHECK(s.score == Fraction(1, 2));
  s = score_sentence(verdicts({S, S, N, I}), false);
  CHECK(s.counts == SentenceCounts{2, 3});
  CHECK(s.score == Fraction(2, 3));
  s = score_sentence(verdicts({I, I}), false);
  CHECK(s.counts == SentenceCounts{0, 0});
  CHECK_FALSE(s.score.has_value());
  s = score_sentence({}, true);
  CHECK_FALSE(s.score.has_value());
}

TEST_CASE("document score is the mean of present sentence scores") {
  CHECK(score_document({{0, Fraction(5, 6)}, {1, Fraction(4, 9)}}) == Fraction(23, 36));
  CHECK_FALSE(score_document({}).has_value());
  CHECK(pooled_score({{0, {5, 6}}, {1, {4, 9}}, {2, {0, 0}}}) == Fraction(9, 15));
  CHECK_FALSE(pooled_score({{0, {0, 0}}}).has_value());
}

TEST_CASE("classification is strict below the threshold") {
  CHECK(classify_sentence(Fraction(3, 10), Fraction(3, 10)) == Classification::factual);
  CHECK(classify_sentence(Fraction(2999, 10000), Fraction(3, 10)) == Classification::not_factual);
  CHECK(classify_sentence(Fraction(0), Fraction(0)) == Classification::factual);
  CHECK(classify_sentence(Fraction(1), Fraction(1)) == Classification::factual);
}

TEST_CASE("selection mask parsing") {
  CHECK(mask_from_json(json::object()).empty());
  CHECK(mask_from_json(nullptr).empty());
  const auto m = mask_from_json(
      json{{"excluded_evidence_ids", {"a", "b"}}, {"excluded_categories", {"blog"}}});
  CHECK(m.excluded_evidence_ids == std::set<std::string>{"a", "b"});
  CHECK(m.excluded_categories == std::set<SourceCategory>{SourceCategory::blog});
  CHECK(mask_from_json(to_json(m)) == m);
  CHECK_THROWS_AS(mask_from_json(json{{"excluded", json::array()}}), ConfigError);
  CHECK_THROWS_AS(mask_from_json(json{{"excluded_categories", {"forum"}}}), ConfigError);
  CHECK_THROWS_AS(mask_from_json(json{{"excluded_evidence_ids", "a"}}), ConfigError);
  CHECK_THROWS_AS(mask_from_json(json{{"excluded_evidence_ids", {1}}}), ConfigError);
  CHECK_THROWS_AS(mask_from_json(json::array()), ConfigError);
}

TEST_CASE("golden report scores") {
  const auto r = golden();
  const auto b = apply_selection(r, {});
  CHECK(b == r.scores);
  CHECK(b.counts.at(0) == SentenceCounts{5, 6});
  CHECK(b.counts.at(1) == SentenceCounts{4, 9});
  CHECK(b.overall_score == Fraction(23, 36));
  CHECK(to_fixed4(*b.overall_score) == "0.6389");
  CHECK(b.pooled_score == Fraction(3, 5));
  CHECK(assign_bucket(b.sentence_scores.at(0)) == Bucket::high);
  CHECK(assign_bucket(b.sentence_scores.at(1)) == Bucket::medium);
}

TEST_CASE("excluding blogs drops two of nine judgments from the second sentence") {
  const auto r = golden();
  SelectionMask mask;
  mask.excluded_categories = {SourceCategory::blog};
  const auto b = apply_selection(r, mask);
  CHECK(b.counts.at(0) == SentenceCounts{5, 6});
  CHECK(b.counts.at(1) == SentenceCounts{4, 7});
  CHECK(b.sentence_scores.at(1) == Fraction(4, 7));
  CHECK(b == testing::recount_oracle(r, mask));
}

TEST_CASE("excluding the sole not_supported passage") {
  const auto r = golden();
  SelectionMask mask;
  mask.excluded_evidence_ids = {"s1c3e1w1"};
  const auto b = apply_selection(r, mask);
  CHECK(b.counts.at(1) == SentenceCounts{4, 8});
  CHECK(b.sentence_scores.at(1) == Fraction(1, 2));
  CHECK(b == testing::recount_oracle(r, mask));
}

TEST_CASE("excluding everything leaves sentences unverified with no overall score") {
  const auto r = golden();
  SelectionMask mask;
  for (auto c : kAllCategories) mask.excluded_categories.insert(c);
  const auto b = apply_selection(r, mask);
  CHECK(b.status.at(0) == SentenceStatus::unverified);
  CHECK(b.status.at(1) == SentenceStatus::unverified);
  CHECK(b.sentence_scores.empty());
  CHECK_FALSE(b.overall_score.has_value());
  CHECK_FALSE(b.pooled_score.has_value());
  CHECK(b.counts.at(0) == SentenceCounts{0, 0});
}

TEST_CASE("unknown evidence ids in a mask are rejected") {
  SelectionMask mask;
  mask.excluded_evidence_ids = {"s9c9e9w9"};
  CHECK_THROWS_AS(apply_selection(golden(), mask), UnknownEvidenceId);
  CHECK_NOTHROW(compute_breakdown(golden(), mask));
}

TEST_CASE("apply_selection does not modify the report") {
  const auto r = golden();
  const auto copy = r;
  SelectionMask mask;
  mask.excluded_categories = {SourceCategory::government_website};
  (void)apply_selection(r, mask);
  CHECK(r == copy);
}

TEST_CASE("property: random reports and masks agree with the recount oracle") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto r = testing::random_report(rng);
    const auto mask = testing::random_mask(r, rng);
    INFO("iteration " << i);
    const auto b = apply_selection(r, mask);
    CHECK(b == testing::recount_oracle(r, mask));
    CHECK(apply_selection(r, {}) == r.scores);
    // Removing evidence never raises any sentence total.
    for (const auto& [idx, c] : b.counts) CHECK(c.total <= r.scores.counts.at(idx).total);
  }
}

}
