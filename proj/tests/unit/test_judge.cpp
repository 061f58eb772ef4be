#include <doctest.h>

#include <algorithm>
#include <random>

#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/judge/factuality_judge.hpp"
#include "factcheck/text/segmentation.hpp"
#include "test_support.hpp"

using namespace factcheck;
using namespace factcheck::judge;

namespace {

AtomicClaim claim() {
  AtomicClaim c;
  c.id = "s0c1";
  c.text = "Java tea is commonly used as a diuretic.";
  c.query = c.text;
  return c;
}

EvidencePassage evidence(std::string text = "Java tea has a long history as a diuretic.") {
  EvidencePassage e;
  e.id = "s0c1e1w1";
  e.claim_id = "s0c1";
  e.rank = 1;
  e.text = std::move(text);
  return e;
}

std::size_t code_points(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("judge") {

TEST_CASE("verdict words map to the three labels") {
  CHECK(parse_verdict("Rationale: fits.\nFinal Verdict: Yes").verdict == Verdict::supported);
  CHECK(parse_verdict("Final verdict: **Supported**").verdict == Verdict::supported);
  CHECK(parse_verdict("Final Verdict: No").verdict == Verdict::not_supported);
  CHECK(parse_verdict("FINAL VERDICT - contradicted").verdict == Verdict::not_supported);
  CHECK(parse_verdict("Final Verdict: Irrelevant").verdict == Verdict::irrelevant);
  CHECK(parse_verdict("Final Verdict: maybe").verdict == Verdict::irrelevant);
  CHECK(parse_verdict("The evidence says yes.").verdict == Verdict::irrelevant);
  CHECK(parse_verdict("").verdict == Verdict::irrelevant);
}

TEST_CASE("the last verdict line wins") {
  CHECK(parse_verdict("Final Verdict: Yes\nOn reflection...\nFinal Verdict: No").verdict ==
        Verdict::not_supported);
}

TEST_CASE("rationale extraction") {
  auto p = parse_verdict("Some preamble\nRationale: The page states it.\nFinal Verdict: Yes");
  CHECK(p.rationale == "The page states it.");
  p = parse_verdict("Rationale: first\nRationale: second\nFinal Verdict: No");
  CHECK(p.rationale == "second");
  p = parse_verdict("  Just text with no labels.  ");
  CHECK(p.rationale == "Just text with no labels.");
  p = parse_verdict("Rationale:\nFinal Verdict: Yes");
  CHECK(p.rationale == "Rationale:\nFinal Verdict: Yes");
}

TEST_CASE("rationale is capped by code points without splitting UTF-8") {
  std::string long_text = "Rationale: ";
  for (int i = 0; i < 3000; ++i) long_text += "é";
  const auto p = parse_verdict(long_text);
  CHECK(code_points(p.rationale) == kMaxRationaleChars);
  CHECK(truncate_utf8("aéb", 2) == "aé");
  CHECK(truncate_utf8("ab", 5) == "ab");
  CHECK(truncate_utf8(std::string("a\xC3"), 5) == std::string("a\xC3"));
}

TEST_CASE("property: parse_verdict is total over random input") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const auto s = testing::fuzz_string(rng);
    ParsedVerdict p;
    REQUIRE_NOTHROW(p = parse_verdict(s));
    CHECK(code_points(p.rationale) <= kMaxRationaleChars);
  }
}

TEST_CASE("judgment prompt carries claim, evidence and context") {
  const auto msgs = build_judgment_prompt(claim(), evidence(), "Paragraph   context\nhere.");
  REQUIRE(msgs.size() == 1);
  CHECK(msgs[0].role == "user");
  CHECK(msgs[0].content.find("Java tea is commonly used as a diuretic.") != std::string::npos);
  CHECK(msgs[0].content.find("Java tea has a long history as a diuretic.") != std::string::npos);
  CHECK(msgs[0].content.find("Paragraph context here.") != std::string::npos);
  CHECK(msgs[0].content.find("{{") == std::string::npos);
  CHECK_THROWS_AS(build_judgment_prompt(claim(), evidence(""), "ctx"), DomainError);
}

TEST_CASE("judge_claim_evidence maps the answer") {
  testing::ScriptedProviders p;
  p.on_chat = [](std::string_view, const std::vector<ChatMessage>&) {
    return std::string("Rationale: matches.\nFinal Verdict: Yes");
  };
  const auto j = judge_claim_evidence(claim(), evidence(), "ctx", p, "default");
  CHECK(j.claim_id == "s0c1");
  CHECK(j.evidence_id == "s0c1e1w1");
  CHECK(j.verdict == Verdict::supported);
  CHECK(j.rationale == "matches.");
  CHECK_FALSE(j.provider_error);
}

TEST_CASE("provider errors give an irrelevant judgment") {
  testing::ScriptedProviders p;
  p.on_chat = [](std::string_view, const std::vector<ChatMessage>&) -> std::string {
    throw RateLimited("429");
  };
  const auto j = judge_claim_evidence(claim(), evidence(), "ctx", p, "default");
  CHECK(j.verdict == Verdict::irrelevant);
  CHECK(j.rationale == kProviderErrorRationale);
  CHECK(j.provider_error);

  p.on_chat = [](std::string_view, const std::vector<ChatMessage>&) -> std::string {
    throw ReplayMiss("chat", "k");
  };
  CHECK_THROWS_AS(judge_claim_evidence(claim(), evidence(), "ctx", p, "default"), ReplayMiss);
}

TEST_CASE("replay fixture: golden judgments reproduce") {
  auto gateway = testing::replay_gateway(testing::java_tea_dir() / "fixtures.jsonl");
  const auto report =
      deserialize_report(testing::read_text(testing::java_tea_dir() / "golden_report.json"));
  const auto seg = text::segment(report.input_text);
  int checked = 0;
  for (const auto& s : report.sentences) {
    for (const auto& c : s.claims) {
      for (const auto& e : report.evidence) {
        if (e.claim_id != c.id) continue;
        const auto stored =
            std::find_if(report.judgments.begin(), report.judgments.end(),
                         [&](const Judgment& j) { return j.claim_id == c.id && j.evidence_id == e.id; });
        REQUIRE(stored != report.judgments.end());
        const auto j = judge_claim_evidence(c, e, seg.paragraph_text(s.paragraph_index), *gateway,
                                            "default");
        CHECK(j == *stored);
        ++checked;
      }
    }
  }
  CHECK(checked == 15);
}

}
