#include <doctest.h>

#include "factcheck/claims/claim_generation.hpp"
#include "factcheck/core/errors.hpp"
#include "factcheck/prompts/prompt_assets.hpp"
#include "factcheck/text/segmentation.hpp"
#include "test_support.hpp"

using namespace factcheck;
using namespace factcheck::claims;
using factcheck::testing::ScriptedProviders;

namespace {

const char* kJavaTea =
    "Java tea is commonly used as a diuretic, meaning it may increase urine production. The "
    "property has led to its traditional use in managing conditions such as edema (swelling) and "
    "UTIs.";

}  // namespace

TEST_SUITE("claims") {

TEST_CASE("parse_claims accepts the documented format and common drift") {
  CHECK(parse_claims("Claim_1: A.\nClaim_2: B.") == std::vector<std::string>{"A.", "B."});
  CHECK(parse_claims("  claim_1:  spaced  \n\n- Claim_2: bullet\n**Claim_3:** bold") ==
        std::vector<std::string>{"spaced", "bullet", "bold"});
  CHECK(parse_claims("CLAIM 4: upper") == std::vector<std::string>{"upper"});
  CHECK(parse_claims("Here you go:\nClaim_1: only this\nThanks") ==
        std::vector<std::string>{"only this"});
  CHECK(parse_claims("Claim_1:\nClaim_2: kept") == std::vector<std::string>{"kept"});
}

TEST_CASE("parse_claims rejects answers without claim lines") {
  CHECK_THROWS_AS(parse_claims(""), MalformedClaimResponse);
  CHECK_THROWS_AS(parse_claims("The sentence says tea is good."), MalformedClaimResponse);
  CHECK_THROWS_AS(parse_claims("Claim_1:   \nClaim_2:"), MalformedClaimResponse);
  CHECK_THROWS_AS(parse_claims("Claimant: x"), MalformedClaimResponse);
}

TEST_CASE("render and parse round trip") {
  const std::vector<std::string> claims = {"First claim.", "Second claim."};
  CHECK(render_claims(claims) == "Claim_1: First claim.\nClaim_2: Second claim.");
  CHECK(parse_claims(render_claims(claims)) == claims);
}

TEST_CASE("no-claims sentinel recognition") {
  CHECK(is_no_claims_sentinel("(no factual claims)"));
  CHECK(is_no_claims_sentinel("No factual claims."));
  CHECK_FALSE(is_no_claims_sentinel("Java tea has no factual claims attached"));
}

TEST_CASE("claim prompt labels the paragraph and names the target") {
  const auto seg = text::segment(kJavaTea);
  const auto indexed = index_paragraph(seg, 1);
  CHECK(indexed.target_label == "S2");
  CHECK(indexed.text.find("S1: Java tea is commonly used") != std::string::npos);
  CHECK(indexed.text.find("S2: The property") != std::string::npos);
  const auto msgs = build_claim_prompt(seg, 1);
  REQUIRE(msgs.size() == 1);
  CHECK(msgs[0].role == "user");
  CHECK(msgs[0].content.find("{{") == std::string::npos);
  CHECK(msgs[0].content.find(seg.sentences[1].text) != std::string::npos);
  CHECK_THROWS_AS(build_claim_prompt(seg, 2), DomainError);

  const auto retry = build_retry_prompt(msgs, "garbage", "S2");
  REQUIRE(retry.size() == 3);
  CHECK(retry[1].role == "assistant");
  CHECK(retry[1].content == "garbage");
  CHECK(retry[2].role == "user");
}

TEST_CASE("replay fixture: java tea sentence yields two claims") {
  auto gateway = testing::replay_gateway(testing::java_tea_dir() / "fixtures.jsonl");
  const auto seg = text::segment(kJavaTea);
  const auto out = generate_claims(seg, 0, *gateway, "default");
  CHECK(out.status == SentenceStatus::verified);
  REQUIRE(out.claims.size() == 2);
  CHECK(out.claims[0].text == "Java tea is commonly used as a diuretic.");
  CHECK(out.claims[0].id == "s0c1");
  CHECK(out.claims[1].id == "s0c2");
  CHECK(out.claims[0].query == out.claims[0].text);
  CHECK(out.claims[1].sentence_index == 0);
  CHECK(out.provider_calls == 1);
}

TEST_CASE("replay fixture: greeting is filtered by the sentinel") {
  auto gateway = testing::replay_gateway(testing::mini_eval_dir() / "fixtures.jsonl");
  const auto seg =
      text::segment("Hello! The Great Wall of China is visible from the Moon with the naked eye.");
  const auto out = generate_claims(seg, 0, *gateway, "default");
  CHECK(out.status == SentenceStatus::no_claims);
  CHECK(out.claims.empty());
}

TEST_CASE("malformed answer is retried once") {
  ScriptedProviders p;
  p.on_chat = [&](std::string_view, const std::vector<ChatMessage>& msgs) -> std::string {
    return msgs.size() == 1 ? "I think the claims are obvious." : "Claim_1: Tea is a drink.";
  };
  const auto seg = text::segment("Tea is a drink.");
  const auto out = generate_claims(seg, 0, p, "default");
  CHECK(out.status == SentenceStatus::verified);
  CHECK(out.provider_calls == 2);
  REQUIRE(out.claims.size() == 1);
  CHECK(out.claims[0].text == "Tea is a drink.");
}

TEST_CASE("malformed twice gives no_claims") {
  ScriptedProviders p;
  p.on_chat = [](std::string_view, const std::vector<ChatMessage>&) { return std::string("??"); };
  const auto out = generate_claims(text::segment("Tea is a drink."), 0, p, "default");
  CHECK(out.status == SentenceStatus::no_claims);
  CHECK(out.provider_calls == 2);
}

TEST_CASE("sentinel mixed with claims keeps the real claims") {
  ScriptedProviders p;
  p.on_chat = [](std::string_view, const std::vector<ChatMessage>&) {
    return std::string("Claim_1: (no factual claims)\nClaim_2: Tea is hot.");
  };
  const auto out = generate_claims(text::segment("Tea is hot."), 0, p, "default");
  REQUIRE(out.claims.size() == 1);
  CHECK(out.claims[0].id == "s0c1");
  CHECK(out.claims[0].text == "Tea is hot.");
}

TEST_CASE("provider failure leaves the sentence unverified") {
  ScriptedProviders p;
  p.on_chat = [](std::string_view, const std::vector<ChatMessage>&) -> std::string {
    throw TransportError("connection reset");
  };
  const auto out = generate_claims(text::segment("Tea is hot."), 0, p, "default");
  CHECK(out.status == SentenceStatus::unverified);
  CHECK(out.error.find("connection reset") != std::string::npos);
}

TEST_CASE("replay miss propagates") {
  ScriptedProviders p;
  p.on_chat = [](std::string_view, const std::vector<ChatMessage>&) -> std::string {
    throw ReplayMiss("chat", "abc");
  };
  CHECK_THROWS_AS(generate_claims(text::segment("Tea is hot."), 0, p, "default"), ReplayMiss);
}

TEST_CASE("prompt assets render strictly") {
  CHECK(prompts::render("a {{x}} b {{y}}", {{"x", "{{y}}"}, {"y", "2"}}) == "a {{y}} b 2");
  CHECK_THROWS_AS(prompts::render("{{missing}}", {}), DomainError);
  CHECK_THROWS_AS(prompts::asset("nope"), DomainError);
  CHECK(prompts::asset_names().size() == 4);
}

}
