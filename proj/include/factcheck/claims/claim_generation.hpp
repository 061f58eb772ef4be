#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/providers/providers.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::claims {

/// Marker the few-shot prompt teaches the model to emit for sentences that
/// state nothing checkable.
inline constexpr std::string_view kNoClaimsSentinel = "(no factual claims)";

/// "S1: ... S2: ..." for the paragraph holding `sentence_index`, plus the
/// target's label ("S<k>", 1-based within the paragraph).
struct IndexedParagraph {
  std::string text;
  std::string target_label;
  std::string target_sentence;
};

IndexedParagraph index_paragraph(const text::SegmentedText& segmented, int sentence_index);

/// Single user message rendering the claim-generation template.
/// Throws DomainError when the index is out of range.
std::vector<ChatMessage> build_claim_prompt(const text::SegmentedText& segmented,
                                            int sentence_index);

/// Follow-up conversation used after a malformed answer: the original
/// prompt, the model's answer, and the format reminder.
std::vector<ChatMessage> build_retry_prompt(const std::vector<ChatMessage>& original,
                                            std::string_view bad_response,
                                            std::string_view target_label);

/// Bodies of the `Claim_<k>:` lines in order. Leading whitespace, bullets
/// and bold markers are tolerated, the prefix is case-insensitive, empty
/// bodies are dropped. Throws MalformedClaimResponse when nothing parses.
std::vector<std::string> parse_claims(std::string_view response);

/// Renders claims in the `Claim_<k>: text` answer format.
std::string render_claims(const std::vector<std::string>& claims);

bool is_no_claims_sentinel(std::string_view claim);

struct ClaimOutcome {
  SentenceStatus status = SentenceStatus::verified;
  std::vector<AtomicClaim> claims;
  std::string error;       // set when status is unverified
  int provider_calls = 0;  // at most 2
};

/// Runs the prompt (plus at most one format retry) and turns the answer into
/// claims with ids "s<index>c<k>" and query = claim text. Malformed twice or
/// only the sentinel gives no_claims; a provider failure gives unverified.
/// ReplayMiss propagates.
ClaimOutcome generate_claims(const text::SegmentedText& segmented, int sentence_index,
                             Providers& llm, std::string_view profile);

}  // namespace factcheck::claims
