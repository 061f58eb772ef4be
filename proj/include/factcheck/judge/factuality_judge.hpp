#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/providers/providers.hpp"

namespace factcheck::judge {

inline constexpr std::size_t kMaxRationaleChars = 2000;
inline constexpr std::string_view kProviderErrorRationale = "provider-error";

struct ParsedVerdict {
  Verdict verdict = Verdict::irrelevant;
  std::string rationale;

  bool operator==(const ParsedVerdict&) const = default;
};

/// Single user message rendering the judgment template. Throws DomainError
/// when the evidence text is empty.
std::vector<ChatMessage> build_judgment_prompt(const AtomicClaim& claim,
                                               const EvidencePassage& evidence,
                                               std::string_view paragraph_context);

/// Total parser. The last "Final Verdict" line decides: yes/support ->
/// supported, no/not/contradict -> not_supported, irrelevant -> irrelevant,
/// anything else or no such line -> irrelevant. The rationale is the text
/// after the last "Rationale:" label (up to the verdict line), else the
/// whole answer, capped at kMaxRationaleChars code points.
ParsedVerdict parse_verdict(std::string_view response);

/// First `max_chars` code points of `s`; never splits a UTF-8 sequence.
std::string truncate_utf8(std::string_view s, std::size_t max_chars);

/// One provider call. Provider failures yield an irrelevant judgment with
/// rationale "provider-error" and `provider_error` set; ReplayMiss propagates.
Judgment judge_claim_evidence(const AtomicClaim& claim, const EvidencePassage& evidence,
                              std::string_view paragraph_context, Providers& llm,
                              std::string_view profile);

}  // namespace factcheck::judge
