#include "factcheck/claims/claim_generation.hpp"

#include <cctype>

#include <spdlog/spdlog.h>

#include "factcheck/core/errors.hpp"
#include "factcheck/prompts/prompt_assets.hpp"

namespace factcheck::claims {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Strips list bullets, block-quote marks and markdown emphasis.
std::string_view strip_decoration(std::string_view s) {
  for (;;) {
    s = trim(s);
    if (s.empty()) return s;
    if (s.front() == '-' || s.front() == '*' || s.front() == '+' || s.front() == '>' ||
        s.front() == '#' || s.front() == '_') {
      s.remove_prefix(1);
    } else if (s.substr(0, 3) == "\xE2\x80\xA2") {  // bullet
      s.remove_prefix(3);
    } else {
      return s;
    }
  }
}

// Body of a "Claim_<k>:" line, or nullopt.
std::optional<std::string_view> claim_body(std::string_view line) {
  std::string_view s = strip_decoration(line);
  constexpr std::string_view kPrefix = "claim";
  if (s.size() < kPrefix.size()) return std::nullopt;
  for (std::size_t i = 0; i < kPrefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != kPrefix[i]) return std::nullopt;
  }
  s.remove_prefix(kPrefix.size());
  if (!s.empty() && (s.front() == '_' || s.front() == ' ')) s.remove_prefix(1);
  std::size_t digits = 0;
  while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
  if (digits == 0) return std::nullopt;
  s.remove_prefix(digits);
  while (!s.empty() && (s.front() == '*' || s.front() == ' ')) s.remove_prefix(1);
  if (s.empty() || s.front() != ':') return std::nullopt;
  s.remove_prefix(1);
  s = trim(s);
  while (s.size() >= 2 && s.substr(0, 2) == "**") s = trim(s.substr(2));
  return s;
}

}  // namespace

IndexedParagraph index_paragraph(const text::SegmentedText& segmented, int sentence_index) {
  if (sentence_index < 0 || sentence_index >= static_cast<int>(segmented.sentences.size())) {
    throw DomainError("sentence index " + std::to_string(sentence_index) + " out of range (" +
                      std::to_string(segmented.sentences.size()) + " sentences)");
  }
  const auto& p = segmented.paragraph_of(sentence_index);
  IndexedParagraph out;
  for (int i = p.first_sentence; i <= p.last_sentence; ++i) {
    const std::string label = "S" + std::to_string(i - p.first_sentence + 1);
    const std::string sentence = text::collapse_whitespace(segmented.sentences[i].text);
    if (!out.text.empty()) out.text += ' ';
    out.text += label + ": " + sentence;
    if (i == sentence_index) {
      out.target_label = label;
      out.target_sentence = sentence;
    }
  }
  return out;
}

std::vector<ChatMessage> build_claim_prompt(const text::SegmentedText& segmented,
                                            int sentence_index) {
  const IndexedParagraph p = index_paragraph(segmented, sentence_index);
  const std::string content = prompts::render(
      prompts::asset(prompts::kClaimGeneration),
      {{"paragraph", p.text}, {"target_label", p.target_label},
       {"target_sentence", p.target_sentence}});
  return {{"user", content}};
}

std::vector<ChatMessage> build_retry_prompt(const std::vector<ChatMessage>& original,
                                            std::string_view bad_response,
                                            std::string_view target_label) {
  std::vector<ChatMessage> messages = original;
  messages.push_back({"assistant", std::string(bad_response)});
  messages.push_back(
      {"user", prompts::render(prompts::asset(prompts::kClaimGenerationRetry),
                               {{"target_label", std::string(target_label)}})});
  return messages;
}

std::vector<std::string> parse_claims(std::string_view response) {
  std::vector<std::string> claims;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    if (eol == std::string_view::npos) eol = response.size();
    if (auto body = claim_body(response.substr(pos, eol - pos)); body && !body->empty()) {
      claims.emplace_back(*body);
    }
    pos = eol + 1;
  }
  if (claims.empty()) throw MalformedClaimResponse("no Claim_<k>: lines in model answer");
  return claims;
}

std::string render_claims(const std::vector<std::string>& claims) {
  std::string out;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (i) out += '\n';
    out += "Claim_" + std::to_string(i + 1) + ": " + claims[i];
  }
  return out;
}

bool is_no_claims_sentinel(std::string_view claim) {
  std::string s;
  for (char c : claim) {
    if (c == '(' || c == ')' || c == '.' || c == '"') continue;
    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return trim(s) == "no factual claims";
}

ClaimOutcome generate_claims(const text::SegmentedText& segmented, int sentence_index,
                             Providers& llm, std::string_view profile) {
  const auto prompt = build_claim_prompt(segmented, sentence_index);
  ClaimOutcome outcome;
  std::vector<std::string> parsed;
  try {
    std::string answer = llm.chat_complete(profile, prompt);
    ++outcome.provider_calls;
    try {
      parsed = parse_claims(answer);
    } catch (const MalformedClaimResponse&) {
      spdlog::debug("sentence {}: malformed claim answer, retrying", sentence_index);
      const auto label = index_paragraph(segmented, sentence_index).target_label;
      answer = llm.chat_complete(profile, build_retry_prompt(prompt, answer, label));
      ++outcome.provider_calls;
      try {
        parsed = parse_claims(answer);
      } catch (const MalformedClaimResponse&) {
        outcome.status = SentenceStatus::no_claims;
        return outcome;
      }
    }
  } catch (const ReplayMiss&) {
    throw;
  } catch (const ProviderError& e) {
    outcome.status = SentenceStatus::unverified;
    outcome.error = std::string("claim generation failed: ") + e.what();
    return outcome;
  }

  int k = 0;
  for (auto& text : parsed) {
    if (is_no_claims_sentinel(text)) continue;
    AtomicClaim claim;
    claim.id = "s" + std::to_string(sentence_index) + "c" + std::to_string(++k);
    claim.sentence_index = sentence_index;
    claim.query = text;
    claim.text = std::move(text);
    outcome.claims.push_back(std::move(claim));
  }
  outcome.status = outcome.claims.empty() ? SentenceStatus::no_claims : SentenceStatus::verified;
  return outcome;
}

}  // namespace factcheck::claims
