#include "factcheck/judge/factuality_judge.hpp"

#include <cctype>

#include "factcheck/core/errors.hpp"
#include "factcheck/prompts/prompt_assets.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::judge {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Line {
  std::size_t begin;
  std::size_t end;
};

std::vector<Line> split_lines(std::string_view s) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t eol = s.find('\n', pos);
    if (eol == std::string_view::npos) eol = s.size();
    lines.push_back({pos, eol});
    pos = eol + 1;
  }
  return lines;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

Verdict verdict_from_answer(std::string_view after_label) {
  // Skip separators and emphasis, then read the first word.
  std::size_t i = 0;
  while (i < after_label.size() && !std::isalpha(static_cast<unsigned char>(after_label[i]))) ++i;
  const std::string word = lower(after_label.substr(i));
  if (starts_with(word, "yes") || starts_with(word, "support") || starts_with(word, "true")) {
    return Verdict::supported;
  }
  if (starts_with(word, "no") || starts_with(word, "unsupported") ||
      starts_with(word, "contradict") || starts_with(word, "refute") ||
      starts_with(word, "false")) {
    return Verdict::not_supported;
  }
  return Verdict::irrelevant;
}

}  // namespace

std::string truncate_utf8(std::string_view s, std::size_t max_chars) {
  std::size_t chars = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (chars == max_chars) return std::string(s.substr(0, i));
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (c >= 0xF0) {
      len = 4;
    } else if (c >= 0xE0) {
      len = 3;
    } else if (c >= 0xC0) {
      len = 2;
    }
    // Malformed tails count as single bytes.
    for (std::size_t k = 1; k < len; ++k) {
      if (i + k >= s.size() || (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    i += len;
    ++chars;
  }
  return std::string(s);
}

std::vector<ChatMessage> build_judgment_prompt(const AtomicClaim& claim,
                                               const EvidencePassage& evidence,
                                               std::string_view paragraph_context) {
  if (evidence.text.empty()) throw DomainError("evidence " + evidence.id + " has empty text");
  return {{"user", prompts::render(prompts::asset(prompts::kJudgeFactuality),
                                   {{"context", text::collapse_whitespace(paragraph_context)},
                                    {"claim", text::collapse_whitespace(claim.text)},
                                    {"evidence", text::collapse_whitespace(evidence.text)}})}};
}

ParsedVerdict parse_verdict(std::string_view response) {
  const auto lines = split_lines(response);
  ParsedVerdict out;

  std::optional<std::size_t> verdict_line;
  for (std::size_t k = lines.size(); k-- > 0;) {
    const std::string line = lower(response.substr(lines[k].begin, lines[k].end - lines[k].begin));
    const auto pos = line.rfind("final verdict");
    if (pos == std::string::npos) continue;
    verdict_line = k;
    out.verdict = verdict_from_answer(
        response.substr(lines[k].begin + pos + 13, lines[k].end - lines[k].begin - pos - 13));
    break;
  }

  // Rationale: after the last "rationale:" that precedes the verdict line.
  const std::size_t limit = verdict_line ? lines[*verdict_line].begin : response.size();
  const std::string head = lower(response.substr(0, limit));
  const auto label = head.rfind("rationale:");
  std::string_view rationale = label == std::string::npos
                                   ? response
                                   : response.substr(label + 10, limit - label - 10);
  rationale = trim(rationale);
  if (rationale.empty()) rationale = trim(response);
  out.rationale = truncate_utf8(rationale, kMaxRationaleChars);
  return out;
}

Judgment judge_claim_evidence(const AtomicClaim& claim, const EvidencePassage& evidence,
                              std::string_view paragraph_context, Providers& llm,
                              std::string_view profile) {
  Judgment j;
  j.claim_id = claim.id;
  j.evidence_id = evidence.id;
  try {
    const auto answer =
        llm.chat_complete(profile, build_judgment_prompt(claim, evidence, paragraph_context));
    auto parsed = parse_verdict(answer);
    j.verdict = parsed.verdict;
    j.rationale = std::move(parsed.rationale);
  } catch (const ReplayMiss&) {
    throw;
  } catch (const ProviderError&) {
    j.verdict = Verdict::irrelevant;
    j.rationale = std::string(kProviderErrorRationale);
    j.provider_error = true;
  }
  return j;
}

}  // namespace factcheck::judge
