#include "factcheck/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "factcheck/core/errors.hpp"

namespace factcheck {

std::string to_fixed4(const Fraction& f) {
  using boost::multiprecision::cpp_int;
  cpp_int num = numerator(f);
  const cpp_int den = denominator(f);
  const bool negative = num < 0;
  if (negative) num = -num;
  // round(num * 10^4 / den), half up, in integers
  const cpp_int scaled = (num * 20000 / den + 1) / 2;
  const cpp_int whole = scaled / 10000;
  const auto frac = static_cast<unsigned>(scaled % 10000);
  char digits[8];
  std::snprintf(digits, sizeof(digits), "%04u", frac);
  return (negative && scaled != 0 ? "-" : "") + whole.str() + "." + digits;
}

Fraction fraction_from_decimal(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite decimal");
  return Fraction(static_cast<std::int64_t>(std::llround(value * 10000.0)), 10000);
}

double to_double(const Fraction& f) { return f.convert_to<double>(); }

namespace {

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::pair<std::string_view, Enum> (&table)[N],
                std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw DomainError("unknown " + std::string(what) + ": '" + std::string(s) + "'");
}

template <class Enum, std::size_t N>
std::string_view name_of(Enum v, const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<std::string_view, RetrievalMode> kModes[] = {
    {"dense", RetrievalMode::dense}, {"sparse", RetrievalMode::sparse}};

constexpr std::pair<std::string_view, SourceCategory> kCategories[] = {
    {"news", SourceCategory::news},
    {"blog", SourceCategory::blog},
    {"wiki", SourceCategory::wiki},
    {"social_media", SourceCategory::social_media},
    {"scientific_medical_article", SourceCategory::scientific_medical_article},
    {"government_website", SourceCategory::government_website},
    {"other", SourceCategory::other},
};

constexpr std::pair<std::string_view, Verdict> kVerdicts[] = {
    {"supported", Verdict::supported},
    {"not_supported", Verdict::not_supported},
    {"irrelevant", Verdict::irrelevant}};

constexpr std::pair<std::string_view, SentenceStatus> kSentenceStatus[] = {
    {"verified", SentenceStatus::verified},
    {"no_claims", SentenceStatus::no_claims},
    {"unverified", SentenceStatus::unverified}};

constexpr std::pair<std::string_view, ClaimStatus> kClaimStatus[] = {
    {"ok", ClaimStatus::ok}, {"evidence_empty", ClaimStatus::evidence_empty}};

constexpr std::pair<std::string_view, Bucket> kBuckets[] = {
    {"low", Bucket::low}, {"medium", Bucket::medium}, {"high", Bucket::high}};

constexpr std::pair<std::string_view, Classification> kClassifications[] = {
    {"factual", Classification::factual}, {"not_factual", Classification::not_factual}};

}  // namespace

std::string_view to_string(RetrievalMode v) { return name_of(v, kModes); }
std::string_view to_string(SourceCategory v) { return name_of(v, kCategories); }
std::string_view to_string(Verdict v) { return name_of(v, kVerdicts); }
std::string_view to_string(SentenceStatus v) { return name_of(v, kSentenceStatus); }
std::string_view to_string(ClaimStatus v) { return name_of(v, kClaimStatus); }
std::string_view to_string(Bucket v) { return name_of(v, kBuckets); }
std::string_view to_string(Classification v) { return name_of(v, kClassifications); }

RetrievalMode parse_retrieval_mode(std::string_view s) {
  return parse_enum(s, kModes, "retrieval mode");
}
SourceCategory parse_category(std::string_view s) {
  return parse_enum(s, kCategories, "source category");
}
Verdict parse_verdict_name(std::string_view s) { return parse_enum(s, kVerdicts, "verdict"); }
SentenceStatus parse_sentence_status(std::string_view s) {
  return parse_enum(s, kSentenceStatus, "sentence status");
}
ClaimStatus parse_claim_status(std::string_view s) {
  return parse_enum(s, kClaimStatus, "claim status");
}

void PipelineConfig::validate() const {
  if (llm_profile.empty()) throw ConfigError("llm_profile must be non-empty");
  if (top_n_results < 1) throw ConfigError("top_n_results must be >= 1");
  if (top_k_passages < 1) throw ConfigError("top_k_passages must be >= 1");
  if (context_window_m < 0) throw ConfigError("context_window_m must be >= 0");
  if (threshold_t < Fraction(0) || threshold_t > Fraction(1)) {
    throw ConfigError("threshold_t must be in [0,1]");
  }
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (max_paragraph_sentences < 1) throw ConfigError("max_paragraph_sentences must be >= 1");
}

const AtomicClaim* CredibilityReport::find_claim(std::string_view id) const {
  for (const auto& s : sentences) {
    for (const auto& c : s.claims) {
      if (c.id == id) return &c;
    }
  }
  return nullptr;
}

const EvidencePassage* CredibilityReport::find_evidence(std::string_view id) const {
  auto it = std::find_if(evidence.begin(), evidence.end(),
                         [&](const EvidencePassage& e) { return e.id == id; });
  return it == evidence.end() ? nullptr : &*it;
}

Bucket assign_bucket(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw DomainError("score outside [0,1]: " + std::to_string(score));
  }
  if (score < 0.3) return Bucket::low;
  if (score < 0.6) return Bucket::medium;
  return Bucket::high;
}

Bucket assign_bucket(const Fraction& score) {
  if (score < Fraction(0) || score > Fraction(1)) {
    throw DomainError("score outside [0,1]: " + to_fixed4(score));
  }
  if (score < Fraction(3, 10)) return Bucket::low;
  if (score < Fraction(3, 5)) return Bucket::medium;
  return Bucket::high;
}

}  // namespace factcheck
