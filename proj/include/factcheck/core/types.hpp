#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace factcheck {

/// Exact rational used for every score and threshold so that bucket and
/// classification boundaries (0.3, 0.6, t) compare without rounding.
/// Arbitrary precision: the mean of many sentence scores has a large
/// common denominator.
using Fraction = boost::multiprecision::cpp_rational;

/// Renders a fraction in [0,1] with exactly four decimals, rounding half up.
std::string to_fixed4(const Fraction& f);

/// Quantizes a decimal to the nearest multiple of 1/10000.
Fraction fraction_from_decimal(double value);

double to_double(const Fraction& f);

enum class RetrievalMode { dense, sparse };

enum class SourceCategory {
  news,
  blog,
  wiki,
  social_media,
  scientific_medical_article,
  government_website,
  other,
};

inline constexpr SourceCategory kAllCategories[] = {
    SourceCategory::news,         SourceCategory::blog,
    SourceCategory::wiki,         SourceCategory::social_media,
    SourceCategory::scientific_medical_article, SourceCategory::government_website,
    SourceCategory::other,
};

enum class Verdict { supported, not_supported, irrelevant };
enum class SentenceStatus { verified, no_claims, unverified };
enum class ClaimStatus { ok, evidence_empty };
enum class Bucket { low, medium, high };
enum class Classification { factual, not_factual };

std::string_view to_string(RetrievalMode v);
std::string_view to_string(SourceCategory v);
std::string_view to_string(Verdict v);
std::string_view to_string(SentenceStatus v);
std::string_view to_string(ClaimStatus v);
std::string_view to_string(Bucket v);
std::string_view to_string(Classification v);

// Strict parsers for the canonical names; throw DomainError on anything else.
RetrievalMode parse_retrieval_mode(std::string_view s);
SourceCategory parse_category(std::string_view s);
Verdict parse_verdict_name(std::string_view s);
SentenceStatus parse_sentence_status(std::string_view s);
ClaimStatus parse_claim_status(std::string_view s);

struct PipelineConfig {
  std::string llm_profile = "default";
  RetrievalMode retrieval_mode = RetrievalMode::sparse;
  int top_n_results = 3;
  int top_k_passages = 1;
  int context_window_m = 15;
  Fraction threshold_t{3, 10};
  bool count_irrelevant_in_total = true;
  int parallelism = 4;
  int max_paragraph_sentences = 10;

  /// Throws ConfigError naming the first violated field.
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

struct RetrievalIssue {
  std::string url;
  std::string error;

  bool operator==(const RetrievalIssue&) const = default;
};

struct AtomicClaim {
  std::string id;
  int sentence_index = 0;
  std::string text;
  std::string query;
  ClaimStatus status = ClaimStatus::ok;
  std::vector<RetrievalIssue> retrieval_issues;

  bool operator==(const AtomicClaim&) const = default;
};

struct SentenceUnit {
  int index = 0;
  int paragraph_index = 0;
  std::string text;
  std::vector<AtomicClaim> claims;
  SentenceStatus status = SentenceStatus::unverified;
  std::string error;  // stage error for unverified sentences, empty otherwise

  bool operator==(const SentenceUnit&) const = default;
};

struct EvidencePassage {
  std::string id;
  std::string claim_id;
  int rank = 0;  // 1-based position among the claim's passages
  std::string url;
  std::string hostname;
  SourceCategory category = SourceCategory::other;
  bool category_fallback = false;  // categorizer failed, category defaulted
  int match_sentence_index = 0;
  int window_start = 0;
  int window_end = 0;
  std::string text;
  double relevance_score = 0.0;  // quantized to 1e-4
  bool from_snippet = false;

  bool operator==(const EvidencePassage&) const = default;
};

struct Judgment {
  std::string claim_id;
  std::string evidence_id;
  Verdict verdict = Verdict::irrelevant;
  std::string rationale;
  bool provider_error = false;

  bool operator==(const Judgment&) const = default;
};

struct SentenceCounts {
  std::int64_t support = 0;
  std::int64_t total = 0;

  bool operator==(const SentenceCounts&) const = default;
};

/// Scores for one selection of evidence. Every sentence has an entry in
/// `counts` and `status`; `sentence_scores` and `classification` only hold
/// sentences with a present score.
struct ScoreBreakdown {
  std::map<int, SentenceCounts> counts;
  std::map<int, SentenceStatus> status;
  std::map<int, Fraction> sentence_scores;
  std::map<int, Classification> classification;
  std::optional<Fraction> overall_score;  // mean of present sentence scores
  std::optional<Fraction> pooled_score;   // sum support / sum total

  bool operator==(const ScoreBreakdown&) const = default;
};

struct CredibilityReport {
  std::string job_id;
  std::string input_text;
  PipelineConfig config;
  std::vector<SentenceUnit> sentences;
  std::vector<EvidencePassage> evidence;
  std::vector<Judgment> judgments;
  ScoreBreakdown scores;

  bool operator==(const CredibilityReport&) const = default;

  const AtomicClaim* find_claim(std::string_view id) const;
  const EvidencePassage* find_evidence(std::string_view id) const;
};

/// Bucket by half-open intervals [0,0.3), [0.3,0.6), [0.6,1].
/// Throws DomainError outside [0,1].
Bucket assign_bucket(double score);
Bucket assign_bucket(const Fraction& score);

}  // namespace factcheck
