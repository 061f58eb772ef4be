#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factcheck/providers/providers.hpp"

namespace factcheck::retrieval {

struct RankedMatch {
  int index = 0;
  double score = 0.0;

  bool operator==(const RankedMatch&) const = default;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Lowercased runs of ASCII letters and digits; bytes >= 0x80 count as word
/// characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// Okapi BM25 score of every sentence, treating each sentence as a document
/// and the list as the corpus. IDF is log(1 + (N - n + 0.5) / (n + 0.5)),
/// which stays non-negative for terms found in most sentences. Repeated
/// query terms contribute once per occurrence.
std::vector<double> bm25_scores(std::string_view query, const std::vector<std::string>& sentences,
                                Bm25Params params = {});

/// The `k` best indices by descending score; ties go to the lower index.
std::vector<RankedMatch> top_k(const std::vector<double>& scores, int k);

std::vector<RankedMatch> rank_sentences_bm25(std::string_view query,
                                             const std::vector<std::string>& sentences, int k);

/// Dot product of unit vectors from the embedding provider (query embedded
/// together with the sentences in one request).
std::vector<RankedMatch> rank_sentences_dense(std::string_view query,
                                              const std::vector<std::string>& sentences, int k,
                                              Providers& embedder);

double dot(const std::vector<double>& a, const std::vector<double>& b);

struct Window {
  int start = 0;
  int end = 0;  // inclusive
  std::string text;
};

/// Sentences [match - m, match + m] clamped to the document, joined by single
/// spaces. Throws DomainError for an invalid match index or negative m.
Window build_window(const std::vector<std::string>& sentences, int match_index, int m);

std::string join_sentences(const std::vector<std::string>& sentences, int start, int end);

}  // namespace factcheck::retrieval
