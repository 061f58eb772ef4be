#include "factcheck/retrieval/ranking.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "factcheck/core/errors.hpp"

namespace factcheck::retrieval {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<double> bm25_scores(std::string_view query, const std::vector<std::string>& sentences,
                                Bm25Params params) {
  const std::size_t n_docs = sentences.size();
  std::vector<double> scores(n_docs, 0.0);
  if (n_docs == 0) return scores;

  std::vector<std::map<std::string, int>> tf(n_docs);
  std::vector<double> length(n_docs, 0.0);
  std::map<std::string, int> doc_freq;
  double total_length = 0.0;
  for (std::size_t d = 0; d < n_docs; ++d) {
    const auto tokens = tokenize(sentences[d]);
    length[d] = static_cast<double>(tokens.size());
    total_length += length[d];
    for (const auto& t : tokens) ++tf[d][t];
    for (const auto& [term, _] : tf[d]) ++doc_freq[term];
  }
  const double avgdl = total_length / static_cast<double>(n_docs);
  if (avgdl == 0.0) return scores;

  const double n = static_cast<double>(n_docs);
  for (const auto& term : tokenize(query)) {
    auto df_it = doc_freq.find(term);
    if (df_it == doc_freq.end()) continue;
    const double df = df_it->second;
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (std::size_t d = 0; d < n_docs; ++d) {
      auto it = tf[d].find(term);
      if (it == tf[d].end()) continue;
      const double f = it->second;
      const double norm = params.k1 * (1.0 - params.b + params.b * length[d] / avgdl);
      scores[d] += idf * f * (params.k1 + 1.0) / (f + norm);
    }
  }
  return scores;
}

std::vector<RankedMatch> top_k(const std::vector<double>& scores, int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  std::vector<RankedMatch> all;
  all.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) all.push_back({static_cast<int>(i), scores[i]});
  std::stable_sort(all.begin(), all.end(),
                   [](const RankedMatch& a, const RankedMatch& b) { return a.score > b.score; });
  if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
  return all;
}

std::vector<RankedMatch> rank_sentences_bm25(std::string_view query,
                                             const std::vector<std::string>& sentences, int k) {
  if (sentences.empty()) throw DomainError("ranking needs at least one sentence");
  return top_k(bm25_scores(query, sentences), k);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DomainError("vector dimensions differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

std::vector<RankedMatch> rank_sentences_dense(std::string_view query,
                                              const std::vector<std::string>& sentences, int k,
                                              Providers& embedder) {
  if (sentences.empty()) throw DomainError("ranking needs at least one sentence");
  std::vector<std::string> texts;
  texts.reserve(sentences.size() + 1);
  texts.emplace_back(query);
  texts.insert(texts.end(), sentences.begin(), sentences.end());
  const auto vectors = embedder.embed(texts);
  std::vector<double> scores;
  scores.reserve(sentences.size());
  for (std::size_t i = 1; i < vectors.size(); ++i) scores.push_back(dot(vectors[0], vectors[i]));
  return top_k(scores, k);
}

std::string join_sentences(const std::vector<std::string>& sentences, int start, int end) {
  std::string out;
  for (int i = start; i <= end; ++i) {
    if (i > start) out += ' ';
    out += sentences[static_cast<std::size_t>(i)];
  }
  return out;
}

Window build_window(const std::vector<std::string>& sentences, int match_index, int m) {
  const int count = static_cast<int>(sentences.size());
  if (match_index < 0 || match_index >= count) {
    throw DomainError("match index " + std::to_string(match_index) + " outside document of " +
                      std::to_string(count) + " sentences");
  }
  if (m < 0) throw DomainError("context window must be non-negative");
  Window w;
  w.start = static_cast<int>(std::max<long long>(0, static_cast<long long>(match_index) - m));
  w.end = static_cast<int>(std::min<long long>(count - 1, static_cast<long long>(match_index) + m));
  w.text = join_sentences(sentences, w.start, w.end);
  return w;
}

}  // namespace factcheck::retrieval
