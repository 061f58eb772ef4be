#include "factcheck/retrieval/evidence_retrieval.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "factcheck/core/errors.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::retrieval {

namespace {

bool better(const RankedMatch& a, const RankedMatch& b) {
  return a.score > b.score || (a.score == b.score && a.index < b.index);
}

double quantize(double score) { return std::round(score * 10000.0) / 10000.0; }

struct Candidate {
  std::size_t result_position;  // 1-based position in the search results
  int window_ordinal;           // 1-based within the document
  const CleanDocument* doc;
  MergedWindow window;
};

}  // namespace

std::vector<MergedWindow> merge_windows(const std::vector<std::string>& sentences,
                                        const std::vector<RankedMatch>& matches, int m) {
  std::vector<MergedWindow> windows;
  for (const auto& match : matches) {
    windows.push_back({match, build_window(sentences, match.index, m)});
  }
  std::sort(windows.begin(), windows.end(), [](const MergedWindow& a, const MergedWindow& b) {
    return a.window.start < b.window.start ||
           (a.window.start == b.window.start && a.window.end < b.window.end);
  });
  std::vector<MergedWindow> merged;
  for (auto& w : windows) {
    if (!merged.empty() && w.window.start <= merged.back().window.end) {
      auto& last = merged.back();
      last.window.end = std::max(last.window.end, w.window.end);
      if (better(w.best, last.best)) last.best = w.best;
    } else {
      merged.push_back(std::move(w));
    }
  }
  for (auto& w : merged) w.window.text = join_sentences(sentences, w.window.start, w.window.end);
  return merged;
}

RetrievalOutcome retrieve_evidence(const AtomicClaim& claim, const PipelineConfig& config,
                                   Providers& providers, sources::SourceCategorizer* categorizer) {
  if (claim.query.empty()) throw DomainError("claim " + claim.id + " has an empty query");
  RetrievalOutcome outcome;

  std::vector<SearchResult> results;
  try {
    results = providers.search(claim.query, config.top_n_results);
  } catch (const ReplayMiss&) {
    throw;
  } catch (const ProviderError& e) {
    outcome.issues.push_back({"", std::string("search failed: ") + e.what()});
    outcome.status = ClaimStatus::evidence_empty;
    return outcome;
  }

  std::vector<CleanDocument> documents;
  std::vector<std::size_t> positions;
  documents.reserve(results.size());
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& result = results[r];
    std::string body;
    try {
      body = providers.fetch_page(result.url);
    } catch (const ProviderError& e) {
      outcome.issues.push_back({result.url, e.what()});
      continue;
    } catch (const DomainError& e) {
      outcome.issues.push_back({result.url, e.what()});
      continue;
    }
    try {
      documents.push_back(extract_document(body, result.url));
      positions.push_back(r + 1);
    } catch (const EmptyDocument& e) {
      const std::string snippet = text::collapse_whitespace(result.snippet);
      if (snippet.empty()) {
        outcome.issues.push_back({result.url, e.what()});
        continue;
      }
      CleanDocument doc;
      doc.url = result.url;
      doc.title = result.title;
      doc.sentences = {snippet};
      doc.from_snippet = true;
      documents.push_back(std::move(doc));
      positions.push_back(r + 1);
    }
  }

  std::vector<Candidate> candidates;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const auto& doc = documents[d];
    std::vector<RankedMatch> matches;
    try {
      matches = config.retrieval_mode == RetrievalMode::sparse
                    ? rank_sentences_bm25(claim.query, doc.sentences, config.top_k_passages)
                    : rank_sentences_dense(claim.query, doc.sentences, config.top_k_passages,
                                           providers);
    } catch (const ReplayMiss&) {
      throw;
    } catch (const ProviderError& e) {
      outcome.issues.push_back({doc.url, std::string("ranking failed: ") + e.what()});
      continue;
    }
    int ordinal = 0;
    for (auto& w : merge_windows(doc.sentences, matches, config.context_window_m)) {
      candidates.push_back({positions[d], ++ordinal, &doc, std::move(w)});
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.window.best.score > b.window.best.score;
  });
  if (candidates.size() > static_cast<std::size_t>(config.top_n_results)) {
    candidates.resize(static_cast<std::size_t>(config.top_n_results));
  }

  int rank = 0;
  for (auto& c : candidates) {
    EvidencePassage p;
    p.rank = ++rank;
    p.id = claim.id + "e" + std::to_string(c.result_position) + "w" +
           std::to_string(c.window_ordinal);
    p.claim_id = claim.id;
    p.url = c.doc->url;
    p.hostname = sources::extract_hostname(p.url);
    if (categorizer) {
      const auto category = categorizer->categorize(p.hostname);
      p.category = category.category;
      p.category_fallback = category.fallback;
    }
    p.match_sentence_index = c.window.best.index;
    p.window_start = c.window.window.start;
    p.window_end = c.window.window.end;
    p.text = std::move(c.window.window.text);
    p.relevance_score = quantize(c.window.best.score);
    p.from_snippet = c.doc->from_snippet;
    outcome.passages.push_back(std::move(p));
  }
  outcome.status = outcome.passages.empty() ? ClaimStatus::evidence_empty : ClaimStatus::ok;
  if (outcome.passages.empty()) {
    spdlog::info("claim {}: no evidence ({} issue(s))", claim.id, outcome.issues.size());
  }
  return outcome;
}

}  // namespace factcheck::retrieval
