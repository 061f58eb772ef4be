#pragma once

#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/providers/providers.hpp"
#include "factcheck/retrieval/html_extract.hpp"
#include "factcheck/retrieval/ranking.hpp"
#include "factcheck/sources/source_categorizer.hpp"

namespace factcheck::retrieval {

/// Windows around the given matches with overlapping windows merged. A
/// merged window keeps the score and index of its best match (highest
/// score, lower index on ties). Output is ordered by window start.
struct MergedWindow {
  RankedMatch best;
  Window window;
};
std::vector<MergedWindow> merge_windows(const std::vector<std::string>& sentences,
                                        const std::vector<RankedMatch>& matches, int m);

struct RetrievalOutcome {
  std::vector<EvidencePassage> passages;  // ranked 1..n, at most top_n_results
  std::vector<RetrievalIssue> issues;     // one per url that produced nothing
  ClaimStatus status = ClaimStatus::ok;
};

/// Search, fetch, extract, rank, window, merge, cap and tag. Per-url
/// failures (blocked, timeout, unreadable page, missing fixture) are
/// recorded in `issues` and never abort; a page without extractable text
/// falls back to its search snippet. A failed search leaves the claim
/// without evidence. ReplayMiss from search or embedding propagates.
RetrievalOutcome retrieve_evidence(const AtomicClaim& claim, const PipelineConfig& config,
                                   Providers& providers,
                                   sources::SourceCategorizer* categorizer = nullptr);

}  // namespace factcheck::retrieval
