#include "factcheck/pipeline/orchestrator.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "factcheck/claims/claim_generation.hpp"
#include "factcheck/core/canonical_json.hpp"
#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/judge/factuality_judge.hpp"
#include "factcheck/providers/digest.hpp"
#include "factcheck/retrieval/evidence_retrieval.hpp"
#include "factcheck/scoring/credibility.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::pipeline {

void parallel_for(std::size_t n, int parallelism, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, parallelism)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop = true;
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

template <typename F>
auto MonitoredProviders::track(F&& f) -> decltype(f()) {
  ++calls_;
  try {
    return f();
  } catch (const FetchBlocked&) {
    throw;
  } catch (const ProviderError&) {
    ++failures_;
    throw;
  }
}

std::string MonitoredProviders::chat_complete(std::string_view profile,
                                              const std::vector<ChatMessage>& messages) {
  return track([&] { return inner_.chat_complete(profile, messages); });
}

std::vector<std::vector<double>> MonitoredProviders::embed(const std::vector<std::string>& texts) {
  return track([&] { return inner_.embed(texts); });
}

std::vector<SearchResult> MonitoredProviders::search(std::string_view query, int top_n) {
  return track([&] { return inner_.search(query, top_n); });
}

std::string MonitoredProviders::fetch_page(std::string_view url) {
  return track([&] { return inner_.fetch_page(url); });
}

std::string deterministic_job_id(std::string_view text, const PipelineConfig& config) {
  return uuid_from_digest(
      sha256_hex(std::string(text) + "\n" + canonical_dump(to_json(config))));
}

namespace {

class Reporter {
 public:
  explicit Reporter(const std::function<void(const JobEvent&)>& observer) : observer_(observer) {}
  void operator()(const JobEvent& e) {
    if (!observer_) return;
    std::lock_guard lock(mutex_);
    observer_(e);
  }

 private:
  const std::function<void(const JobEvent&)>& observer_;
  std::mutex mutex_;
};

void check_outage(const MonitoredProviders& monitored, std::string_view stage) {
  if (monitored.calls() > 0 && monitored.failures() == monitored.calls()) {
    throw ProviderOutage("all " + std::to_string(monitored.calls()) +
                         " provider calls failed (during " + std::string(stage) + ")");
  }
}

}  // namespace

CredibilityReport run_verification(std::string_view text, const PipelineConfig& config,
                                   Providers& providers, const RunOptions& options) {
  config.validate();
  Reporter report_event(options.observer);
  report_event(events::Start{});

  const text::SegmentedText segmented = text::segment(text, config.max_paragraph_sentences);
  MonitoredProviders monitored(providers);
  sources::SourceCategorizer categorizer(monitored, config.llm_profile, options.category_cache);

  CredibilityReport report;
  report.job_id = options.job_id.empty() ? deterministic_job_id(text, config) : options.job_id;
  report.input_text = std::string(text);
  report.config = config;
  report.sentences = segmented.sentences;

  // Claims, one unit per sentence.
  const std::size_t n_sentences = report.sentences.size();
  report_event(events::Advance{JobState::generating_claims, static_cast<int>(n_sentences)});
  parallel_for(n_sentences, config.parallelism, [&](std::size_t i) {
    auto outcome =
        claims::generate_claims(segmented, static_cast<int>(i), monitored, config.llm_profile);
    auto& sentence = report.sentences[i];
    sentence.claims = std::move(outcome.claims);
    sentence.status = outcome.status;
    sentence.error = std::move(outcome.error);
    report_event(events::UnitComplete{});
  });
  check_outage(monitored, "claim generation");

  // Evidence, one unit per claim.
  std::vector<AtomicClaim*> claims;
  for (auto& s : report.sentences) {
    for (auto& c : s.claims) claims.push_back(&c);
  }
  std::vector<std::vector<EvidencePassage>> passages(claims.size());
  report_event(events::Advance{JobState::retrieving, static_cast<int>(claims.size())});
  parallel_for(claims.size(), config.parallelism, [&](std::size_t i) {
    auto outcome = retrieval::retrieve_evidence(*claims[i], config, monitored, &categorizer);
    claims[i]->status = outcome.status;
    claims[i]->retrieval_issues = std::move(outcome.issues);
    passages[i] = std::move(outcome.passages);
    report_event(events::UnitComplete{});
  });
  check_outage(monitored, "evidence retrieval");

  for (auto& s : report.sentences) {
    if (s.status != SentenceStatus::verified) continue;
    const bool any_evidence = std::any_of(s.claims.begin(), s.claims.end(), [](const auto& c) {
      return c.status == ClaimStatus::ok;
    });
    if (!any_evidence) {
      s.status = SentenceStatus::unverified;
      s.error = "no evidence retrieved for any claim";
    }
  }

  // Judgments, one unit per (claim, passage) pair.
  struct Pair {
    std::size_t claim;
    std::size_t passage;
  };
  std::vector<Pair> pairs;
  for (std::size_t c = 0; c < claims.size(); ++c) {
    for (std::size_t p = 0; p < passages[c].size(); ++p) pairs.push_back({c, p});
  }
  std::vector<Judgment> judgments(pairs.size());
  report_event(events::Advance{JobState::judging, static_cast<int>(pairs.size())});
  parallel_for(pairs.size(), config.parallelism, [&](std::size_t i) {
    const AtomicClaim& claim = *claims[pairs[i].claim];
    const auto& paragraph = segmented.paragraph_of(claim.sentence_index);
    judgments[i] = judge::judge_claim_evidence(claim, passages[pairs[i].claim][pairs[i].passage],
                                               segmented.paragraph_text(paragraph.index),
                                               monitored, config.llm_profile);
    report_event(events::UnitComplete{});
  });
  check_outage(monitored, "judgment");

  report_event(events::Advance{JobState::scoring, 1});
  for (auto& list : passages) {
    for (auto& p : list) report.evidence.push_back(std::move(p));
  }
  report.judgments = std::move(judgments);
  report.scores = scoring::compute_breakdown(report);
  canonicalize(report);
  report_event(events::UnitComplete{});

  spdlog::debug("job {}: {} provider calls, {} failed", report.job_id, monitored.calls(),
                monitored.failures());
  return report;
}

}  // namespace factcheck::pipeline
