#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "factcheck/core/types.hpp"
#include "factcheck/pipeline/job.hpp"
#include "factcheck/providers/providers.hpp"
#include "factcheck/sources/source_categorizer.hpp"

namespace factcheck::pipeline {

/// Runs `body(i)` for i in [0, n) on up to `parallelism` threads. The first
/// exception stops further work and is rethrown once all threads joined.
void parallel_for(std::size_t n, int parallelism, const std::function<void(std::size_t)>& body);

/// Providers wrapper that counts calls and failed calls. A failure is any
/// provider error other than a refused page (FetchBlocked), which is a real
/// answer from a reachable service.
class MonitoredProviders final : public Providers {
 public:
  explicit MonitoredProviders(Providers& inner) : inner_(inner) {}

  std::string chat_complete(std::string_view profile,
                            const std::vector<ChatMessage>& messages) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::vector<SearchResult> search(std::string_view query, int top_n) override;
  std::string fetch_page(std::string_view url) override;
  ProviderMode mode() const override { return inner_.mode(); }

  std::size_t calls() const { return calls_.load(); }
  std::size_t failures() const { return failures_.load(); }

 private:
  template <typename F>
  auto track(F&& f) -> decltype(f());

  Providers& inner_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> failures_{0};
};

struct RunOptions {
  std::string job_id;  // empty: derived from text and config
  std::shared_ptr<sources::CategoryCache> category_cache;
  /// Receives lifecycle events in order (Start, Advance, UnitComplete...).
  /// Calls are serialized. Finish and Fail are left to the caller.
  std::function<void(const JobEvent&)> observer;
};

/// UUID-shaped id derived from the SHA-256 of the text and canonical config.
std::string deterministic_job_id(std::string_view text, const PipelineConfig& config);

/// Segmentation, claim generation, retrieval with categorization, judgment
/// and scoring. Unit failures degrade that unit only. Throws EmptyInput,
/// ConfigError, ProviderOutage when every provider call failed, and
/// ReplayMiss when a replay fixture lacks a chat, search or embedding entry.
CredibilityReport run_verification(std::string_view text, const PipelineConfig& config,
                                   Providers& providers, const RunOptions& options = {});

}  // namespace factcheck::pipeline
