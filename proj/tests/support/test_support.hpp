#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/providers/gateway.hpp"
#include "factcheck/providers/providers.hpp"
#include "factcheck/scoring/credibility.hpp"

namespace factcheck::testing {

std::filesystem::path fixtures_dir();
std::filesystem::path java_tea_dir();
std::filesystem::path mini_eval_dir();
std::string read_text(const std::filesystem::path& path);
PipelineConfig load_config_file(const std::filesystem::path& path);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string out;  // stdout only
};

/// Runs `command` through the shell and captures its stdout.
CommandResult run_command(const std::string& command);

/// Single-quotes `s` for the shell.
std::string shell_quote(const std::string& s);

/// Replay-only gateway over a fixture file; misses throw ReplayMiss.
std::shared_ptr<Gateway> replay_gateway(const std::filesystem::path& fixtures);

/// Providers assembled from callbacks; unset callbacks throw ProviderError.
class ScriptedProviders : public Providers {
 public:
  std::function<std::string(std::string_view, const std::vector<ChatMessage>&)> on_chat;
  std::function<std::vector<std::vector<double>>(const std::vector<std::string>&)> on_embed;
  std::function<std::vector<SearchResult>(std::string_view, int)> on_search;
  std::function<std::string(std::string_view)> on_fetch;

  std::string chat_complete(std::string_view profile,
                            const std::vector<ChatMessage>& messages) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::vector<SearchResult> search(std::string_view query, int top_n) override;
  std::string fetch_page(std::string_view url) override;
  ProviderMode mode() const override { return ProviderMode::live; }

  std::atomic<int> chat_calls{0};
  std::atomic<int> fetch_calls{0};
};

/// Forwards to `inner` but answers fetches of the listed urls with
/// FetchBlocked(403).
class BlockingProviders : public Providers {
 public:
  BlockingProviders(Providers& inner, std::set<std::string> blocked)
      : inner_(inner), blocked_(std::move(blocked)) {}

  std::string chat_complete(std::string_view profile,
                            const std::vector<ChatMessage>& messages) override {
    return inner_.chat_complete(profile, messages);
  }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
    return inner_.embed(texts);
  }
  std::vector<SearchResult> search(std::string_view query, int top_n) override {
    return inner_.search(query, top_n);
  }
  std::string fetch_page(std::string_view url) override;
  ProviderMode mode() const override { return inner_.mode(); }

 private:
  Providers& inner_;
  std::set<std::string> blocked_;
};

// Independent reference implementations used as oracles.

/// Okapi BM25 computed term by term straight from the formula.
std::vector<double> bm25_oracle(const std::vector<std::string>& query_terms,
                                const std::vector<std::vector<std::string>>& docs,
                                double k1 = 1.2, double b = 0.75);

/// Recounts a report's stored judgments under a mask without touching the
/// scoring module.
ScoreBreakdown recount_oracle(const CredibilityReport& report,
                              const scoring::SelectionMask& mask);

/// Structurally valid random report (scores filled by compute_breakdown).
CredibilityReport random_report(std::mt19937_64& rng);
scoring::SelectionMask random_mask(const CredibilityReport& report, std::mt19937_64& rng);

/// Random printable/UTF-8/control byte string biased toward parser keywords.
std::string fuzz_string(std::mt19937_64& rng);

}  // namespace factcheck::testing
