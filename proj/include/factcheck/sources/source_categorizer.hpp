#pragma once

#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/providers/providers.hpp"

namespace factcheck::sources {

/// Lowercase host of an absolute http(s) url, without port. Throws
/// DomainError for anything else.
std::string extract_hostname(std::string_view url);

/// Maps a model answer to a category: trims, lowercases, drops quotes and a
/// trailing period, turns spaces, hyphens and slashes into underscores, then
/// matches the seven names ("etc" means other). nullopt if nothing matches.
std::optional<SourceCategory> match_category(std::string_view answer);

/// match_category, with other for unmatchable answers.
SourceCategory normalize_category(std::string_view answer);

std::vector<ChatMessage> build_category_prompt(std::string_view hostname);

/// hostname -> category, optionally persisted as a JSON object file that is
/// rewritten atomically (temp file + rename) after every insert.
class CategoryCache {
 public:
  CategoryCache() = default;
  explicit CategoryCache(std::filesystem::path file);

  std::optional<SourceCategory> get(std::string_view hostname) const;
  void put(const std::string& hostname, SourceCategory category);
  std::map<std::string, SourceCategory> snapshot() const;

 private:
  void persist_locked() const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, SourceCategory, std::less<>> entries_;
  std::optional<std::filesystem::path> file_;
};

struct CategoryResult {
  SourceCategory category = SourceCategory::other;
  bool fallback = false;  // provider failed; not cached

  bool operator==(const CategoryResult&) const = default;
};

/// Cached zero-shot categorization with at most one provider call in flight
/// per hostname. Provider failures give other with `fallback` set;
/// ReplayMiss propagates.
class SourceCategorizer {
 public:
  SourceCategorizer(Providers& llm, std::string profile, std::shared_ptr<CategoryCache> cache);

  CategoryResult categorize(std::string_view hostname);

 private:
  CategoryResult ask(const std::string& hostname);

  Providers& llm_;
  std::string profile_;
  std::shared_ptr<CategoryCache> cache_;
  std::mutex inflight_mutex_;
  std::map<std::string, std::shared_future<CategoryResult>> inflight_;
};

}  // namespace factcheck::sources
