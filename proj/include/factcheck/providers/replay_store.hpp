#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/providers/backend.hpp"

namespace factcheck {

struct ReplayEntry {
  RequestKind kind = RequestKind::chat;
  std::string key;
  nlohmann::json payload;
  nlohmann::json response;
};

/// Recorded provider responses keyed by request digest.
///
/// File format: JSON lines, one object per entry with the keys "key",
/// "kind", "payload" and "response", written compactly with sorted keys.
/// Concurrent lookups share a lock; inserts are serialized and, when a
/// journal file is attached, appended and flushed before put() returns.
class ReplayStore {
 public:
  ReplayStore() = default;
  ReplayStore(const ReplayStore&) = delete;
  ReplayStore& operator=(const ReplayStore&) = delete;

  /// Reads a fixture file. Throws DomainError on a malformed line or on a
  /// key that does not match its payload.
  static std::shared_ptr<ReplayStore> load(const std::filesystem::path& path);

  void merge_file(const std::filesystem::path& path);

  /// Appends every subsequent put() to `path`.
  void attach_journal(const std::filesystem::path& path);

  std::optional<nlohmann::json> find(const std::string& key) const;
  void put(ReplayEntry entry);
  std::size_t size() const;
  std::vector<ReplayEntry> entries() const;

  /// Writes all entries sorted by key (used to normalize committed fixtures).
  void write_sorted(const std::filesystem::path& path) const;

  static std::string entry_line(const ReplayEntry& entry);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, ReplayEntry> entries_;
  std::ofstream journal_;
};

}  // namespace factcheck
