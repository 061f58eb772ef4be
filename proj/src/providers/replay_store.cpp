#include "factcheck/providers/replay_store.hpp"

#include "factcheck/core/errors.hpp"

namespace factcheck {

using nlohmann::json;

std::shared_ptr<ReplayStore> ReplayStore::load(const std::filesystem::path& path) {
  auto store = std::make_shared<ReplayStore>();
  store->merge_file(path);
  return store;
}

void ReplayStore::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open fixture file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::unique_lock lock(mutex_);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    try {
      const json j = json::parse(line);
      ReplayEntry e;
      e.kind = parse_request_kind(j.at("kind").get<std::string>());
      e.key = j.at("key").get<std::string>();
      e.payload = j.at("payload");
      e.response = j.at("response");
      if (request_key(e.kind, e.payload) != e.key) {
        throw DomainError("key does not match payload digest");
      }
      entries_[e.key] = std::move(e);
    } catch (const json::exception& ex) {
      throw DomainError("malformed fixture line " + where + ": " + ex.what());
    } catch (const DomainError& ex) {
      throw DomainError("malformed fixture line " + where + ": " + ex.what());
    }
  }
}

void ReplayStore::attach_journal(const std::filesystem::path& path) {
  std::unique_lock lock(mutex_);
  journal_.close();
  journal_.open(path, std::ios::app);
  if (!journal_) throw DomainError("cannot open fixture file for append: " + path.string());
}

std::optional<json> ReplayStore::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return std::optional<json>(std::in_place, it->second.response);
}

void ReplayStore::put(ReplayEntry entry) {
  std::unique_lock lock(mutex_);
  if (journal_.is_open()) {
    journal_ << entry_line(entry) << '\n';
    journal_.flush();
  }
  auto key = entry.key;
  entries_[key] = std::move(entry);
}

std::size_t ReplayStore::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<ReplayEntry> ReplayStore::entries() const {
  std::shared_lock lock(mutex_);
  std::vector<ReplayEntry> out;
  out.reserve(entries_.size());
  for (const auto& [_, e] : entries_) out.push_back(e);
  return out;
}

void ReplayStore::write_sorted(const std::filesystem::path& path) const {
  const auto all = entries();
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw DomainError("cannot write fixture file " + tmp);
    for (const auto& e : all) out << entry_line(e) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::string ReplayStore::entry_line(const ReplayEntry& e) {
  const json j{{"kind", to_string(e.kind)},
               {"key", e.key},
               {"payload", e.payload},
               {"response", e.response}};
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace factcheck
