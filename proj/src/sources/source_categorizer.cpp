#include "factcheck/sources/source_categorizer.hpp"

#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "factcheck/core/errors.hpp"
#include "factcheck/prompts/prompt_assets.hpp"
#include "factcheck/providers/url.hpp"

namespace factcheck::sources {

namespace fs = std::filesystem;

std::string extract_hostname(std::string_view url) { return parse_url(url).host; }

std::optional<SourceCategory> match_category(std::string_view answer) {
  std::string s;
  for (char c : answer) {
    if (c == '"' || c == '\'' || c == '`') continue;
    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return std::nullopt;
  s = s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
  while (!s.empty() && (s.back() == '.' || s.back() == ',')) s.pop_back();
  for (auto& c : s) {
    if (c == ' ' || c == '-' || c == '/') c = '_';
  }
  if (s == "etc") return SourceCategory::other;
  for (SourceCategory c : kAllCategories) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

SourceCategory normalize_category(std::string_view answer) {
  return match_category(answer).value_or(SourceCategory::other);
}

std::vector<ChatMessage> build_category_prompt(std::string_view hostname) {
  return {{"user", prompts::render(prompts::asset(prompts::kCategorizeSource),
                                   {{"hostname", std::string(hostname)}})}};
}

CategoryCache::CategoryCache(fs::path file) : file_(std::move(file)) {
  if (!fs::exists(*file_)) return;
  std::ifstream in(*file_);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("category cache " + file_->string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("category cache must be a JSON object");
  for (const auto& [host, value] : j.items()) {
    entries_[host] = parse_category(value.get<std::string>());
  }
}

std::optional<SourceCategory> CategoryCache::get(std::string_view hostname) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(hostname);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CategoryCache::put(const std::string& hostname, SourceCategory category) {
  std::unique_lock lock(mutex_);
  entries_[hostname] = category;
  if (file_) persist_locked();
}

std::map<std::string, SourceCategory> CategoryCache::snapshot() const {
  std::shared_lock lock(mutex_);
  return {entries_.begin(), entries_.end()};
}

void CategoryCache::persist_locked() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [host, category] : entries_) j[host] = to_string(category);
  const fs::path tmp = file_->string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write category cache " + tmp.string());
    out << j.dump(2) << '\n';
  }
  fs::rename(tmp, *file_);
}

SourceCategorizer::SourceCategorizer(Providers& llm, std::string profile,
                                     std::shared_ptr<CategoryCache> cache)
    : llm_(llm),
      profile_(std::move(profile)),
      cache_(cache ? std::move(cache) : std::make_shared<CategoryCache>()) {}

CategoryResult SourceCategorizer::categorize(std::string_view hostname_in) {
  if (hostname_in.empty()) throw DomainError("hostname must be non-empty");
  std::string hostname(hostname_in);
  for (auto& c : hostname) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (auto hit = cache_->get(hostname)) return {*hit, false};

  std::promise<CategoryResult> promise;
  {
    std::unique_lock lock(inflight_mutex_);
    if (auto it = inflight_.find(hostname); it != inflight_.end()) {
      auto shared = it->second;
      lock.unlock();
      return shared.get();
    }
    if (auto hit = cache_->get(hostname)) return {*hit, false};
    inflight_.emplace(hostname, promise.get_future().share());
  }
  auto finish = [&] {
    std::lock_guard lock(inflight_mutex_);
    inflight_.erase(hostname);
  };
  try {
    CategoryResult result = ask(hostname);
    promise.set_value(result);
    finish();
    return result;
  } catch (...) {
    promise.set_exception(std::current_exception());
    finish();
    throw;
  }
}

CategoryResult SourceCategorizer::ask(const std::string& hostname) {
  try {
    const std::string answer = llm_.chat_complete(profile_, build_category_prompt(hostname));
    const SourceCategory category = normalize_category(answer);
    cache_->put(hostname, category);
    return {category, false};
  } catch (const ReplayMiss&) {
    throw;
  } catch (const ProviderError& e) {
    spdlog::warn("categorizing {} failed, using other: {}", hostname, e.what());
    return {SourceCategory::other, true};
  }
}

}  // namespace factcheck::sources
