#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "factcheck/providers/backend.hpp"
#include "factcheck/providers/http_transport.hpp"

namespace factcheck {

struct ChatProfile {
  std::string base_url;  // e.g. https://host/v1 ; "/chat/completions" is appended
  std::string model;
};

/// Endpoint configuration for the live backend. The engine only knows
/// profile names; which hosted model a profile maps to lives here.
struct ProviderSettings {
  std::map<std::string, ChatProfile> chat_profiles;
  std::string llm_api_key;
  std::string embed_base_url;  // "/embeddings" is appended
  std::string embed_model;
  std::string embed_api_key;
  std::string search_base_url = "https://google.serper.dev";  // "/search" is appended
  std::string search_api_key;
  int seed = 0;
  std::chrono::milliseconds request_timeout{60000};
  std::chrono::milliseconds fetch_timeout{10000};
  std::size_t max_page_bytes = 2 * 1024 * 1024;
  std::string user_agent = "factcheck/1.0 (+evidence retrieval)";

  /// Reads LLM_API_KEY, LLM_BASE_URL, LLM_MODEL, LLM_ALT_MODEL,
  /// EMBED_BASE_URL, EMBED_MODEL, EMBED_API_KEY, SEARCH_API_KEY and
  /// SEARCH_BASE_URL, then applies the optional JSON settings file on top.
  static ProviderSettings from_environment(
      const std::optional<std::filesystem::path>& settings_file = std::nullopt);
};

/// Live backend speaking the common chat-completions / embeddings JSON
/// schemas, a search endpoint returning an "organic" array, and plain GET
/// for pages.
class HttpBackend final : public Backend {
 public:
  HttpBackend(ProviderSettings settings, std::shared_ptr<HttpTransport> transport);

  nlohmann::json execute(const ProviderRequest& request) override;

 private:
  nlohmann::json chat(const nlohmann::json& payload);
  nlohmann::json embed(const nlohmann::json& payload);
  nlohmann::json search(const nlohmann::json& payload);
  nlohmann::json fetch(const nlohmann::json& payload);
  HttpResponse post_json(const std::string& url, const nlohmann::json& body,
                         std::vector<std::pair<std::string, std::string>> headers);

  ProviderSettings settings_;
  std::shared_ptr<HttpTransport> transport_;
};

}  // namespace factcheck
