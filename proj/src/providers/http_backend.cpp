#include "factcheck/providers/http_backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "factcheck/core/errors.hpp"

namespace factcheck {

using nlohmann::json;

namespace {

std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : std::move(fallback);
}

std::string trim_slash(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

void check_status(const HttpResponse& r, const std::string& what) {
  if (r.status == 429) throw RateLimited(what + " rate limited (HTTP 429)");
  if (r.status >= 500) throw TransportError(what + " failed with HTTP " + std::to_string(r.status));
  if (r.status < 200 || r.status >= 300) {
    throw ProviderError(what + " rejected with HTTP " + std::to_string(r.status) + ": " +
                        r.body.substr(0, 300));
  }
}

json parse_body(const HttpResponse& r, const std::string& what) {
  try {
    return json::parse(r.body);
  } catch (const json::parse_error&) {
    throw TransportError(what + " returned a non-JSON body");
  }
}

}  // namespace

ProviderSettings ProviderSettings::from_environment(
    const std::optional<std::filesystem::path>& settings_file) {
  ProviderSettings s;
  const std::string llm_base = env_or("LLM_BASE_URL", "https://api.openai.com/v1");
  s.llm_api_key = env_or("LLM_API_KEY");
  s.chat_profiles["default"] = {llm_base, env_or("LLM_MODEL")};
  s.chat_profiles["alt"] = {llm_base, env_or("LLM_ALT_MODEL")};
  s.embed_base_url = env_or("EMBED_BASE_URL", llm_base);
  s.embed_model = env_or("EMBED_MODEL");
  s.embed_api_key = env_or("EMBED_API_KEY", s.llm_api_key);
  s.search_api_key = env_or("SEARCH_API_KEY");
  s.search_base_url = env_or("SEARCH_BASE_URL", s.search_base_url);

  if (settings_file) {
    std::ifstream in(*settings_file);
    if (!in) throw ConfigError("cannot open provider settings " + settings_file->string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("provider settings are not valid JSON: " + std::string(e.what()));
    }
    if (j.contains("chat_profiles")) {
      for (const auto& [name, p] : j["chat_profiles"].items()) {
        ChatProfile profile{p.value("base_url", llm_base), p.value("model", "")};
        s.chat_profiles[name] = profile;
      }
    }
    if (j.contains("embedding")) {
      s.embed_base_url = j["embedding"].value("base_url", s.embed_base_url);
      s.embed_model = j["embedding"].value("model", s.embed_model);
    }
    if (j.contains("search")) {
      s.search_base_url = j["search"].value("base_url", s.search_base_url);
    }
    s.seed = j.value("seed", s.seed);
  }
  return s;
}

HttpBackend::HttpBackend(ProviderSettings settings, std::shared_ptr<HttpTransport> transport)
    : settings_(std::move(settings)), transport_(std::move(transport)) {
  if (!transport_) throw DomainError("HttpBackend needs a transport");
}

json HttpBackend::execute(const ProviderRequest& request) {
  switch (request.kind) {
    case RequestKind::chat: return chat(request.payload);
    case RequestKind::embed: return embed(request.payload);
    case RequestKind::search: return search(request.payload);
    case RequestKind::fetch: return fetch(request.payload);
  }
  throw DomainError("unknown request kind");
}

HttpResponse HttpBackend::post_json(const std::string& url, const json& body,
                                    std::vector<std::pair<std::string, std::string>> headers) {
  HttpRequest req;
  req.method = "POST";
  req.url = url;
  req.headers = std::move(headers);
  req.body = body.dump();
  req.timeout = settings_.request_timeout;
  return transport_->send(req);
}

json HttpBackend::chat(const json& payload) {
  const auto profile_name = payload.at("profile").get<std::string>();
  auto it = settings_.chat_profiles.find(profile_name);
  if (it == settings_.chat_profiles.end() || it->second.model.empty()) {
    throw ProviderError("chat profile '" + profile_name + "' has no model configured");
  }
  json body{{"model", it->second.model},
            {"messages", payload.at("messages")},
            {"temperature", 0},
            {"seed", settings_.seed}};
  const auto r = post_json(trim_slash(it->second.base_url) + "/chat/completions", body,
                           {{"Authorization", "Bearer " + settings_.llm_api_key}});
  check_status(r, "chat completion");
  const json j = parse_body(r, "chat completion");
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    return json{{"content", content.is_null() ? std::string() : content.get<std::string>()}};
  } catch (const json::exception&) {
    throw TransportError("chat completion response has no choices[0].message.content");
  }
}

json HttpBackend::embed(const json& payload) {
  if (settings_.embed_model.empty()) throw ProviderError("no embedding model configured");
  json body{{"model", settings_.embed_model}, {"input", payload.at("input")}};
  const auto r = post_json(trim_slash(settings_.embed_base_url) + "/embeddings", body,
                           {{"Authorization", "Bearer " + settings_.embed_api_key}});
  check_status(r, "embedding");
  const json j = parse_body(r, "embedding");
  try {
    std::vector<std::pair<int, json>> rows;
    int position = 0;
    for (const auto& item : j.at("data")) {
      rows.emplace_back(item.value("index", position++), item.at("embedding"));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    json vectors = json::array();
    for (auto& [_, v] : rows) vectors.push_back(std::move(v));
    return json{{"embeddings", std::move(vectors)}};
  } catch (const json::exception&) {
    throw TransportError("embedding response has no data[].embedding");
  }
}

json HttpBackend::search(const json& payload) {
  json body{{"q", payload.at("query")}, {"num", payload.at("num")}};
  const auto r = post_json(trim_slash(settings_.search_base_url) + "/search", body,
                           {{"X-API-KEY", settings_.search_api_key}});
  check_status(r, "search");
  const json j = parse_body(r, "search");
  json results = json::array();
  if (j.contains("organic")) {
    for (const auto& item : j["organic"]) {
      std::string url = item.value("link", "");
      if (url.empty()) url = item.value("url", "");
      results.push_back(
          {{"url", url}, {"title", item.value("title", "")}, {"snippet", item.value("snippet", "")}});
    }
  }
  return json{{"results", std::move(results)}};
}

json HttpBackend::fetch(const json& payload) {
  HttpRequest req;
  req.method = "GET";
  req.url = payload.at("url").get<std::string>();
  req.headers = {{"User-Agent", settings_.user_agent}, {"Accept", "text/html,text/plain"}};
  req.timeout = settings_.fetch_timeout;
  req.max_body_bytes = settings_.max_page_bytes;
  const auto r = transport_->send(req);
  if (r.status >= 500 || r.status == 429) {
    throw TransportError("fetch " + req.url + " failed with HTTP " + std::to_string(r.status));
  }
  if (r.status >= 400) return json{{"status", r.status}};
  return json{{"status", r.status}, {"body", r.body}};
}

}  // namespace factcheck
