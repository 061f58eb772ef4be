#include "factcheck/providers/gateway.hpp"

#include <cmath>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "factcheck/core/errors.hpp"
#include "factcheck/providers/digest.hpp"
#include "factcheck/providers/url.hpp"

namespace factcheck {

using nlohmann::json;

std::string_view to_string(ProviderMode mode) {
  switch (mode) {
    case ProviderMode::live: return "live";
    case ProviderMode::record: return "record";
    case ProviderMode::replay: return "replay";
  }
  return "?";
}

ProviderMode parse_provider_mode(std::string_view s) {
  if (s == "live") return ProviderMode::live;
  if (s == "record") return ProviderMode::record;
  if (s == "replay") return ProviderMode::replay;
  throw DomainError("unknown provider mode '" + std::string(s) + "'");
}

std::string_view to_string(RequestKind kind) {
  switch (kind) {
    case RequestKind::chat: return "chat";
    case RequestKind::embed: return "embed";
    case RequestKind::search: return "search";
    case RequestKind::fetch: return "fetch";
  }
  return "?";
}

RequestKind parse_request_kind(std::string_view s) {
  if (s == "chat") return RequestKind::chat;
  if (s == "embed") return RequestKind::embed;
  if (s == "search") return RequestKind::search;
  if (s == "fetch") return RequestKind::fetch;
  throw DomainError("unknown request kind '" + std::string(s) + "'");
}

std::string request_key(RequestKind kind, const json& payload) {
  return sha256_hex(std::string(to_string(kind)) + "\n" +
                    payload.dump(-1, ' ', false, json::error_handler_t::replace));
}

ProviderRequest ProviderRequest::make(RequestKind kind, json payload) {
  ProviderRequest r;
  r.kind = kind;
  r.key = request_key(kind, payload);
  r.payload = std::move(payload);
  return r;
}

std::vector<double> normalized(std::vector<double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

void Gateway::HostLimiter::acquire(const std::string& host) {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return active_[host] < limit_; });
  ++active_[host];
}

void Gateway::HostLimiter::release(const std::string& host) {
  {
    std::lock_guard lock(mutex_);
    if (--active_[host] == 0) active_.erase(host);
  }
  cv_.notify_all();
}

Gateway::Gateway(GatewayOptions options, std::shared_ptr<ReplayStore> store,
                 std::shared_ptr<Backend> backend)
    : options_(std::move(options)),
      store_(store ? std::move(store) : std::make_shared<ReplayStore>()),
      backend_(std::move(backend)),
      host_limiter_(std::max(1, options_.per_host_fetch_limit)) {}

json Gateway::chat_payload(std::string_view profile, const std::vector<ChatMessage>& messages) {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  return json{{"profile", profile}, {"messages", std::move(msgs)}, {"temperature", 0}};
}

json Gateway::embed_payload(std::string_view profile, const std::vector<std::string>& texts) {
  return json{{"profile", profile}, {"input", texts}};
}

json Gateway::search_payload(std::string_view query, int top_n) {
  return json{{"query", query}, {"num", top_n}};
}

json Gateway::fetch_payload(std::string_view url) { return json{{"url", url}}; }

json Gateway::call_backend(const ProviderRequest& request, const std::string& fetch_host) {
  if (!backend_) {
    throw ProviderError("no provider backend configured for " + std::string(to_string(mode())) +
                        " mode");
  }
  for (int attempt = 0;; ++attempt) {
    try {
      if (!fetch_host.empty()) host_limiter_.acquire(fetch_host);
      struct Release {
        HostLimiter& limiter;
        const std::string& host;
        ~Release() {
          if (!host.empty()) limiter.release(host);
        }
      } release{host_limiter_, fetch_host};
      ++backend_calls_;
      return backend_->execute(request);
    } catch (const TransportError& e) {
      if (attempt >= options_.max_retries) throw;
      const auto delay = options_.retry_backoff * (1 << attempt);
      spdlog::warn("{} request failed ({}), retrying in {} ms", to_string(request.kind), e.what(),
                   delay.count());
      std::this_thread::sleep_for(delay);
    }
  }
}

json Gateway::resolve(const ProviderRequest& request, const std::string& fetch_host) {
  if (auto hit = store_->find(request.key)) return *hit;
  if (options_.mode == ProviderMode::replay) {
    throw ReplayMiss(std::string(to_string(request.kind)), request.key);
  }

  std::promise<json> promise;
  {
    std::unique_lock lock(inflight_mutex_);
    if (auto it = inflight_.find(request.key); it != inflight_.end()) {
      auto shared = it->second;
      lock.unlock();
      return shared.get();
    }
    // Re-check: another caller may have finished between find() and lock.
    if (auto hit = store_->find(request.key)) return *hit;
    inflight_.emplace(request.key, promise.get_future().share());
  }

  try {
    json response = call_backend(request, fetch_host);
    store_->put({request.kind, request.key, request.payload, response});
    promise.set_value(response);
    std::lock_guard lock(inflight_mutex_);
    inflight_.erase(request.key);
    return response;
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard lock(inflight_mutex_);
    inflight_.erase(request.key);
    throw;
  }
}

std::string Gateway::chat_complete(std::string_view profile,
                                   const std::vector<ChatMessage>& messages) {
  if (profile.empty()) throw DomainError("chat profile must be non-empty");
  if (messages.empty()) throw DomainError("chat request needs at least one message");
  const auto response =
      resolve(ProviderRequest::make(RequestKind::chat, chat_payload(profile, messages)));
  return response.at("content").get<std::string>();
}

std::vector<std::vector<double>> Gateway::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw DomainError("embed needs at least one text");
  for (const auto& t : texts) {
    if (t.empty()) throw DomainError("embed texts must be non-empty");
  }
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  const std::size_t batch = std::max<std::size_t>(1, options_.embed_batch_size);
  for (std::size_t begin = 0; begin < texts.size(); begin += batch) {
    const std::size_t end = std::min(texts.size(), begin + batch);
    std::vector<std::string> slice(texts.begin() + begin, texts.begin() + end);
    const auto response = resolve(ProviderRequest::make(
        RequestKind::embed, embed_payload(options_.embed_profile, slice)));
    const auto& vectors = response.at("embeddings");
    if (vectors.size() != slice.size()) {
      throw ProviderError("embedding count mismatch: sent " + std::to_string(slice.size()) +
                          ", got " + std::to_string(vectors.size()));
    }
    for (const auto& v : vectors) out.push_back(normalized(v.get<std::vector<double>>()));
  }
  for (const auto& v : out) {
    if (v.size() != out.front().size()) throw ProviderError("embedding dimensions differ");
  }
  return out;
}

std::vector<SearchResult> Gateway::search(std::string_view query, int top_n) {
  if (query.empty()) throw DomainError("search query must be non-empty");
  if (top_n < 1) throw DomainError("top_n must be >= 1");
  const auto response =
      resolve(ProviderRequest::make(RequestKind::search, search_payload(query, top_n)));
  std::vector<SearchResult> results;
  std::set<std::string> seen;
  for (const auto& r : response.at("results")) {
    SearchResult item{r.value("url", ""), r.value("title", ""), r.value("snippet", "")};
    if (item.url.empty() || !seen.insert(item.url).second) continue;
    results.push_back(std::move(item));
    if (static_cast<int>(results.size()) == top_n) break;
  }
  return results;
}

std::string Gateway::fetch_page(std::string_view url) {
  const ParsedUrl parsed = parse_url(url);
  const auto response =
      resolve(ProviderRequest::make(RequestKind::fetch, fetch_payload(url)), parsed.host);
  const int status = response.at("status").get<int>();
  if (status >= 400) throw FetchBlocked(std::string(url), status);
  return response.value("body", "");
}

}  // namespace factcheck
