#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "factcheck/providers/backend.hpp"
#include "factcheck/providers/providers.hpp"
#include "factcheck/providers/replay_store.hpp"

namespace factcheck {

struct GatewayOptions {
  ProviderMode mode = ProviderMode::replay;
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{500};  // doubled after each attempt
  int per_host_fetch_limit = 2;
  std::string embed_profile = "default";
  std::size_t embed_batch_size = 64;
};

/// Providers backed by a replay store and an optional backend.
///
/// Every request is looked up in the store first. In replay mode a miss
/// throws ReplayMiss and the backend is never touched. In live and record
/// mode a miss goes to the backend (retrying transport failures with
/// exponential backoff) and the response is stored; record mode stores
/// with a journal attached so the fixture file grows as the run proceeds.
/// Identical requests in flight at the same time share one backend call.
class Gateway final : public Providers {
 public:
  Gateway(GatewayOptions options, std::shared_ptr<ReplayStore> store,
          std::shared_ptr<Backend> backend);

  std::string chat_complete(std::string_view profile,
                            const std::vector<ChatMessage>& messages) override;
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::vector<SearchResult> search(std::string_view query, int top_n) override;
  std::string fetch_page(std::string_view url) override;
  ProviderMode mode() const override { return options_.mode; }

  /// Number of requests that reached the backend.
  std::size_t backend_calls() const { return backend_calls_.load(); }
  ReplayStore& store() { return *store_; }

  static nlohmann::json chat_payload(std::string_view profile,
                                     const std::vector<ChatMessage>& messages);
  static nlohmann::json embed_payload(std::string_view profile,
                                      const std::vector<std::string>& texts);
  static nlohmann::json search_payload(std::string_view query, int top_n);
  static nlohmann::json fetch_payload(std::string_view url);

 private:
  class HostLimiter {
   public:
    explicit HostLimiter(int limit) : limit_(limit) {}
    void acquire(const std::string& host);
    void release(const std::string& host);

   private:
    int limit_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::map<std::string, int> active_;
  };

  nlohmann::json resolve(const ProviderRequest& request, const std::string& fetch_host = {});
  nlohmann::json call_backend(const ProviderRequest& request, const std::string& fetch_host);

  GatewayOptions options_;
  std::shared_ptr<ReplayStore> store_;
  std::shared_ptr<Backend> backend_;
  HostLimiter host_limiter_;
  std::atomic<std::size_t> backend_calls_{0};
  std::mutex inflight_mutex_;
  std::map<std::string, std::shared_future<nlohmann::json>> inflight_;
};

/// Scales `v` to unit length; a zero vector is returned unchanged.
std::vector<double> normalized(std::vector<double> v);

}  // namespace factcheck
