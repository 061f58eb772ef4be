#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace factcheck {

struct HttpRequest {
  std::string method = "GET";  // GET or POST
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::string content_type = "application/json";
  std::chrono::milliseconds timeout{60000};
  std::size_t max_body_bytes = 0;  // 0 = unlimited; larger bodies are truncated
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Raw HTTP. Connection failures throw TransportError, timeouts FetchTimeout.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// cpp-httplib client (HTTPS via OpenSSL), following redirects.
class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override;
};

/// Counts requests and forwards them, or refuses them when no inner
/// transport is given. Used to prove replay runs stay offline.
class CountingTransport final : public HttpTransport {
 public:
  explicit CountingTransport(std::shared_ptr<HttpTransport> inner = nullptr)
      : inner_(std::move(inner)) {}
  HttpResponse send(const HttpRequest& request) override;
  std::size_t count() const { return count_.load(); }

 private:
  std::shared_ptr<HttpTransport> inner_;
  std::atomic<std::size_t> count_{0};
};

}  // namespace factcheck
