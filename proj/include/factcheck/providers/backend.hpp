#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace factcheck {

enum class RequestKind { chat, embed, search, fetch };

std::string_view to_string(RequestKind kind);
RequestKind parse_request_kind(std::string_view s);

/// A provider call reduced to data. The key is the SHA-256 of the kind and
/// the compact sorted-key payload, so it does not depend on field order or
/// whitespace in the original request.
struct ProviderRequest {
  RequestKind kind = RequestKind::chat;
  nlohmann::json payload;
  std::string key;

  static ProviderRequest make(RequestKind kind, nlohmann::json payload);
};

std::string request_key(RequestKind kind, const nlohmann::json& payload);

/// Executes requests against something real (HTTP) or simulated. Responses
/// use the recorded-response schema:
///   chat   {"content": string}
///   embed  {"embeddings": [[number...]...]}
///   search {"results": [{"url","title","snippet"}...]}
///   fetch  {"status": int, "body": string}   (body omitted for status >= 400)
/// Retryable failures throw TransportError (or RateLimited, FetchTimeout).
class Backend {
 public:
  virtual ~Backend() = default;
  virtual nlohmann::json execute(const ProviderRequest& request) = 0;
};

}  // namespace factcheck
