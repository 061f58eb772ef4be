#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace factcheck {

enum class ProviderMode { live, record, replay };

std::string_view to_string(ProviderMode mode);
ProviderMode parse_provider_mode(std::string_view s);

struct ChatMessage {
  std::string role;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct SearchResult {
  std::string url;
  std::string title;
  std::string snippet;

  bool operator==(const SearchResult&) const = default;
};

/// The four external capabilities the pipeline consumes. Implementations
/// must be safe to call from several threads at once.
class Providers {
 public:
  virtual ~Providers() = default;

  /// Assistant text for `messages` under the named chat profile.
  virtual std::string chat_complete(std::string_view profile,
                                    const std::vector<ChatMessage>& messages) = 0;
  /// One unit-normalized vector per text, all of the same dimension.
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
  /// At most `top_n` results, unique by url, in provider order.
  virtual std::vector<SearchResult> search(std::string_view query, int top_n) = 0;
  /// Page body. Throws FetchBlocked, FetchTimeout, TransportError or ReplayMiss.
  virtual std::string fetch_page(std::string_view url) = 0;

  virtual ProviderMode mode() const = 0;
};

}  // namespace factcheck
