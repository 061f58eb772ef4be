#pragma once

#include <string>
#include <string_view>

namespace factcheck {

struct ParsedUrl {
  std::string scheme;  // "http" or "https", lowercase
  std::string host;    // lowercase, no port
  int port = 0;        // explicit or scheme default
  std::string target;  // path + query, at least "/"

  /// scheme://host[:port] for connecting.
  std::string origin() const;
};

/// Parses an absolute http(s) URL. Throws DomainError otherwise.
ParsedUrl parse_url(std::string_view url);

bool is_http_url(std::string_view url);

}  // namespace factcheck
