#include "factcheck/providers/url.hpp"

#include <algorithm>
#include <cctype>

#include "factcheck/core/errors.hpp"

namespace factcheck {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool valid_host_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_';
}

}  // namespace

std::string ParsedUrl::origin() const {
  const bool default_port = (scheme == "http" && port == 80) || (scheme == "https" && port == 443);
  return scheme + "://" + host + (default_port ? "" : ":" + std::to_string(port));
}

ParsedUrl parse_url(std::string_view url) {
  const auto bad = [&](const char* why) {
    return DomainError("invalid url '" + std::string(url) + "': " + why);
  };
  const auto sep = url.find("://");
  if (sep == std::string_view::npos) throw bad("missing scheme");
  ParsedUrl out;
  out.scheme = lower(url.substr(0, sep));
  if (out.scheme != "http" && out.scheme != "https") throw bad("scheme must be http or https");

  std::string_view rest = url.substr(sep + 3);
  const auto authority_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, authority_end);
  std::string_view tail =
      authority_end == std::string_view::npos ? std::string_view{} : rest.substr(authority_end);

  if (auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  std::string_view host = authority;
  out.port = out.scheme == "https" ? 443 : 80;
  if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    const std::string_view port = authority.substr(colon + 1);
    if (!port.empty()) {
      if (port.size() > 5 || !std::all_of(port.begin(), port.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          })) {
        throw bad("bad port");
      }
      out.port = std::stoi(std::string(port));
      if (out.port < 1 || out.port > 65535) throw bad("bad port");
    }
  }
  if (host.empty()) throw bad("empty host");
  if (!std::all_of(host.begin(), host.end(), valid_host_char)) throw bad("bad host");
  out.host = lower(host);

  if (auto hash = tail.find('#'); hash != std::string_view::npos) tail = tail.substr(0, hash);
  out.target = tail.empty() ? "/" : std::string(tail);
  if (out.target.front() == '?') out.target.insert(out.target.begin(), '/');
  return out;
}

bool is_http_url(std::string_view url) {
  try {
    parse_url(url);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace factcheck
