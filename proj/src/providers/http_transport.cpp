#include "factcheck/providers/http_transport.hpp"

#include <httplib.h>

#include "factcheck/core/errors.hpp"
#include "factcheck/providers/url.hpp"

namespace factcheck {

HttpResponse HttplibTransport::send(const HttpRequest& request) {
  const ParsedUrl url = parse_url(request.url);
  httplib::Client client(url.origin());
  client.set_follow_location(true);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);

  HttpResponse out;
  httplib::Result result{nullptr, httplib::Error::Unknown};
  bool truncated = false;
  if (request.method == "POST") {
    result = client.Post(url.target, headers, request.body, request.content_type);
    if (result) {
      out.status = result->status;
      out.body = result->body;
    }
  } else {
    result = client.Get(
        url.target, headers,
        [&](const httplib::Response& response) {
          out.status = response.status;
          return true;
        },
        [&](const char* data, size_t length) {
          if (request.max_body_bytes > 0 && out.body.size() + length > request.max_body_bytes) {
            out.body.append(data, request.max_body_bytes - out.body.size());
            truncated = true;
            return false;
          }
          out.body.append(data, length);
          return true;
        });
  }
  if (!result && !(truncated && result.error() == httplib::Error::Canceled)) {
    const auto err = result.error();
    const std::string what =
        "HTTP " + request.method + " " + request.url + " failed: " + httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout) throw FetchTimeout(what);
    if (err == httplib::Error::Read && out.status == 0) throw FetchTimeout(what);
    throw TransportError(what);
  }
  return out;
}

HttpResponse CountingTransport::send(const HttpRequest& request) {
  ++count_;
  if (!inner_) throw TransportError("network access refused: " + request.url);
  return inner_->send(request);
}

}  // namespace factcheck
