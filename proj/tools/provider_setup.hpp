#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "factcheck/providers/gateway.hpp"
#include "factcheck/providers/http_transport.hpp"

namespace factcheck::cli {

struct ProviderFlags {
  std::string mode = "replay";
  std::string fixtures;
  std::string backend = "http";  // http | scenario
  std::string scenario;
  std::string providers_file;
};

struct ProviderSetup {
  std::shared_ptr<Gateway> gateway;
  std::shared_ptr<CountingTransport> transport;  // every HTTP request goes through here
  std::optional<std::filesystem::path> fixtures;

  std::size_t network_calls() const { return transport ? transport->count() : 0; }
  /// Rewrites the fixture file sorted by key after a record run.
  void finish() const;
};

/// Exit code 2 conditions throw UsageError.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ProviderSetup make_providers(const ProviderFlags& flags);

}  // namespace factcheck::cli
