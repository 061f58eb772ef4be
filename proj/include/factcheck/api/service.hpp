#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "factcheck/api/job_store.hpp"
#include "factcheck/providers/providers.hpp"
#include "factcheck/sources/source_categorizer.hpp"

namespace factcheck::api {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;                  // 0 picks a free port
  std::size_t queue_capacity = 16;  // queued (not yet running) jobs
  int workers = 2;                  // jobs executed concurrently
  std::optional<std::filesystem::path> journal;
  std::optional<std::filesystem::path> static_dir;  // mounted at "/"
  std::string cors_origin = "*";
};

/// HTTP JSON API:
///   POST /api/jobs                  {"text", "config"?}      -> 202 {"job_id"}
///   GET  /api/jobs/{id}             status, or the report once done
///   POST /api/jobs/{id}/recompute   selection mask           -> score breakdown
///   GET  /api/health                {"status":"ok","mode"}
///   GET  /api/config                default pipeline config
///   GET  /api/openapi               API description
class ApiService {
 public:
  ApiService(ServiceOptions options, std::shared_ptr<Providers> providers,
             std::shared_ptr<sources::CategoryCache> category_cache = nullptr);
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  /// Recovers the journal, starts the workers and the listener. Returns the
  /// bound port. Throws std::runtime_error when the port cannot be bound.
  int start();
  /// Stops accepting requests, lets running jobs finish, joins all threads.
  void stop();
  /// Blocks until stop() has been called.
  void wait();

  JobStore& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// OpenAPI 3 description of every route.
nlohmann::json openapi_document();

}  // namespace factcheck::api
