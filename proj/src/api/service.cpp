#include "factcheck/api/service.hpp"

#include <condition_variable>
#include <deque>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "factcheck/core/canonical_json.hpp"
#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/pipeline/orchestrator.hpp"
#include "factcheck/providers/digest.hpp"
#include "factcheck/scoring/credibility.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::api {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(canonical_dump(body) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

json parse_body(const httplib::Request& req, bool allow_empty) {
  if (req.body.empty() || text::is_blank(req.body)) {
    if (allow_empty) return json::object();
    throw ConfigError("request body must be a JSON object");
  }
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("request body is not valid JSON: ") + e.what());
  }
}

}  // namespace

struct ApiService::Impl {
  ServiceOptions options;
  std::shared_ptr<Providers> providers;
  std::shared_ptr<sources::CategoryCache> category_cache;
  JobStore store;
  httplib::Server server;

  std::mutex queue_mutex;
  std::condition_variable queue_cv;
  std::deque<JobSpec> queue;
  bool stopping = false;
  std::vector<std::thread> workers;
  std::thread listener;

  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopped = false;

  Impl(ServiceOptions o, std::shared_ptr<Providers> p, std::shared_ptr<sources::CategoryCache> c)
      : options(std::move(o)),
        providers(std::move(p)),
        category_cache(c ? std::move(c) : std::make_shared<sources::CategoryCache>()),
        store(options.journal) {}

  void routes();
  void post_job(const httplib::Request& req, httplib::Response& res);
  void get_job(const httplib::Request& req, httplib::Response& res);
  void recompute(const httplib::Request& req, httplib::Response& res);
  void worker_loop();
  void run_job(const JobSpec& spec);
};

void ApiService::Impl::routes() {
  server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json{{"status", "ok"}, {"mode", to_string(providers->mode())}});
  });
  server.Get("/api/openapi", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, openapi_document());
  });
  server.Get("/api/config", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, to_json(PipelineConfig{}));
  });
  server.Post("/api/jobs", [this](const httplib::Request& req, httplib::Response& res) {
    post_job(req, res);
  });
  server.Get("/api/jobs/:id", [this](const httplib::Request& req, httplib::Response& res) {
    get_job(req, res);
  });
  server.Post("/api/jobs/:id/recompute", [this](const httplib::Request& req, httplib::Response& res) {
    recompute(req, res);
  });
  server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          send_error(res, 500, e.what());
        } catch (...) {
          send_error(res, 500, "internal error");
        }
      });
  if (options.static_dir && !server.set_mount_point("/", options.static_dir->string())) {
    throw ConfigError("static directory " + options.static_dir->string() + " does not exist");
  }
}

void ApiService::Impl::post_job(const httplib::Request& req, httplib::Response& res) {
  JobSpec spec;
  try {
    const json body = parse_body(req, false);
    if (!body.is_object()) throw ConfigError("request body must be a JSON object");
    for (const auto& [key, _] : body.items()) {
      if (key != "text" && key != "config") throw ConfigError("unknown field '" + key + "'");
    }
    if (!body.contains("text") || !body["text"].is_string()) {
      throw ConfigError("'text' must be a string");
    }
    spec.text = body["text"].get<std::string>();
    if (text::is_blank(spec.text)) throw EmptyInput();
    spec.config = config_from_json(body.value("config", json::object()));
    text::segment(spec.text, spec.config.max_paragraph_sentences);
  } catch (const DomainError& e) {
    send_error(res, 400, e.what());
    return;
  }
  {
    std::lock_guard lock(queue_mutex);
    if (stopping) {
      send_error(res, 503, "service is shutting down");
      return;
    }
    if (queue.size() >= options.queue_capacity) {
      send_error(res, 429, "job queue is full");
      return;
    }
    spec.job_id = random_uuid();
    store.submit(spec);
    queue.push_back(spec);
  }
  queue_cv.notify_one();
  send_json(res, 202, json{{"job_id", spec.job_id}});
}

void ApiService::Impl::get_job(const httplib::Request& req, httplib::Response& res) {
  const auto job = store.get(req.path_params.at("id"));
  if (!job) {
    send_error(res, 404, "unknown job");
    return;
  }
  if (job->state == pipeline::JobState::done) {
    res.status = 200;
    res.set_content(canonical_serialize(*job->report), kJson);
    return;
  }
  send_json(res, 200, pipeline::status_json(*job));
}

void ApiService::Impl::recompute(const httplib::Request& req, httplib::Response& res) {
  const auto job = store.get(req.path_params.at("id"));
  if (!job) {
    send_error(res, 404, "unknown job");
    return;
  }
  if (job->state != pipeline::JobState::done) {
    send_error(res, 409, "job is not done (state " + std::string(to_string(job->state)) + ")");
    return;
  }
  try {
    const auto mask = scoring::mask_from_json(parse_body(req, true));
    send_json(res, 200, to_json(scoring::apply_selection(*job->report, mask)));
  } catch (const DomainError& e) {
    send_error(res, 400, e.what());
  }
}

void ApiService::Impl::run_job(const JobSpec& spec) {
  pipeline::RunOptions run;
  run.job_id = spec.job_id;
  run.category_cache = category_cache;
  run.observer = [&](const pipeline::JobEvent& e) { store.apply(spec.job_id, e); };
  try {
    auto report = pipeline::run_verification(spec.text, spec.config, *providers, run);
    store.apply(spec.job_id, pipeline::events::Finish{std::move(report)});
    spdlog::info("job {} done", spec.job_id);
  } catch (const std::exception& e) {
    spdlog::error("job {} failed: {}", spec.job_id, e.what());
    store.apply(spec.job_id, pipeline::events::Fail{e.what()});
  }
}

void ApiService::Impl::worker_loop() {
  for (;;) {
    JobSpec spec;
    {
      std::unique_lock lock(queue_mutex);
      queue_cv.wait(lock, [&] { return stopping || !queue.empty(); });
      if (stopping) return;
      spec = std::move(queue.front());
      queue.pop_front();
    }
    run_job(spec);
  }
}

ApiService::ApiService(ServiceOptions options, std::shared_ptr<Providers> providers,
                       std::shared_ptr<sources::CategoryCache> category_cache)
    : impl_(std::make_unique<Impl>(std::move(options), std::move(providers),
                                   std::move(category_cache))) {
  if (!impl_->providers) throw ConfigError("service needs providers");
}

ApiService::~ApiService() { stop(); }

int ApiService::start() {
  auto& s = *impl_;
  for (auto& spec : s.store.recover()) {
    spdlog::info("re-queueing unfinished job {}", spec.job_id);
    s.queue.push_back(std::move(spec));
  }
  s.routes();
  int port = s.options.port;
  if (port == 0) {
    port = s.server.bind_to_any_port(s.options.host);
    if (port < 0) throw std::runtime_error("cannot bind " + s.options.host);
  } else if (!s.server.bind_to_port(s.options.host, port)) {
    throw std::runtime_error("cannot bind " + s.options.host + ":" + std::to_string(port));
  }
  for (int i = 0; i < std::max(1, s.options.workers); ++i) {
    s.workers.emplace_back([&s] { s.worker_loop(); });
  }
  s.listener = std::thread([&s] { s.server.listen_after_bind(); });
  s.server.wait_until_ready();
  spdlog::info("listening on {}:{} ({} mode)", s.options.host, port, to_string(s.providers->mode()));
  return port;
}

void ApiService::stop() {
  auto& s = *impl_;
  {
    std::lock_guard lock(s.queue_mutex);
    if (s.stopping) return;
    s.stopping = true;
  }
  s.queue_cv.notify_all();
  s.server.stop();
  if (s.listener.joinable()) s.listener.join();
  for (auto& t : s.workers) {
    if (t.joinable()) t.join();
  }
  {
    std::lock_guard lock(s.stop_mutex);
    s.stopped = true;
  }
  s.stop_cv.notify_all();
}

void ApiService::wait() {
  auto& s = *impl_;
  std::unique_lock lock(s.stop_mutex);
  s.stop_cv.wait(lock, [&] { return s.stopped; });
}

JobStore& ApiService::store() { return impl_->store; }

json openapi_document() {
  const json error_ref{{"$ref", "#/components/schemas/Error"}};
  auto response = [](const std::string& description, const json& schema) {
    return json{{"description", description},
                {"content", {{"application/json", {{"schema", schema}}}}}};
  };
  const json id_param = json::array({{{"name", "id"},
                                      {"in", "path"},
                                      {"required", true},
                                      {"schema", {{"type", "string"}}}}});
  json doc;
  doc["openapi"] = "3.0.3";
  doc["info"] = {{"title", "factcheck API"}, {"version", "1.0.0"}};
  doc["paths"]["/api/jobs"]["post"] = {
      {"summary", "Submit text for verification"},
      {"requestBody",
       {{"required", true},
        {"content",
         {{"application/json", {{"schema", {{"$ref", "#/components/schemas/JobRequest"}}}}}}}}},
      {"responses",
       {{"202", response("Job accepted",
                         {{"type", "object"},
                          {"properties", {{"job_id", {{"type", "string"}}}}}})},
        {"400", response("Invalid text or config", error_ref)},
        {"429", response("Job queue is full", error_ref)}}}};
  doc["paths"]["/api/jobs/{id}"]["get"] = {
      {"summary", "Job status, or the credibility report once the job is done"},
      {"parameters", id_param},
      {"responses",
       {{"200", response("Status or report",
                         {{"oneOf", json::array({{{"$ref", "#/components/schemas/JobStatus"}},
                                                 {{"$ref", "#/components/schemas/Report"}}})}})},
        {"404", response("Unknown job", error_ref)}}}};
  doc["paths"]["/api/jobs/{id}/recompute"]["post"] = {
      {"summary", "Recompute scores under a selection mask"},
      {"parameters", id_param},
      {"requestBody",
       {{"required", false},
        {"content",
         {{"application/json",
           {{"schema", {{"$ref", "#/components/schemas/SelectionMask"}}}}}}}}},
      {"responses",
       {{"200", response("Score breakdown", {{"$ref", "#/components/schemas/ScoreBreakdown"}})},
        {"400", response("Invalid mask or unknown evidence id", error_ref)},
        {"404", response("Unknown job", error_ref)},
        {"409", response("Job not done", error_ref)}}}};
  json health_schema{{"type", "object"}};
  health_schema["properties"]["status"] = {{"type", "string"}};
  health_schema["properties"]["mode"] = {{"type", "string"},
                                         {"enum", {"live", "record", "replay"}}};
  doc["paths"]["/api/health"]["get"] = {
      {"summary", "Liveness and provider mode"},
      {"responses", {{"200", response("Service is up", health_schema)}}}};
  doc["paths"]["/api/config"]["get"] = {
      {"summary", "Default pipeline configuration"},
      {"responses",
       {{"200", response("Defaults", {{"$ref", "#/components/schemas/PipelineConfig"}})}}}};
  doc["paths"]["/api/openapi"]["get"] = {
      {"summary", "This document"},
      {"responses", {{"200", response("OpenAPI document", {{"type", "object"}})}}}};

  auto& schemas = doc["components"]["schemas"];
  schemas["Error"] = {{"type", "object"}, {"properties", {{"error", {{"type", "string"}}}}}};
  schemas["PipelineConfig"] = {
      {"type", "object"},
      {"additionalProperties", false},
      {"properties",
       {{"llm_profile", {{"type", "string"}}},
        {"retrieval_mode", {{"type", "string"}, {"enum", {"dense", "sparse"}}}},
        {"top_n_results", {{"type", "integer"}, {"minimum", 1}}},
        {"top_k_passages", {{"type", "integer"}, {"minimum", 1}}},
        {"context_window_m", {{"type", "integer"}, {"minimum", 0}}},
        {"threshold_t", {{"type", "number"}, {"minimum", 0}, {"maximum", 1}}},
        {"count_irrelevant_in_total", {{"type", "boolean"}}},
        {"parallelism", {{"type", "integer"}, {"minimum", 1}}},
        {"max_paragraph_sentences", {{"type", "integer"}, {"minimum", 1}}}}}};
  schemas["JobRequest"] = {
      {"type", "object"},
      {"additionalProperties", false},
      {"required", {"text"}},
      {"properties",
       {{"text", {{"type", "string"}, {"minLength", 1}}},
        {"config", {{"$ref", "#/components/schemas/PipelineConfig"}}}}}};
  schemas["JobStatus"] = {
      {"type", "object"},
      {"properties",
       {{"job_id", {{"type", "string"}}},
        {"state",
         {{"type", "string"},
          {"enum", {"queued", "segmenting", "generating_claims", "retrieving", "judging",
                    "scoring", "done", "failed"}}}},
        {"progress",
         {{"type", "object"},
          {"properties",
           {{"completed_units", {{"type", "integer"}}}, {"total_units", {{"type", "integer"}}}}}}},
        {"error", {{"type", "string"}}}}}};
  schemas["SelectionMask"] = {
      {"type", "object"},
      {"additionalProperties", false},
      {"properties",
       {{"excluded_evidence_ids", {{"type", "array"}, {"items", {{"type", "string"}}}}},
        {"excluded_categories",
         {{"type", "array"},
          {"items",
           {{"type", "string"},
            {"enum", {"news", "blog", "wiki", "social_media", "scientific_medical_article",
                      "government_website", "other"}}}}}}}}};
  schemas["ScoreBreakdown"] = {
      {"type", "object"},
      {"description", "See docs/report_schema.md"},
      {"properties",
       {{"sentences", {{"type", "array"}}},
        {"overall", {{"type", "object"}, {"nullable", true}}},
        {"pooled", {{"type", "object"}, {"nullable", true}}}}}};
  schemas["Report"] = {{"type", "object"}, {"description", "See docs/report_schema.md"}};
  return doc;
}

}  // namespace factcheck::api
