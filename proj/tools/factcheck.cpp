#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "factcheck/api/service.hpp"
#include "factcheck/core/canonical_json.hpp"
#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/eval/eval_harness.hpp"
#include "factcheck/eval/fava_convert.hpp"
#include "factcheck/pipeline/orchestrator.hpp"
#include "factcheck/sources/source_categorizer.hpp"
#include "provider_setup.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace factcheck;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file_or_stdin(const std::string& path) {
  if (path == "-") return read_all(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cli::UsageError("cannot read " + path);
  return read_all(in);
}

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  const auto text = read_file_or_stdin(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw cli::UsageError("config " + path + " is not valid JSON: " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw cli::UsageError(std::string("config: ") + e.what());
  }
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout << bytes << std::flush;
    return;
  }
  const auto tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << bytes;
  }
  fs::rename(tmp, path);
}

std::string score_text(const ScoreBreakdown& scores, int sentence) {
  auto it = scores.sentence_scores.find(sentence);
  if (it == scores.sentence_scores.end()) return "  n/a ";
  return to_fixed4(it->second);
}

// Sentence scores with bucket, then the claim/evidence tree under each.
std::string summarize(const CredibilityReport& report) {
  std::ostringstream out;
  const auto& scores = report.scores;
  out << "job " << report.job_id << "\n";
  for (const auto& s : report.sentences) {
    out << "[" << s.index << "] " << score_text(scores, s.index);
    auto sc = scores.sentence_scores.find(s.index);
    if (sc != scores.sentence_scores.end()) {
      const auto& c = scores.counts.at(s.index);
      out << " " << to_string(assign_bucket(sc->second)) << " (" << c.support << "/" << c.total
          << ")";
      if (auto cl = scores.classification.find(s.index); cl != scores.classification.end()) {
        out << " " << to_string(cl->second);
      }
    } else {
      out << " " << to_string(scores.status.count(s.index) ? scores.status.at(s.index) : s.status);
    }
    out << "  " << s.text << "\n";
    if (!s.error.empty()) out << "      ! " << s.error << "\n";
    for (const auto& claim : s.claims) {
      out << "    " << claim.id << " " << claim.text;
      if (claim.status != ClaimStatus::ok) out << " [" << to_string(claim.status) << "]";
      out << "\n";
      for (const auto& ev : report.evidence) {
        if (ev.claim_id != claim.id) continue;
        std::string verdict = "-";
        for (const auto& j : report.judgments) {
          if (j.evidence_id == ev.id) verdict = std::string(to_string(j.verdict));
        }
        out << "      " << ev.id << " " << verdict << " [" << to_string(ev.category) << "] "
            << ev.url << "\n";
      }
      for (const auto& issue : claim.retrieval_issues) {
        out << "      x " << issue.url << ": " << issue.error << "\n";
      }
    }
  }
  out << "overall "
      << (scores.overall_score ? to_fixed4(*scores.overall_score) : std::string("n/a")) << "\n";
  return out.str();
}

struct VerifyArgs {
  std::string input = "-";
  std::string config;
  std::string output = "-";
  std::string category_cache;
  cli::ProviderFlags providers;
};

int run_verify(const VerifyArgs& args) {
  auto setup = cli::make_providers(args.providers);
  const auto text = read_file_or_stdin(args.input);
  const auto config = load_config(args.config);

  pipeline::RunOptions options;
  if (!args.category_cache.empty()) {
    options.category_cache = std::make_shared<sources::CategoryCache>(args.category_cache);
  }
  CredibilityReport report;
  try {
    report = pipeline::run_verification(text, config, *setup.gateway, options);
  } catch (...) {
    setup.finish();
    throw;
  }
  setup.finish();
  write_output(args.output, canonical_serialize(report));

  auto& summary_stream = args.output == "-" ? std::cerr : std::cout;
  summary_stream << summarize(report) << "network calls: " << setup.network_calls() << "\n";
  return kExitOk;
}

struct ServeArgs {
  api::ServiceOptions service;
  std::string journal;
  std::string static_dir;
  std::string category_cache;
  cli::ProviderFlags providers;
};

int run_serve(ServeArgs args) {
  // Block the signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto setup = cli::make_providers(args.providers);
  if (!args.journal.empty()) args.service.journal = fs::path(args.journal);
  if (!args.static_dir.empty()) args.service.static_dir = fs::path(args.static_dir);
  std::shared_ptr<sources::CategoryCache> cache;
  if (!args.category_cache.empty()) {
    cache = std::make_shared<sources::CategoryCache>(args.category_cache);
  }

  api::ApiService service(args.service, setup.gateway, cache);
  const int port = service.start();
  std::cout << "listening on " << args.service.host << ":" << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {} received, shutting down", sig);
    service.stop();
  });
  service.wait();
  // stop() may have come from elsewhere; wake the waiter so it can exit.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  setup.finish();
  return kExitOk;
}

struct EvalArgs {
  std::string dataset;
  std::string config;
  std::string sweep;
  std::string output;
  bool live = false;
  int parallel = 1;
  cli::ProviderFlags providers;
};

int run_eval_command(EvalArgs args) {
  if (args.live && args.providers.mode == "replay") args.providers.mode = "live";
  if (!args.live && args.providers.mode != "replay") {
    throw cli::UsageError("eval runs in replay mode unless --live is given");
  }
  auto setup = cli::make_providers(args.providers);
  const auto base = load_config(args.config);

  std::vector<eval::EvalRecord> records;
  std::vector<eval::SweepPoint> points;
  try {
    records = eval::load_dataset(args.dataset);
    points = eval::parse_sweep(args.sweep, base);
  } catch (const DomainError& e) {
    throw cli::UsageError(e.what());
  }

  eval::EvalOptions options;
  options.parallel = args.parallel;
  std::vector<eval::EvalRow> rows;
  try {
    rows = eval::run_eval(records, points, *setup.gateway, options);
  } catch (...) {
    setup.finish();
    throw;
  }
  setup.finish();

  const auto metrics = canonical_dump(eval::metrics_json(rows)) + "\n";
  if (args.output.empty()) {
    std::cout << eval::format_table(rows);
  } else {
    write_output(args.output, metrics);
    auto& table_stream = args.output == "-" ? std::cerr : std::cout;
    table_stream << eval::format_table(rows);
  }
  (args.output == "-" ? std::cerr : std::cout) << "network calls: " << setup.network_calls()
                                               << "\n";
  return kExitOk;
}

void add_provider_flags(CLI::App* cmd, cli::ProviderFlags& flags, bool with_mode = true) {
  if (with_mode) {
    cmd->add_option("--mode", flags.mode, "Provider mode")
        ->check(CLI::IsMember({"live", "record", "replay"}))
        ->capture_default_str();
  }
  cmd->add_option("--fixtures", flags.fixtures, "Replay fixture file (JSON lines)");
  cmd->add_option("--backend", flags.backend, "Backend used on fixture misses")
      ->check(CLI::IsMember({"http", "scenario"}))
      ->capture_default_str();
  cmd->add_option("--scenario", flags.scenario, "Scenario file for the simulated backend");
  cmd->add_option("--providers", flags.providers_file, "Provider endpoint settings (JSON)");
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("factcheck"));
  if (const char* level = std::getenv("FACTCHECK_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  } else {
    spdlog::set_level(spdlog::level::warn);
  }

  CLI::App app{"Claim-level fact verification against web evidence"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a text and write the report");
  verify_cmd->add_option("--input", verify.input, "Input text file, - for stdin")
      ->capture_default_str();
  verify_cmd->add_option("--config", verify.config, "Pipeline config (JSON)");
  verify_cmd->add_option("--output", verify.output, "Report file, - for stdout")
      ->capture_default_str();
  verify_cmd->add_option("--category-cache", verify.category_cache, "Hostname category cache");
  add_provider_flags(verify_cmd, verify.providers);

  ServeArgs serve;
  if (const char* port = std::getenv("PORT")) serve.service.port = std::atoi(port);
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--host", serve.service.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.service.port, "0 picks a free port")
      ->capture_default_str();
  serve_cmd->add_option("--journal", serve.journal, "Job journal for crash recovery");
  serve_cmd->add_option("--static", serve.static_dir, "Directory served at /");
  serve_cmd->add_option("--queue-capacity", serve.service.queue_capacity)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--workers", serve.service.workers)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--cors-origin", serve.service.cors_origin)->capture_default_str();
  serve_cmd->add_option("--category-cache", serve.category_cache, "Hostname category cache");
  add_provider_flags(serve_cmd, serve.providers);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Sentence-level F1 over an annotated dataset");
  eval_cmd->add_option("--dataset", ev.dataset, "EvalRecord JSON lines")->required();
  eval_cmd->add_option("--config", ev.config, "Base pipeline config (JSON)");
  eval_cmd->add_option("--sweep", ev.sweep, "Grid, e.g. \"evidences=1,3 context=15,30\"");
  eval_cmd->add_option("--output", ev.output, "Metrics JSON file, - for stdout");
  eval_cmd->add_option("--parallel", ev.parallel, "Records evaluated concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_flag("--live", ev.live, "Allow provider calls beyond the fixtures");
  add_provider_flags(eval_cmd, ev.providers);

  std::string fava_in;
  std::string fava_out;
  auto* fava_cmd =
      app.add_subcommand("convert-fava", "Span-annotated responses to EvalRecord lines");
  fava_cmd->add_option("--input", fava_in)->required();
  fava_cmd->add_option("--output", fava_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify_cmd) return run_verify(verify);
    if (*serve_cmd) return run_serve(serve);
    if (*eval_cmd) return run_eval_command(ev);
    if (*fava_cmd) {
      const auto n = eval::convert_fava_file(fava_in, fava_out);
      std::cout << "wrote " << n << " records\n";
      return kExitOk;
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EmptyInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
