#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/pipeline/job.hpp"

namespace factcheck::api {

/// What a worker needs to (re)run a job.
struct JobSpec {
  std::string job_id;
  std::string text;
  PipelineConfig config;
};

/// Jobs by id with an optional append-only journal (JSON lines):
///   {"type":"submitted","job_id","text","config","created_at"}
///   {"type":"done","job_id","report","updated_at"}
///   {"type":"failed","job_id","error","updated_at"}
/// Replaying the journal restores finished jobs; submitted jobs without a
/// terminal record come back as queued. Readers get immutable snapshots.
class JobStore {
 public:
  explicit JobStore(std::optional<std::filesystem::path> journal = std::nullopt);
  JobStore(const JobStore&) = delete;
  JobStore& operator=(const JobStore&) = delete;

  /// Loads the journal (if any) and returns the jobs that must be re-run,
  /// in submission order. Torn or malformed lines are skipped.
  std::vector<JobSpec> recover();

  /// Registers a queued job and journals it. Throws DomainError on a
  /// duplicate id.
  void submit(const JobSpec& spec, pipeline::Clock::time_point now = pipeline::Clock::now());

  /// Applies a lifecycle event; Finish and Fail are journaled.
  void apply(const std::string& job_id, const pipeline::JobEvent& event,
             pipeline::Clock::time_point now = pipeline::Clock::now());

  std::shared_ptr<const pipeline::VerificationJob> get(const std::string& job_id) const;
  std::size_t size() const;

 private:
  void append(const nlohmann::json& record);

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const pipeline::VerificationJob>> jobs_;
  std::optional<std::filesystem::path> journal_path_;
  std::ofstream journal_;
};

}  // namespace factcheck::api
