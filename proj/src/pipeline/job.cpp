#include "factcheck/pipeline/job.hpp"

#include <ctime>

#include "factcheck/core/errors.hpp"

namespace factcheck::pipeline {

namespace {

constexpr std::pair<JobState, std::string_view> kStateNames[] = {
    {JobState::queued, "queued"},       {JobState::segmenting, "segmenting"},
    {JobState::generating_claims, "generating_claims"},
    {JobState::retrieving, "retrieving"}, {JobState::judging, "judging"},
    {JobState::scoring, "scoring"},     {JobState::done, "done"},
    {JobState::failed, "failed"},
};

bool is_running(JobState s) {
  return s != JobState::queued && !is_terminal(s);
}

[[noreturn]] void illegal(const VerificationJob& job, std::string_view event) {
  throw IllegalTransition("job " + job.job_id + ": " + std::string(event) + " not allowed in state " +
                          std::string(to_string(job.state)));
}

}  // namespace

std::string_view to_string(JobState s) {
  for (const auto& [state, name] : kStateNames) {
    if (state == s) return name;
  }
  return "?";
}

JobState parse_job_state(std::string_view s) {
  for (const auto& [state, name] : kStateNames) {
    if (name == s) return state;
  }
  throw DomainError("unknown job state '" + std::string(s) + "'");
}

bool is_terminal(JobState s) { return s == JobState::done || s == JobState::failed; }

VerificationJob VerificationJob::create(std::string job_id, Clock::time_point now) {
  VerificationJob job;
  job.job_id = std::move(job_id);
  job.created_at = now;
  job.updated_at = now;
  return job;
}

VerificationJob job_transition(VerificationJob job, const JobEvent& event, Clock::time_point now) {
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, events::Start>) {
          if (job.state != JobState::queued) illegal(job, "start");
          job.state = JobState::segmenting;
          job.progress = {};
        } else if constexpr (std::is_same_v<E, events::Advance>) {
          if (!is_running(job.state) || !is_running(e.to) || e.to <= job.state) {
            illegal(job, "advance to " + std::string(to_string(e.to)));
          }
          if (e.total_units < 0) throw IllegalTransition("negative unit total");
          job.state = e.to;
          job.progress = {0, e.total_units};
        } else if constexpr (std::is_same_v<E, events::UnitComplete>) {
          if (!is_running(job.state)) illegal(job, "unit_complete");
          if (job.progress.completed_units >= job.progress.total_units) {
            illegal(job, "unit_complete beyond stage total");
          }
          ++job.progress.completed_units;
        } else if constexpr (std::is_same_v<E, events::Finish>) {
          if (job.state != JobState::scoring) illegal(job, "finish");
          job.state = JobState::done;
          job.report = e.report;
          job.progress.completed_units = job.progress.total_units;
        } else if constexpr (std::is_same_v<E, events::Fail>) {
          if (is_terminal(job.state)) illegal(job, "fail");
          job.state = JobState::failed;
          job.error = e.error;
        }
      },
      event);
  job.updated_at = std::max(job.updated_at, now);
  return job;
}

std::string format_timestamp(Clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch());
  const std::time_t secs = static_cast<std::time_t>(ms.count() / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const auto n = std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof(buf) - n, ".%03dZ", static_cast<int>(ms.count() % 1000));
  return buf;
}

nlohmann::json status_json(const VerificationJob& job) {
  nlohmann::json j{{"job_id", job.job_id},
                   {"state", to_string(job.state)},
                   {"progress",
                    {{"completed_units", job.progress.completed_units},
                     {"total_units", job.progress.total_units}}},
                   {"created_at", format_timestamp(job.created_at)},
                   {"updated_at", format_timestamp(job.updated_at)}};
  if (job.error) j["error"] = *job.error;
  return j;
}

}  // namespace factcheck::pipeline
