#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "factcheck/core/types.hpp"

namespace factcheck::pipeline {

enum class JobState { queued, segmenting, generating_claims, retrieving, judging, scoring, done, failed };

std::string_view to_string(JobState s);
JobState parse_job_state(std::string_view s);
bool is_terminal(JobState s);

using Clock = std::chrono::system_clock;

/// Units of the current stage (sentences, claims, pairs); reset when the
/// job moves to the next stage.
struct Progress {
  int completed_units = 0;
  int total_units = 0;

  bool operator==(const Progress&) const = default;
};

struct VerificationJob {
  std::string job_id;
  JobState state = JobState::queued;
  Clock::time_point created_at{};
  Clock::time_point updated_at{};
  Progress progress;
  std::optional<CredibilityReport> report;
  std::optional<std::string> error;

  static VerificationJob create(std::string job_id, Clock::time_point now = Clock::now());
};

namespace events {
struct Start {};
/// Enter a later running stage with `total_units` units of work.
struct Advance {
  JobState to = JobState::segmenting;
  int total_units = 0;
};
struct UnitComplete {};
struct Finish {
  CredibilityReport report;
};
struct Fail {
  std::string error;
};
}  // namespace events

using JobEvent =
    std::variant<events::Start, events::Advance, events::UnitComplete, events::Finish, events::Fail>;

/// queued -Start-> segmenting -Advance-> ... -Advance-> scoring -Finish-> done;
/// Fail from any non-terminal state. Advance only moves forward and only
/// between running stages; UnitComplete never exceeds the stage total.
/// Throws IllegalTransition otherwise.
VerificationJob job_transition(VerificationJob job, const JobEvent& event,
                               Clock::time_point now = Clock::now());

std::string format_timestamp(Clock::time_point t);

/// {"job_id","state","progress":{...},"created_at","updated_at"[,"error"]}
nlohmann::json status_json(const VerificationJob& job);

}  // namespace factcheck::pipeline
