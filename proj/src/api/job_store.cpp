#include "factcheck/api/job_store.hpp"

#include <spdlog/spdlog.h>

#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"

namespace factcheck::api {

using nlohmann::json;
using pipeline::Clock;

namespace {

std::int64_t to_millis(Clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

Clock::time_point from_millis(std::int64_t ms) {
  return Clock::time_point(std::chrono::duration_cast<Clock::duration>(std::chrono::milliseconds(ms)));
}

}  // namespace

JobStore::JobStore(std::optional<std::filesystem::path> journal)
    : journal_path_(std::move(journal)) {}

std::vector<JobSpec> JobStore::recover() {
  std::vector<JobSpec> pending_order;
  std::map<std::string, JobSpec> pending;
  std::unique_lock lock(mutex_);
  if (journal_path_ && std::filesystem::exists(*journal_path_)) {
    std::ifstream in(*journal_path_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        const json rec = json::parse(line);
        const auto type = rec.at("type").get<std::string>();
        const auto id = rec.at("job_id").get<std::string>();
        if (type == "submitted") {
          JobSpec spec{id, rec.at("text").get<std::string>(), config_from_json(rec.at("config"))};
          auto job = pipeline::VerificationJob::create(id, from_millis(rec.at("created_at")));
          jobs_[id] = std::make_shared<const pipeline::VerificationJob>(std::move(job));
          pending[id] = spec;
          pending_order.push_back(std::move(spec));
        } else if (type == "done" || type == "failed") {
          auto it = jobs_.find(id);
          if (it == jobs_.end()) continue;
          auto job = *it->second;
          if (type == "done") {
            job.state = pipeline::JobState::done;
            job.report = report_from_json(rec.at("report"));
          } else {
            job.state = pipeline::JobState::failed;
            job.error = rec.at("error").get<std::string>();
          }
          job.updated_at = from_millis(rec.at("updated_at"));
          it->second = std::make_shared<const pipeline::VerificationJob>(std::move(job));
          pending.erase(id);
        }
      } catch (const std::exception& e) {
        spdlog::warn("journal line {} skipped: {}", line_no, e.what());
      }
    }
  }
  if (journal_path_) {
    journal_.open(*journal_path_, std::ios::app);
    if (!journal_) throw std::runtime_error("cannot open job journal " + journal_path_->string());
  }
  std::vector<JobSpec> out;
  for (auto& spec : pending_order) {
    if (pending.count(spec.job_id)) out.push_back(std::move(spec));
  }
  return out;
}

void JobStore::append(const json& record) {
  if (!journal_.is_open()) return;
  journal_ << record.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  journal_.flush();
}

void JobStore::submit(const JobSpec& spec, Clock::time_point now) {
  std::unique_lock lock(mutex_);
  if (jobs_.count(spec.job_id)) throw DomainError("duplicate job id " + spec.job_id);
  jobs_[spec.job_id] =
      std::make_shared<const pipeline::VerificationJob>(pipeline::VerificationJob::create(spec.job_id, now));
  append({{"type", "submitted"},
          {"job_id", spec.job_id},
          {"text", spec.text},
          {"config", to_json(spec.config)},
          {"created_at", to_millis(now)}});
}

void JobStore::apply(const std::string& job_id, const pipeline::JobEvent& event,
                     Clock::time_point now) {
  std::unique_lock lock(mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw DomainError("unknown job " + job_id);
  auto next = pipeline::job_transition(*it->second, event, now);
  if (next.state == pipeline::JobState::done && it->second->state != pipeline::JobState::done) {
    append({{"type", "done"},
            {"job_id", job_id},
            {"report", to_json(*next.report)},
            {"updated_at", to_millis(next.updated_at)}});
  } else if (next.state == pipeline::JobState::failed &&
             it->second->state != pipeline::JobState::failed) {
    append({{"type", "failed"},
            {"job_id", job_id},
            {"error", next.error.value_or("")},
            {"updated_at", to_millis(next.updated_at)}});
  }
  it->second = std::make_shared<const pipeline::VerificationJob>(std::move(next));
}

std::shared_ptr<const pipeline::VerificationJob> JobStore::get(const std::string& job_id) const {
  std::shared_lock lock(mutex_);
  auto it = jobs_.find(job_id);
  return it == jobs_.end() ? nullptr : it->second;
}

std::size_t JobStore::size() const {
  std::shared_lock lock(mutex_);
  return jobs_.size();
}

}  // namespace factcheck::api
