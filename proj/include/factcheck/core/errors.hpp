#pragma once

#include <stdexcept>
#include <string>

namespace factcheck {

/// Precondition or argument violation (bad score, bad index, malformed url).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input text is empty or whitespace only.
class EmptyInput : public DomainError {
 public:
  EmptyInput() : DomainError("input text is empty") {}
};

/// PipelineConfig or request body failed validation.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

class MalformedClaimResponse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyDocument : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownEvidenceId : public DomainError {
 public:
  explicit UnknownEvidenceId(const std::string& id)
      : DomainError("unknown evidence id: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class IllegalTransition : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Every provider call made while running a job failed.
class ProviderOutage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Provider errors. TransportError covers everything that is worth retrying.

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TransportError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class RateLimited : public TransportError {
 public:
  using TransportError::TransportError;
};

class FetchTimeout : public TransportError {
 public:
  using TransportError::TransportError;
};

/// The remote side answered but refused the page (4xx, robots).
class FetchBlocked : public ProviderError {
 public:
  FetchBlocked(const std::string& url, int status)
      : ProviderError("fetch blocked (HTTP " + std::to_string(status) + "): " + url),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

/// Replay mode asked for a request that was never recorded.
class ReplayMiss : public ProviderError {
 public:
  ReplayMiss(const std::string& kind, const std::string& key)
      : ProviderError("replay miss for " + kind + " request " + key), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace factcheck
