#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/core/types.hpp"

namespace factcheck::eval {

/// Confusion counts and exact precision, recall and F1 for the positive
/// class (1 = sentence contains a factual error). Zero denominators give 0.
struct BinaryMetrics {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  Fraction precision{0};
  Fraction recall{0};
  Fraction f1{0};

  void add(int prediction, int gold);
  void finalize();  // recomputes precision, recall and f1 from the counts
  std::int64_t count() const { return tp + fp + fn + tn; }

  bool operator==(const BinaryMetrics&) const = default;
};

/// Throws DomainError for empty input, unequal lengths, or labels other
/// than 0 and 1.
BinaryMetrics compute_binary_f1(const std::vector<int>& predictions, const std::vector<int>& gold);

/// Counts as integers, ratios with four decimals.
nlohmann::json to_json(const BinaryMetrics& m);

}  // namespace factcheck::eval
