#include "factcheck/eval/metrics.hpp"

#include "factcheck/core/canonical_json.hpp"
#include "factcheck/core/errors.hpp"

namespace factcheck::eval {

void BinaryMetrics::add(int prediction, int gold) {
  if ((prediction != 0 && prediction != 1) || (gold != 0 && gold != 1)) {
    throw DomainError("labels must be 0 or 1");
  }
  if (prediction == 1 && gold == 1) ++tp;
  if (prediction == 1 && gold == 0) ++fp;
  if (prediction == 0 && gold == 1) ++fn;
  if (prediction == 0 && gold == 0) ++tn;
}

void BinaryMetrics::finalize() {
  precision = tp + fp == 0 ? Fraction(0) : Fraction(tp, tp + fp);
  recall = tp + fn == 0 ? Fraction(0) : Fraction(tp, tp + fn);
  f1 = precision + recall == 0 ? Fraction(0)
                               : Fraction(2) * precision * recall / (precision + recall);
}

BinaryMetrics compute_binary_f1(const std::vector<int>& predictions, const std::vector<int>& gold) {
  if (predictions.size() != gold.size()) {
    throw DomainError("prediction and gold lengths differ (" + std::to_string(predictions.size()) +
                      " vs " + std::to_string(gold.size()) + ")");
  }
  if (predictions.empty()) throw DomainError("no labels to score");
  BinaryMetrics m;
  for (std::size_t i = 0; i < predictions.size(); ++i) m.add(predictions[i], gold[i]);
  m.finalize();
  return m;
}

nlohmann::json to_json(const BinaryMetrics& m) {
  return {{"tp", m.tp},
          {"fp", m.fp},
          {"fn", m.fn},
          {"tn", m.tn},
          {"sentences", m.count()},
          {"precision", decimal4(m.precision)},
          {"recall", decimal4(m.recall)},
          {"f1", decimal4(m.f1)}};
}

}  // namespace factcheck::eval
