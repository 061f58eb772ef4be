#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/eval/eval_harness.hpp"

namespace factcheck::eval {

/// Span-annotated response text: error spans are wrapped in <entity>,
/// <relation>, <contradictory>, <invented>, <subjective> or <unverifiable>
/// tags; inside them <mark>...</mark> holds a suggested correction (not part
/// of the original text) and <delete>...</delete> the erroneous original.
struct AnnotatedText {
  std::string plain;                                  // original text, tags removed
  std::vector<std::pair<std::size_t, std::size_t>> error_spans;  // byte ranges in `plain`
};

AnnotatedText strip_annotations(std::string_view annotated);

/// Sentence labels: 1 when any error span overlaps the sentence.
EvalRecord convert_annotated(const std::string& id, std::string_view annotated,
                             const std::string& subset = {}, int max_paragraph_sentences = 10);

/// Reads JSON lines {"id","annotated","subset"?} and writes EvalRecord lines.
/// Returns the number of records written.
std::size_t convert_fava_file(const std::filesystem::path& input,
                              const std::filesystem::path& output);

}  // namespace factcheck::eval
