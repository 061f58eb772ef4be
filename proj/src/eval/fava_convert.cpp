#include "factcheck/eval/fava_convert.hpp"

#include <cctype>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "factcheck/core/errors.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::eval {

namespace {

const std::set<std::string, std::less<>> kErrorTags = {
    "entity", "relation", "contradictory", "invented", "subjective", "unverifiable",
};

}  // namespace

AnnotatedText strip_annotations(std::string_view annotated) {
  AnnotatedText out;
  int error_depth = 0;
  int mark_depth = 0;
  std::size_t span_start = 0;
  std::size_t i = 0;
  while (i < annotated.size()) {
    if (annotated[i] == '<') {
      const auto close = annotated.find('>', i);
      if (close != std::string_view::npos) {
        std::string_view body = annotated.substr(i + 1, close - i - 1);
        const bool closing = !body.empty() && body.front() == '/';
        if (closing) body.remove_prefix(1);
        std::string name;
        for (char c : body) name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (kErrorTags.count(name)) {
          if (!closing) {
            if (error_depth++ == 0) span_start = out.plain.size();
          } else if (error_depth > 0 && --error_depth == 0 && out.plain.size() > span_start) {
            out.error_spans.emplace_back(span_start, out.plain.size());
          }
          i = close + 1;
          continue;
        }
        if (name == "mark") {
          mark_depth = closing ? std::max(0, mark_depth - 1) : mark_depth + 1;
          i = close + 1;
          continue;
        }
        if (name == "delete") {
          i = close + 1;
          continue;
        }
      }
    }
    if (mark_depth == 0) out.plain += annotated[i];
    ++i;
  }
  if (error_depth > 0 && out.plain.size() > span_start) {
    out.error_spans.emplace_back(span_start, out.plain.size());
  }
  return out;
}

EvalRecord convert_annotated(const std::string& id, std::string_view annotated,
                             const std::string& subset, int max_paragraph_sentences) {
  const AnnotatedText a = strip_annotations(annotated);
  const auto segmented = text::segment(a.plain, max_paragraph_sentences);
  EvalRecord r;
  r.id = id;
  r.text = a.plain;
  r.subset = subset;
  for (const auto& span : segmented.spans) {
    int label = 0;
    for (const auto& [begin, end] : a.error_spans) {
      if (begin < span.end && span.begin < end) label = 1;
    }
    r.gold_sentence_labels.push_back(label);
  }
  return r;
}

std::size_t convert_fava_file(const std::filesystem::path& input,
                              const std::filesystem::path& output) {
  std::ifstream in(input);
  if (!in) throw DomainError("cannot open " + input.string());
  std::ofstream out(output, std::ios::trunc);
  if (!out) throw DomainError("cannot write " + output.string());
  std::size_t written = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto record = convert_annotated(j.at("id").get<std::string>(),
                                            j.at("annotated").get<std::string>(),
                                            j.value("subset", std::string()));
      out << to_json(record).dump() << '\n';
      ++written;
    } catch (const std::exception& e) {
      throw DomainError(input.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return written;
}

}  // namespace factcheck::eval
