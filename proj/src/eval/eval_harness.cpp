#include "factcheck/eval/eval_harness.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include <spdlog/spdlog.h>

#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/pipeline/orchestrator.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::eval {

using nlohmann::json;

EvalRecord record_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("eval record must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "id" && key != "text" && key != "gold_sentence_labels" && key != "subset") {
      throw DomainError("unknown eval record field '" + key + "'");
    }
  }
  EvalRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.gold_sentence_labels = j.at("gold_sentence_labels").get<std::vector<int>>();
    r.subset = j.value("subset", "");
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad eval record: ") + e.what());
  }
  for (int label : r.gold_sentence_labels) {
    if (label != 0 && label != 1) throw DomainError("record " + r.id + ": labels must be 0 or 1");
  }
  return r;
}

json to_json(const EvalRecord& r) {
  json j{{"id", r.id}, {"text", r.text}, {"gold_sentence_labels", r.gold_sentence_labels}};
  if (!r.subset.empty()) j["subset"] = r.subset;
  return j;
}

std::vector<EvalRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open dataset " + path.string());
  std::vector<EvalRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank(line)) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (records.empty()) throw DomainError("dataset " + path.string() + " has no records");
  return records;
}

std::string SweepPoint::label() const {
  if (settings.empty()) return "base";
  std::string out;
  for (const auto& [key, value] : settings) {
    if (!out.empty()) out += ' ';
    out += key + "=" + value;
  }
  return out;
}

namespace {

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DomainError("sweep value for '" + key + "' must be an integer: '" + value + "'");
  }
}

void apply_setting(PipelineConfig& c, const std::string& key, const std::string& value) {
  if (key == "evidences") {
    c.top_n_results = parse_int(key, value);
  } else if (key == "passages") {
    c.top_k_passages = parse_int(key, value);
  } else if (key == "context") {
    c.context_window_m = parse_int(key, value);
  } else if (key == "retrieval") {
    c.retrieval_mode = parse_retrieval_mode(value);
  } else if (key == "threshold") {
    try {
      c.threshold_t = fraction_from_decimal(std::stod(value));
    } catch (const std::logic_error&) {
      throw DomainError("sweep threshold must be a number: '" + value + "'");
    }
  } else if (key == "irrelevant") {
    if (value != "true" && value != "false") throw DomainError("irrelevant must be true|false");
    c.count_irrelevant_in_total = value == "true";
  } else if (key == "profile") {
    c.llm_profile = value;
  } else {
    throw DomainError("unknown sweep key '" + key + "'");
  }
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(sep, pos);
    if (next == std::string_view::npos) next = s.size();
    out.emplace_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::vector<SweepPoint> parse_sweep(std::string_view spec, const PipelineConfig& base) {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::istringstream in{std::string(spec)};
  std::string term;
  while (in >> term) {
    const auto eq = term.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == term.size()) {
      throw DomainError("sweep term must look like key=v1,v2: '" + term + "'");
    }
    const std::string key = term.substr(0, eq);
    for (const auto& axis : axes) {
      if (axis.first == key) throw DomainError("sweep key '" + key + "' given twice");
    }
    auto values = split(std::string_view(term).substr(eq + 1), ',');
    for (const auto& v : values) {
      if (v.empty()) throw DomainError("empty value in sweep term '" + term + "'");
    }
    axes.emplace_back(key, std::move(values));
  }

  std::vector<SweepPoint> points{SweepPoint{{}, base}};
  for (const auto& [key, values] : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        SweepPoint q = p;
        q.settings.emplace_back(key, v);
        apply_setting(q.config, key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (const auto& p : points) {
    try {
      p.config.validate();
    } catch (const ConfigError& e) {
      throw DomainError("sweep point '" + p.label() + "': " + e.what());
    }
  }
  return points;
}

std::vector<int> predict_sentences(const CredibilityReport& report) {
  std::vector<int> out;
  out.reserve(report.sentences.size());
  for (const auto& s : report.sentences) {
    auto it = report.scores.classification.find(s.index);
    out.push_back(it != report.scores.classification.end() &&
                          it->second == Classification::not_factual
                      ? 1
                      : 0);
  }
  return out;
}

EvalRow evaluate(const std::vector<EvalRecord>& records, const SweepPoint& point,
                 Providers& providers, const EvalOptions& options) {
  if (records.empty()) throw DomainError("no records to evaluate");
  struct Outcome {
    bool skipped = false;
    std::string reason;
    std::vector<int> predictions;
  };
  std::vector<Outcome> outcomes(records.size());
  pipeline::parallel_for(records.size(), options.parallel, [&](std::size_t i) {
    const auto& record = records[i];
    const auto segmented = text::segment(record.text, point.config.max_paragraph_sentences);
    if (segmented.sentences.size() != record.gold_sentence_labels.size()) {
      outcomes[i].skipped = true;
      outcomes[i].reason = "record has " + std::to_string(record.gold_sentence_labels.size()) +
                           " labels but " + std::to_string(segmented.sentences.size()) +
                           " sentences";
      spdlog::warn("skipping record {}: {}", record.id, outcomes[i].reason);
      return;
    }
    pipeline::RunOptions run;
    const auto report = pipeline::run_verification(record.text, point.config, providers, run);
    outcomes[i].predictions = predict_sentences(report);
  });

  EvalRow row;
  row.point = point;
  row.subsets["all"];
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (outcomes[i].skipped) {
      row.skipped.push_back({records[i].id, outcomes[i].reason});
      continue;
    }
    ++row.records_scored;
    for (std::size_t s = 0; s < outcomes[i].predictions.size(); ++s) {
      const int p = outcomes[i].predictions[s];
      const int g = records[i].gold_sentence_labels[s];
      row.subsets["all"].add(p, g);
      if (!records[i].subset.empty()) row.subsets[records[i].subset].add(p, g);
    }
  }
  for (auto& [_, m] : row.subsets) m.finalize();
  return row;
}

std::vector<EvalRow> run_eval(const std::vector<EvalRecord>& records,
                              const std::vector<SweepPoint>& points, Providers& providers,
                              const EvalOptions& options) {
  if (records.empty()) throw DomainError("no records to evaluate");
  std::vector<EvalRow> rows;
  for (const auto& p : points) rows.push_back(evaluate(records, p, providers, options));
  return rows;
}

json metrics_json(const std::vector<EvalRow>& rows) {
  json out{{"schema_version", 1}, {"rows", json::array()}};
  for (const auto& row : rows) {
    json settings = json::object();
    for (const auto& [k, v] : row.point.settings) settings[k] = v;
    json skipped = json::array();
    for (const auto& s : row.skipped) skipped.push_back({{"id", s.id}, {"reason", s.reason}});
    json subsets = json::object();
    for (const auto& [name, m] : row.subsets) subsets[name] = to_json(m);
    out["rows"].push_back({{"label", row.point.label()},
                           {"settings", std::move(settings)},
                           {"config", to_json(row.point.config)},
                           {"records_scored", row.records_scored},
                           {"skipped", std::move(skipped)},
                           {"subsets", std::move(subsets)}});
  }
  return out;
}

std::string format_table(const std::vector<EvalRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-32s %-14s %6s %4s %4s %4s %9s %7s %7s\n", "config",
                "subset", "sents", "tp", "fp", "fn", "precision", "recall", "f1");
  out << line;
  for (const auto& row : rows) {
    for (const auto& [name, m] : row.subsets) {
      std::snprintf(line, sizeof(line), "%-32s %-14s %6lld %4lld %4lld %4lld %9s %7s %7s\n",
                    row.point.label().c_str(), name.c_str(), static_cast<long long>(m.count()),
                    static_cast<long long>(m.tp), static_cast<long long>(m.fp),
                    static_cast<long long>(m.fn), to_fixed4(m.precision).c_str(),
                    to_fixed4(m.recall).c_str(), to_fixed4(m.f1).c_str());
      out << line;
    }
  }
  return out.str();
}

}  // namespace factcheck::eval
