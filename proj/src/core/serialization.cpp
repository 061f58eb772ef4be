#include "factcheck/core/serialization.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "factcheck/core/canonical_json.hpp"
#include "factcheck/core/errors.hpp"

namespace factcheck {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw DomainError(std::string("missing field '") + name + "'");
  return *it;
}

std::string fraction_text(const Fraction& f) {
  return numerator(f).str() + "/" + denominator(f).str();
}

Fraction parse_fraction_text(const std::string& s) {
  using boost::multiprecision::cpp_int;
  auto slash = s.find('/');
  if (slash == std::string::npos) throw DomainError("bad fraction '" + s + "'");
  try {
    cpp_int num(s.substr(0, slash));
    cpp_int den(s.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + s + "'");
    return Fraction(num, den);
  } catch (const std::runtime_error&) {
    throw DomainError("bad fraction '" + s + "'");
  }
}

json score_object(const Fraction& f) {
  return json{{"bucket", to_string(assign_bucket(f))},
              {"fraction", fraction_text(f)},
              {"score", decimal4(f)}};
}

std::optional<Fraction> parse_score_object(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_fraction_text(field(j, "fraction").get<std::string>());
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("field '") + name + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

json to_json(const PipelineConfig& c) {
  return json{{"llm_profile", c.llm_profile},
              {"retrieval_mode", to_string(c.retrieval_mode)},
              {"top_n_results", c.top_n_results},
              {"top_k_passages", c.top_k_passages},
              {"context_window_m", c.context_window_m},
              {"threshold_t", decimal4(c.threshold_t)},
              {"count_irrelevant_in_total", c.count_irrelevant_in_total},
              {"parallelism", c.parallelism},
              {"max_paragraph_sentences", c.max_paragraph_sentences}};
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "llm_profile",      "retrieval_mode", "top_n_results",
      "top_k_passages",   "context_window_m", "threshold_t",
      "count_irrelevant_in_total", "parallelism", "max_paragraph_sentences"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError("unknown config field '" + it.key() + "'");
  }
  PipelineConfig c;
  if (j.contains("llm_profile")) {
    if (!j["llm_profile"].is_string()) throw ConfigError("llm_profile must be a string");
    c.llm_profile = j["llm_profile"].get<std::string>();
  }
  if (j.contains("retrieval_mode")) {
    if (!j["retrieval_mode"].is_string()) throw ConfigError("retrieval_mode must be a string");
    try {
      c.retrieval_mode = parse_retrieval_mode(j["retrieval_mode"].get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("top_n_results")) c.top_n_results = int_field(j, "top_n_results");
  if (j.contains("top_k_passages")) c.top_k_passages = int_field(j, "top_k_passages");
  if (j.contains("context_window_m")) c.context_window_m = int_field(j, "context_window_m");
  if (j.contains("parallelism")) c.parallelism = int_field(j, "parallelism");
  if (j.contains("max_paragraph_sentences")) {
    c.max_paragraph_sentences = int_field(j, "max_paragraph_sentences");
  }
  if (j.contains("threshold_t")) {
    if (!j["threshold_t"].is_number()) throw ConfigError("threshold_t must be a number");
    try {
      c.threshold_t = fraction_from_decimal(j["threshold_t"].get<double>());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("count_irrelevant_in_total")) {
    if (!j["count_irrelevant_in_total"].is_boolean()) {
      throw ConfigError("count_irrelevant_in_total must be a boolean");
    }
    c.count_irrelevant_in_total = j["count_irrelevant_in_total"].get<bool>();
  }
  c.validate();
  return c;
}

json to_json(const ScoreBreakdown& b) {
  json sentences = json::array();
  for (const auto& [index, counts] : b.counts) {
    json s{{"index", index},
           {"support", counts.support},
           {"total", counts.total},
           {"status", to_string(b.status.count(index) ? b.status.at(index)
                                                      : SentenceStatus::unverified)},
           {"score", nullptr},
           {"bucket", nullptr},
           {"classification", nullptr}};
    if (auto it = b.sentence_scores.find(index); it != b.sentence_scores.end()) {
      s["score"] = decimal4(it->second);
      s["bucket"] = to_string(assign_bucket(it->second));
    }
    if (auto it = b.classification.find(index); it != b.classification.end()) {
      s["classification"] = to_string(it->second);
    }
    sentences.push_back(std::move(s));
  }
  return json{{"sentences", std::move(sentences)},
              {"overall", b.overall_score ? score_object(*b.overall_score) : json(nullptr)},
              {"pooled", b.pooled_score ? score_object(*b.pooled_score) : json(nullptr)}};
}

ScoreBreakdown breakdown_from_json(const json& j) {
  ScoreBreakdown b;
  for (const auto& s : field(j, "sentences")) {
    const int index = field(s, "index").get<int>();
    SentenceCounts counts{field(s, "support").get<std::int64_t>(),
                          field(s, "total").get<std::int64_t>()};
    b.counts[index] = counts;
    b.status[index] = parse_sentence_status(field(s, "status").get<std::string>());
    if (!field(s, "score").is_null()) {
      if (counts.total <= 0) throw DomainError("score present with zero total");
      b.sentence_scores[index] = Fraction(counts.support, counts.total);
    }
    const json& cls = field(s, "classification");
    if (!cls.is_null()) {
      const auto name = cls.get<std::string>();
      if (name == "factual") {
        b.classification[index] = Classification::factual;
      } else if (name == "not_factual") {
        b.classification[index] = Classification::not_factual;
      } else {
        throw DomainError("unknown classification '" + name + "'");
      }
    }
  }
  b.overall_score = parse_score_object(field(j, "overall"));
  b.pooled_score = parse_score_object(field(j, "pooled"));
  return b;
}

json to_json(const CredibilityReport& r) {
  json sentences = json::array();
  for (const auto& s : r.sentences) {
    json claims = json::array();
    for (const auto& c : s.claims) {
      json issues = json::array();
      for (const auto& issue : c.retrieval_issues) {
        issues.push_back({{"url", issue.url}, {"error", issue.error}});
      }
      claims.push_back({{"id", c.id},
                        {"sentence_index", c.sentence_index},
                        {"text", c.text},
                        {"query", c.query},
                        {"status", to_string(c.status)},
                        {"retrieval_issues", std::move(issues)}});
    }
    sentences.push_back({{"index", s.index},
                         {"paragraph_index", s.paragraph_index},
                         {"text", s.text},
                         {"status", to_string(s.status)},
                         {"error", s.error},
                         {"claims", std::move(claims)}});
  }
  json evidence = json::array();
  for (const auto& e : r.evidence) {
    evidence.push_back({{"id", e.id},
                        {"claim_id", e.claim_id},
                        {"rank", e.rank},
                        {"url", e.url},
                        {"hostname", e.hostname},
                        {"category", to_string(e.category)},
                        {"category_fallback", e.category_fallback},
                        {"match_sentence_index", e.match_sentence_index},
                        {"window_start", e.window_start},
                        {"window_end", e.window_end},
                        {"text", e.text},
                        {"relevance_score", decimal4(e.relevance_score)},
                        {"from_snippet", e.from_snippet}});
  }
  json judgments = json::array();
  for (const auto& jd : r.judgments) {
    judgments.push_back({{"claim_id", jd.claim_id},
                         {"evidence_id", jd.evidence_id},
                         {"verdict", to_string(jd.verdict)},
                         {"rationale", jd.rationale},
                         {"provider_error", jd.provider_error}});
  }
  return json{{"schema_version", kReportSchemaVersion},
              {"job_id", r.job_id},
              {"input_text", r.input_text},
              {"config", to_json(r.config)},
              {"sentences", std::move(sentences)},
              {"evidence", std::move(evidence)},
              {"judgments", std::move(judgments)},
              {"scores", to_json(r.scores)}};
}

CredibilityReport report_from_json(const json& j) {
  if (field(j, "schema_version").get<int>() != kReportSchemaVersion) {
    throw DomainError("unsupported report schema_version");
  }
  CredibilityReport r;
  r.job_id = field(j, "job_id").get<std::string>();
  r.input_text = field(j, "input_text").get<std::string>();
  r.config = config_from_json(field(j, "config"));
  for (const auto& s : field(j, "sentences")) {
    SentenceUnit unit;
    unit.index = field(s, "index").get<int>();
    unit.paragraph_index = field(s, "paragraph_index").get<int>();
    unit.text = field(s, "text").get<std::string>();
    unit.status = parse_sentence_status(field(s, "status").get<std::string>());
    unit.error = field(s, "error").get<std::string>();
    for (const auto& c : field(s, "claims")) {
      AtomicClaim claim;
      claim.id = field(c, "id").get<std::string>();
      claim.sentence_index = field(c, "sentence_index").get<int>();
      claim.text = field(c, "text").get<std::string>();
      claim.query = field(c, "query").get<std::string>();
      claim.status = parse_claim_status(field(c, "status").get<std::string>());
      for (const auto& issue : field(c, "retrieval_issues")) {
        claim.retrieval_issues.push_back({field(issue, "url").get<std::string>(),
                                          field(issue, "error").get<std::string>()});
      }
      unit.claims.push_back(std::move(claim));
    }
    r.sentences.push_back(std::move(unit));
  }
  for (const auto& e : field(j, "evidence")) {
    EvidencePassage p;
    p.id = field(e, "id").get<std::string>();
    p.claim_id = field(e, "claim_id").get<std::string>();
    p.rank = field(e, "rank").get<int>();
    p.url = field(e, "url").get<std::string>();
    p.hostname = field(e, "hostname").get<std::string>();
    p.category = parse_category(field(e, "category").get<std::string>());
    p.category_fallback = field(e, "category_fallback").get<bool>();
    p.match_sentence_index = field(e, "match_sentence_index").get<int>();
    p.window_start = field(e, "window_start").get<int>();
    p.window_end = field(e, "window_end").get<int>();
    p.text = field(e, "text").get<std::string>();
    p.relevance_score = field(e, "relevance_score").get<double>();
    p.from_snippet = field(e, "from_snippet").get<bool>();
    r.evidence.push_back(std::move(p));
  }
  for (const auto& jd : field(j, "judgments")) {
    Judgment judgment;
    judgment.claim_id = field(jd, "claim_id").get<std::string>();
    judgment.evidence_id = field(jd, "evidence_id").get<std::string>();
    judgment.verdict = parse_verdict_name(field(jd, "verdict").get<std::string>());
    judgment.rationale = field(jd, "rationale").get<std::string>();
    judgment.provider_error = field(jd, "provider_error").get<bool>();
    r.judgments.push_back(std::move(judgment));
  }
  r.scores = breakdown_from_json(field(j, "scores"));
  return r;
}

void canonicalize(CredibilityReport& r) {
  std::sort(r.sentences.begin(), r.sentences.end(),
            [](const SentenceUnit& a, const SentenceUnit& b) { return a.index < b.index; });
  std::map<std::string, std::size_t, std::less<>> claim_order;
  for (const auto& s : r.sentences) {
    for (const auto& c : s.claims) claim_order.emplace(c.id, claim_order.size());
  }
  const auto claim_pos = [&](const std::string& id) {
    auto it = claim_order.find(id);
    return it == claim_order.end() ? claim_order.size() : it->second;
  };
  std::stable_sort(r.evidence.begin(), r.evidence.end(),
                   [&](const EvidencePassage& a, const EvidencePassage& b) {
                     return std::tuple(claim_pos(a.claim_id), a.rank, a.id) <
                            std::tuple(claim_pos(b.claim_id), b.rank, b.id);
                   });
  std::map<std::string, std::size_t, std::less<>> evidence_order;
  for (const auto& e : r.evidence) evidence_order.emplace(e.id, evidence_order.size());
  const auto evidence_pos = [&](const std::string& id) {
    auto it = evidence_order.find(id);
    return it == evidence_order.end() ? evidence_order.size() : it->second;
  };
  std::stable_sort(r.judgments.begin(), r.judgments.end(),
                   [&](const Judgment& a, const Judgment& b) {
                     return std::tuple(claim_pos(a.claim_id), evidence_pos(a.evidence_id),
                                       a.claim_id, a.evidence_id) <
                            std::tuple(claim_pos(b.claim_id), evidence_pos(b.evidence_id),
                                       b.claim_id, b.evidence_id);
                   });
}

std::string canonical_serialize(const CredibilityReport& report) {
  CredibilityReport copy = report;
  canonicalize(copy);
  return canonical_dump(to_json(copy)) + "\n";
}

CredibilityReport deserialize_report(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    return report_from_json(j);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace factcheck
