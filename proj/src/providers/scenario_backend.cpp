#include "factcheck/providers/scenario_backend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "factcheck/core/errors.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kClaimMarker = "Break the following sentence into atomic claims: ";
constexpr std::string_view kJudgeMarker = "Final Verdict: <yes for evidence agrees";
constexpr std::string_view kHostMarker = "Hostname: ";

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Text after the last line starting with `label`, or nullopt.
std::optional<std::string> last_labeled_line(const std::string& text, std::string_view label) {
  std::optional<std::string> found;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(label, 0) == 0) found = line.substr(label.size());
  }
  return found;
}

bool all_keywords(const std::string& haystack_lower, const json& keywords) {
  for (const auto& kw : keywords) {
    if (haystack_lower.find(lower(kw.get<std::string>())) == std::string::npos) return false;
  }
  return true;
}

// Child keys override parent keys; arrays of rules are concatenated with the
// child's rules first so they win.
json merge_scenarios(json parent, const json& child) {
  for (const auto& [key, value] : child.items()) {
    if (key == "extends") continue;
    if (value.is_object() && parent.contains(key) && parent[key].is_object()) {
      for (const auto& [k, v] : value.items()) parent[key][k] = v;
    } else if (value.is_array() && parent.contains(key) && parent[key].is_array()) {
      json merged = value;
      for (const auto& rule : parent[key]) merged.push_back(rule);
      parent[key] = std::move(merged);
    } else {
      parent[key] = value;
    }
  }
  return parent;
}

json load_scenario(const fs::path& path, int depth) {
  if (depth > 8) throw ConfigError("scenario 'extends' chain is too deep");
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  // Page files are resolved against the declaring scenario's directory.
  if (j.contains("pages")) {
    for (auto& [url, page] : j["pages"].items()) {
      if (page.contains("file")) {
        page["file"] = (fs::absolute(path).parent_path() / page["file"].get<std::string>()).string();
      }
    }
  }
  if (j.contains("extends")) {
    json parent = load_scenario(path.parent_path() / j["extends"].get<std::string>(), depth + 1);
    return merge_scenarios(std::move(parent), j);
  }
  return j;
}

std::string render_claims(const json& claims) {
  if (claims.is_null()) return "Claim_1: (no factual claims)";
  if (claims.is_string()) return claims.get<std::string>();
  std::string out;
  int k = 1;
  for (const auto& c : claims) {
    if (!out.empty()) out += '\n';
    out += "Claim_" + std::to_string(k++) + ": " + c.get<std::string>();
  }
  return out;
}

}  // namespace

ScenarioBackend::ScenarioBackend(json scenario, fs::path base_dir)
    : scenario_(std::move(scenario)), base_dir_(std::move(base_dir)) {
  if (!scenario_.is_object()) throw ConfigError("scenario must be a JSON object");
}

std::shared_ptr<ScenarioBackend> ScenarioBackend::load(const fs::path& path) {
  return std::make_shared<ScenarioBackend>(load_scenario(path, 0), path.parent_path());
}

json ScenarioBackend::execute(const ProviderRequest& request) {
  switch (request.kind) {
    case RequestKind::chat: return chat(request.payload);
    case RequestKind::embed: {
      json vectors = json::array();
      for (const auto& t : request.payload.at("input")) {
        vectors.push_back(hashed_embedding(t.get<std::string>()));
      }
      return json{{"embeddings", std::move(vectors)}};
    }
    case RequestKind::search: return search(request.payload);
    case RequestKind::fetch: return fetch(request.payload);
  }
  throw DomainError("unknown request kind");
}

std::vector<double> ScenarioBackend::hashed_embedding(const std::string& text) {
  std::vector<double> v(8, 0.0);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::uint32_t h = 2166136261u;  // FNV-1a
    for (unsigned char c : token) {
      h ^= c;
      h *= 16777619u;
    }
    v[h % 8] += (h >> 16) & 1 ? 1.0 : 0.5;
    token.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      token += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
  return v;
}

json ScenarioBackend::chat(const json& payload) const {
  const auto& messages = payload.at("messages");
  if (messages.empty()) throw DomainError("chat request without messages");
  const std::string first = messages.front().at("content").get<std::string>();
  if (first.find(kJudgeMarker) != std::string::npos) return json{{"content", judge_answer(first)}};
  if (first.find(kClaimMarker) != std::string::npos) {
    return json{{"content", claim_answer(messages)}};
  }
  if (first.find(kHostMarker) != std::string::npos) {
    return json{{"content", category_answer(first)}};
  }
  throw ProviderError("scenario backend does not recognize this prompt");
}

std::string ScenarioBackend::claim_answer(const json& messages) const {
  const std::string prompt = messages.front().at("content").get<std::string>();
  auto target = last_labeled_line(prompt, kClaimMarker);
  if (!target) throw ProviderError("claim prompt without a target line");
  // Drop the "S<k>: " label.
  std::string sentence = *target;
  if (auto colon = sentence.find(": "); colon != std::string::npos) sentence.erase(0, colon + 2);
  sentence = text::collapse_whitespace(sentence);

  const json claims = scenario_.value("claims", json::object());
  auto it = claims.find(sentence);
  if (it == claims.end()) {
    throw ProviderError("scenario has no claims for sentence: " + sentence);
  }
  const bool is_retry = messages.size() > 1;
  if (it->is_object()) {
    return render_claims(is_retry ? it->value("retry", json()) : it->value("first", json()));
  }
  return render_claims(*it);
}

std::string ScenarioBackend::judge_answer(const std::string& prompt) const {
  const std::string claim = lower(last_labeled_line(prompt, "Claim: ").value_or(""));
  const std::string evidence = lower(last_labeled_line(prompt, "Evidence: ").value_or(""));
  const json* chosen = nullptr;
  if (scenario_.contains("verdicts")) {
    for (const auto& rule : scenario_["verdicts"]) {
      if (all_keywords(claim, rule.value("claim", json::array())) &&
          all_keywords(evidence, rule.value("evidence", json::array()))) {
        chosen = &rule;
        break;
      }
    }
  }
  static const json kFallback{{"verdict", "no"},
                              {"rationale", "The evidence does not establish the claim."}};
  if (!chosen) chosen = scenario_.contains("default_verdict") ? &scenario_["default_verdict"]
                                                               : &kFallback;
  if (chosen->contains("raw")) return (*chosen)["raw"].get<std::string>();
  std::string answer = "Rationale: " + chosen->value("rationale", std::string());
  const json& verdict = chosen->contains("verdict") ? (*chosen)["verdict"] : json();
  if (!verdict.is_null()) answer += "\nFinal Verdict: " + verdict.get<std::string>() + ".";
  return answer;
}

std::string ScenarioBackend::category_answer(const std::string& prompt) const {
  // The hostname follows the marker on the last line of the prompt.
  const auto pos = prompt.rfind(kHostMarker);
  std::string host = text::collapse_whitespace(prompt.substr(pos + kHostMarker.size()));
  const json categories = scenario_.value("categories", json::object());
  if (auto it = categories.find(host); it != categories.end()) return it->get<std::string>();
  return "etc";
}

json ScenarioBackend::search(const json& payload) const {
  const std::string query = payload.at("query").get<std::string>();
  const std::string q = lower(query);
  if (scenario_.contains("search")) {
    for (const auto& rule : scenario_["search"]) {
      const bool hit = rule.contains("query") ? rule["query"].get<std::string>() == query
                                              : all_keywords(q, rule.value("match", json::array()));
      if (hit) return json{{"results", rule.value("results", json::array())}};
    }
  }
  return json{{"results", json::array()}};
}

json ScenarioBackend::fetch(const json& payload) const {
  const std::string url = payload.at("url").get<std::string>();
  const json pages = scenario_.value("pages", json::object());
  auto it = pages.find(url);
  if (it == pages.end()) return json{{"status", 404}};
  const json& page = *it;
  const std::string error = page.value("error", "");
  if (error == "transport") throw TransportError("simulated connection failure: " + url);
  if (error == "timeout") throw FetchTimeout("simulated timeout: " + url);
  const int status = page.value("status", 200);
  if (status >= 400) return json{{"status", status}};
  std::string body;
  if (page.contains("file")) {
    fs::path p = page["file"].get<std::string>();
    if (p.is_relative()) p = base_dir_ / p;
    body = read_file(p);
  } else {
    body = page.value("html", "");
  }
  return json{{"status", status}, {"body", std::move(body)}};
}

}  // namespace factcheck
