#include "factcheck/prompts/prompt_assets.hpp"

#include "factcheck/core/errors.hpp"

namespace factcheck::prompts {

namespace detail {
const std::map<std::string, std::string>& embedded_assets();
}

const std::string& asset(std::string_view name) {
  const auto& assets = detail::embedded_assets();
  auto it = assets.find(std::string(name));
  if (it == assets.end()) throw DomainError("unknown prompt asset '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> asset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : detail::embedded_assets()) names.push_back(name);
  return names;
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = values.find(key);
    if (it == values.end()) throw DomainError("no value for placeholder {{" + key + "}}");
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

}  // namespace factcheck::prompts
