#include "factcheck/core/canonical_json.hpp"

#include <cmath>
#include <cstdio>

namespace factcheck {

namespace {

void write_string(const std::string& s, std::string& out) {
  out += nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void write(const nlohmann::json& v, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        write_string(it.key(), out);
        out += ':';
        write(it.value(), out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        write(item, out);
      }
      out += ']';
      break;
    }
    case value_t::string:
      write_string(v.get_ref<const std::string&>(), out);
      break;
    case value_t::number_float: {
      double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        break;
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.4f", d);
      std::string s = buf;
      if (s == "-0.0000") s = "0.0000";
      out += s;
      break;
    }
    default:
      out += v.dump();
      break;
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& value) {
  std::string out;
  write(value, out);
  return out;
}

nlohmann::json decimal4(const Fraction& f) { return std::stod(to_fixed4(f)); }

nlohmann::json decimal4(double value) {
  return std::round(value * 10000.0) / 10000.0;
}

}  // namespace factcheck
