#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "factcheck/core/types.hpp"

namespace factcheck {

/// Compact JSON with keys in byte order and every floating-point number
/// rendered with exactly four decimals. Integers, strings and literals are
/// written as usual. Invalid UTF-8 in strings is replaced, never rejected.
std::string canonical_dump(const nlohmann::json& value);

/// JSON number holding `f` rounded to four decimals.
nlohmann::json decimal4(const Fraction& f);
nlohmann::json decimal4(double value);

}  // namespace factcheck
