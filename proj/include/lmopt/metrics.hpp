#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lmopt {

// Lowercase, drop ASCII punctuation, collapse internal whitespace runs to one
// space, strip surrounding whitespace.
std::string normalize_answer(std::string_view text);

// 1.0 iff the normalized strings are equal.
double exact_match(std::string_view prediction, std::string_view gold);

// Canonical form of a numeric token: sign only when negative, no grouping
// commas, no leading integer zeros, no trailing fractional zeros.
// Returns nullopt for text that is not a single number.
std::optional<std::string> canonical_number(std::string_view token);

// Last number in `text`. A sign belongs to the number only when it is not
// preceded by an alphanumeric character ("5-3" reads as 5 and 3).
std::optional<std::string> extract_last_number(std::string_view text);

// Last number on the first non-empty line of `response` compared with `gold`.
double gsm8k_score(std::string_view response, std::string_view gold);

} // namespace lmopt
