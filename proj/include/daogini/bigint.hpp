#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace daogini {

// Token amounts in base units. Supplies routinely exceed 64 bits
// (1e9 tokens * 1e18 base units per token), so everything that touches a
// balance stays in arbitrary precision; conversion by `decimals` happens
// only at display time.
using Balance = boost::multiprecision::cpp_int;

// Parses a non-negative decimal integer. Rejects signs, exponents ("1e5"),
// separators, whitespace and empty input.
Balance parse_balance(std::string_view text);

inline std::string balance_to_string(const Balance& value) { return value.str(); }

// Correct-to-a-couple-ulp conversion of an exact integer ratio.
// Used to turn exact Gini numerators/denominators into doubles, keeping all
// rounding in the final division.
double ratio_to_double(const Balance& numerator, const Balance& denominator);

}  // namespace daogini
