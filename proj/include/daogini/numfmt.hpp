#pragma once

#include <string>
#include <string_view>

namespace daogini {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double_shortest(double v);

// Fixed-point with `digits` decimals, half-up rounding away from zero.
// Rendered 2-decimal report cells go through this so they always equal the
// half-up rounding of the stored full-precision value.
std::string format_fixed(double v, int digits);

// Up to `sig` significant digits, trailing zeros trimmed (printf %g).
std::string format_sig(double v, int sig);

// Strict full-string parse, dot decimal separator only.
double parse_double_strict(std::string_view text, const std::string& context);

}  // namespace daogini
