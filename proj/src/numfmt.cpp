#include "daogini/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "daogini/errors.hpp"

namespace daogini {

std::string format_double_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("to_chars failed");
  return std::string(buf, ptr);
}

std::string format_fixed(double v, int digits) {
  if (!std::isfinite(v)) throw Error("cannot render non-finite value");
  double scale = std::pow(10.0, digits);
  double scaled = v * scale;
  // llround rounds halves away from zero, which is exactly the half-up rule.
  long long units = std::llround(scaled);
  bool negative = units < 0;
  unsigned long long mag = negative ? -static_cast<unsigned long long>(units)
                                    : static_cast<unsigned long long>(units);
  unsigned long long div = 1;
  for (int i = 0; i < digits; ++i) div *= 10;
  char buf[64];
  if (digits == 0) {
    std::snprintf(buf, sizeof(buf), "%s%llu", negative ? "-" : "", mag);
  } else {
    std::snprintf(buf, sizeof(buf), "%s%llu.%0*llu", negative ? "-" : "", mag / div, digits,
                  mag % div);
  }
  return buf;
}

std::string format_sig(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
  return buf;
}

double parse_double_strict(std::string_view text, const std::string& context) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(context + ": not a number: \"" + std::string(text) + "\"");
  return out;
}

}  // namespace daogini
