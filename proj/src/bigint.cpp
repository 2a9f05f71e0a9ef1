#include "daogini/bigint.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "daogini/errors.hpp"

namespace daogini {

Balance parse_balance(std::string_view text) {
  if (text.empty()) throw ParseError("balance must not be empty");
  for (char c : text) {
    if (c < '0' || c > '9')
      throw ParseError("balance must be a plain decimal integer, got \"" + std::string(text) +
                       "\"");
  }
  // Leading zeros are tolerated on input; canonical form drops them.
  return Balance(std::string(text));
}

double ratio_to_double(const Balance& numerator, const Balance& denominator) {
  boost::multiprecision::cpp_rational q(numerator, denominator);
  return q.convert_to<double>();
}

}  // namespace daogini
