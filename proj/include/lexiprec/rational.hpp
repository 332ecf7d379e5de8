// Copyright 2026 The Lexiprec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXIPREC_RATIONAL_HPP_
#define LEXIPREC_RATIONAL_HPP_

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lexiprec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

inline int sign(const Rational& r) { return r.sign(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "n/d", or "n" when the denominator is 1.
inline std::string to_exact_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Fixed-point rendering with `precision` decimals. Nonzero values that would
// print as zero switch to scientific notation with `precision` significant
// digits so small probabilities stay visible.
inline std::string format_decimal(double value, int precision) {
  std::ostringstream os;
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const double threshold = 0.5 * std::pow(10.0, -precision);
  if (value != 0.0 && std::fabs(value) < threshold) {
    os << std::scientific << std::setprecision(precision - 1) << value;
  } else {
    if (value == 0.0) value = 0.0;  // drop the sign of -0.0
    os << std::fixed << std::setprecision(precision) << value;
  }
  return os.str();
}

inline std::string format_decimal(const Rational& value, int precision) {
  return format_decimal(to_double(value), precision);
}

}  // namespace lexiprec

#endif  // LEXIPREC_RATIONAL_HPP_
