#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace normins {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_pow(BigInt base, unsigned long e) {
  return boost::multiprecision::pow(base, static_cast<unsigned>(e));
}

inline std::string to_string(const BigInt& x) { return x.str(); }
inline std::string to_string(const Rational& x) {
  return boost::multiprecision::numerator(x).str() + "/" +
         boost::multiprecision::denominator(x).str();
}
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace normins
