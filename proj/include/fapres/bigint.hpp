#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace fapres {

// Arbitrary-precision integer. Used both for naturals (tuple components, orbit
// indices) and for signed exponents in group normal forms.
using BigInt = boost::multiprecision::cpp_int;

// Number of bits in the binary representation; 0 for zero.
inline std::uint64_t bit_length(const BigInt& x) {
  if (x <= 0) return 0;
  return boost::multiprecision::msb(x) + 1;
}

inline bool is_power_of_two(const BigInt& x) {
  return x > 0 && boost::multiprecision::lsb(x) == boost::multiprecision::msb(x);
}

// log2 of a power of two. Caller guarantees is_power_of_two(x).
inline std::uint64_t exact_log2(const BigInt& x) { return boost::multiprecision::msb(x); }

inline BigInt pow2(std::uint64_t e) {
  BigInt r = 1;
  r <<= static_cast<unsigned>(e);
  return r;
}

inline BigInt pow2(const BigInt& e) { return pow2(static_cast<std::uint64_t>(e)); }

inline std::string to_decimal(const BigInt& x) { return x.str(); }

BigInt parse_bigint(const std::string& text);

}  // namespace fapres
