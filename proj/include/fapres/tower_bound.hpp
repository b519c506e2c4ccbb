#pragma once

#include "fapres/bigint.hpp"

#include <cstdint>
#include <string>

namespace fapres::towerpres {

// Default cap on the size of exact intermediate values.
inline constexpr std::uint64_t kDefaultBitBudget = std::uint64_t{1} << 20;

// Either an exact natural number or the statement "at least T(h)", where
// T(0) = 1 and T(h+1) = 2^T(h).
class TowerBound {
 public:
  TowerBound() = default;
  static TowerBound exact(BigInt value);
  static TowerBound at_least_tower(std::uint64_t h);

  bool is_exact() const noexcept { return exact_; }
  const BigInt& value() const noexcept { return value_; }
  std::uint64_t height() const noexcept { return height_; }

  // Decimal for exact values, "T(h)+" for symbolic ones.
  std::string to_string() const;

  bool operator==(const TowerBound& other) const = default;

 private:
  bool exact_ = true;
  BigInt value_ = 0;
  std::uint64_t height_ = 0;
};

enum class Ordering { Less, Equal, Greater, Incomparable };

const char* to_string(Ordering o);

// x < T(h), decided from bit lengths without materializing T(h) for h >= 6.
bool less_than_tower(const BigInt& x, std::uint64_t h);
// Largest h with T(h) <= x. Requires x >= 1.
std::uint64_t tower_floor(const BigInt& x);

TowerBound tower_T(std::uint64_t h, std::uint64_t bit_budget = kDefaultBitBudget);
// t_0(n) = n, t_{h+1}(n) = 2^{t_h(n)}.
TowerBound tower_t(std::uint64_t h, const BigInt& n, std::uint64_t bit_budget = kDefaultBitBudget);
// Lower bound for 2^2^...^2^base with `levels` exponentiations.
TowerBound tower_above(const BigInt& base, std::uint64_t levels, std::uint64_t bit_budget = kDefaultBitBudget);

// Exact whenever bit-length reasoning decides the order; a symbolic bound
// says nothing about how far above T(h) the value lies.
Ordering tower_compare(const TowerBound& x, const TowerBound& y);

// Reading both arguments as lower bounds on the same quantity, the stronger one.
TowerBound stronger_lower_bound(const TowerBound& x, const TowerBound& y);

}  // namespace fapres::towerpres
