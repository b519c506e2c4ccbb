#include "fapres/tower_bound.hpp"

#include "fapres/error.hpp"

namespace fapres {

BigInt parse_bigint(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty integer");
  std::size_t i = text[0] == '-' || text[0] == '+' ? 1 : 0;
  if (i == text.size()) throw Error(ErrorCode::InvalidArgument, "malformed integer '" + text + "'");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9') throw Error(ErrorCode::InvalidArgument, "malformed integer '" + text + "'");
  BigInt v(text.substr(i));
  return text[0] == '-' ? BigInt(-v) : v;
}

}  // namespace fapres

namespace fapres::towerpres {

namespace {

// T(0..4) as machine integers; T(5) = 2^65536.
constexpr std::uint64_t kSmallTower[] = {1, 2, 4, 16, 65536};

}  // namespace

TowerBound TowerBound::exact(BigInt value) {
  if (value < 0) throw Error(ErrorCode::InvalidArgument, "negative value in a tower bound");
  TowerBound b;
  b.exact_ = true;
  b.value_ = std::move(value);
  return b;
}

TowerBound TowerBound::at_least_tower(std::uint64_t h) {
  TowerBound b;
  b.exact_ = false;
  b.height_ = h;
  return b;
}

std::string TowerBound::to_string() const {
  if (exact_) return value_.str();
  return "T(" + std::to_string(height_) + ")+";
}

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "less";
    case Ordering::Equal: return "equal";
    case Ordering::Greater: return "greater";
    case Ordering::Incomparable: return "incomparable";
  }
  return "?";
}

bool less_than_tower(const BigInt& x, std::uint64_t h) {
  if (h <= 4) return x < kSmallTower[h];
  // T(h) = 2^T(h-1): x < T(h) iff bit_length(x) <= T(h-1).
  const std::uint64_t bits = bit_length(x);
  if (h == 5) return bits <= kSmallTower[4];
  return true;  // T(h-1) >= T(5) exceeds any representable bit length
}

std::uint64_t tower_floor(const BigInt& x) {
  if (x < 1) throw Error(ErrorCode::InvalidArgument, "tower_floor of zero");
  std::uint64_t h = 0;
  while (!less_than_tower(x, h + 1)) ++h;
  return h;
}

TowerBound tower_T(std::uint64_t h, std::uint64_t bit_budget) { return tower_above(1, h, bit_budget); }

TowerBound tower_t(std::uint64_t h, const BigInt& n, std::uint64_t bit_budget) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative argument to t_h");
  return tower_above(n, h, bit_budget);
}

TowerBound tower_above(const BigInt& base, std::uint64_t levels, std::uint64_t bit_budget) {
  if (base < 0) throw Error(ErrorCode::InvalidArgument, "negative tower base");
  BigInt v = base;
  for (std::uint64_t i = 0; i < levels; ++i) {
    // 2^v needs v+1 bits.
    if (v >= bit_budget) {
      const std::uint64_t remaining = levels - i;
      if (v == 0) return TowerBound::at_least_tower(remaining - 1);
      return TowerBound::at_least_tower(tower_floor(v) + remaining);
    }
    v = pow2(static_cast<std::uint64_t>(v));
  }
  return TowerBound::exact(std::move(v));
}

Ordering tower_compare(const TowerBound& x, const TowerBound& y) {
  if (x.is_exact() && y.is_exact()) {
    if (x.value() < y.value()) return Ordering::Less;
    if (x.value() > y.value()) return Ordering::Greater;
    return Ordering::Equal;
  }
  if (x.is_exact()) return less_than_tower(x.value(), y.height()) ? Ordering::Less : Ordering::Incomparable;
  if (y.is_exact()) return less_than_tower(y.value(), x.height()) ? Ordering::Greater : Ordering::Incomparable;
  return Ordering::Incomparable;
}

TowerBound stronger_lower_bound(const TowerBound& x, const TowerBound& y) {
  if (x.is_exact() && y.is_exact()) return x.value() >= y.value() ? x : y;
  if (!x.is_exact() && !y.is_exact()) return x.height() >= y.height() ? x : y;
  const TowerBound& e = x.is_exact() ? x : y;
  const TowerBound& s = x.is_exact() ? y : x;
  return less_than_tower(e.value(), s.height()) ? s : e;
}

}  // namespace fapres::towerpres
