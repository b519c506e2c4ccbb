#include "fapres/orbit.hpp"

#include "fapres/error.hpp"

#include <json.hpp>

#include <algorithm>

namespace fapres::towerpres {

TupleV Milestone::tuple() const {
  if (kind == Kind::Level) return TupleV{m, 1, 0, 0};
  return TupleV{0, pow2(m), 0, 1};
}

// ---------------------------------------------------------------------------
// Seen-map: open addressing over 16-byte slots. Only tuples with a < 2^16,
// b < 2^64, c_exp < 64 and index < 2^40 are recorded, which covers every
// encoding of at most 64 columns reachable by any practical walk.

class OrbitWalker::SeenMap {
 public:
  static constexpr std::uint64_t kOccupied = std::uint64_t{1} << 63;
  static constexpr std::uint64_t kIndexMask = (std::uint64_t{1} << 40) - 1;

  struct Key {
    std::uint64_t head;  // a << 7 | c_exp << 1 | d
    std::uint64_t b;
  };

  static std::optional<Key> pack(const TupleV& v) {
    if (v.a >= (1u << 16) || v.c_exp >= 64 || bit_length(v.b) > 64) return std::nullopt;
    const auto a = static_cast<std::uint64_t>(v.a);
    const auto c = static_cast<std::uint64_t>(v.c_exp);
    return Key{a << 7 | c << 1 | static_cast<std::uint64_t>(v.d), static_cast<std::uint64_t>(v.b)};
  }

  std::optional<std::uint64_t> find(const Key& k) const {
    if (slots_.empty()) return std::nullopt;
    for (std::size_t i = hash(k) & mask(); slots_[i].meta & kOccupied; i = (i + 1) & mask())
      if (head_of(slots_[i]) == k.head && slots_[i].b == k.b) return slots_[i].meta & kIndexMask;
    return std::nullopt;
  }

  void insert(const Key& k, std::uint64_t index) {
    if ((size_ + 1) * 4 > slots_.size() * 3) grow();
    place(Slot{kOccupied | k.head << 40 | index, k.b});
    ++size_;
  }

  std::uint64_t size() const noexcept { return size_; }

 private:
  struct Slot {
    std::uint64_t meta = 0;  // occupied | head << 40 | index
    std::uint64_t b = 0;
  };

  static std::uint64_t head_of(const Slot& s) { return (s.meta & ~kOccupied) >> 40; }
  std::size_t mask() const { return slots_.size() - 1; }

  static std::uint64_t hash(const Key& k) {
    std::uint64_t x = k.b * 0x9E3779B97F4A7C15ULL ^ (k.head + 0x632BE59BD9B4E019ULL);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  void place(const Slot& s) {
    std::size_t i = hash(Key{head_of(s), s.b}) & mask();
    while (slots_[i].meta & kOccupied) i = (i + 1) & mask();
    slots_[i] = s;
  }

  void grow() {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(old.empty() ? 1024 : old.size() * 2, Slot{});
    for (const Slot& s : old)
      if (s.meta & kOccupied) place(s);
  }

  std::vector<Slot> slots_;
  std::uint64_t size_ = 0;
};

namespace {

std::uint64_t numeral_columns(const BigInt& x) { return std::max<std::uint64_t>(1, bit_length(x)); }

// Encoding length, or 0 when it exceeds `cap`.
std::uint64_t bounded_length(const TupleV& v, std::uint64_t cap) {
  if (v.c_exp >= cap) return 0;
  const std::uint64_t len =
      std::max({numeral_columns(v.a), numeral_columns(v.b), static_cast<std::uint64_t>(v.c_exp) + 1});
  return len <= cap ? len : 0;
}

}  // namespace

OrbitWalker::OrbitWalker(WalkerOptions options)
    : options_(options), current_(origin()), seen_(std::make_unique<SeenMap>()) {
  if (options_.record_max_length > 64) options_.record_max_length = 64;
  stats_.resize(options_.record_max_length + 1);
  visit(0, {});
}

OrbitWalker::OrbitWalker(OrbitWalker&&) noexcept = default;
OrbitWalker& OrbitWalker::operator=(OrbitWalker&&) noexcept = default;
OrbitWalker::~OrbitWalker() = default;

std::uint64_t OrbitWalker::seen_size() const noexcept { return seen_->size(); }

void OrbitWalker::run(std::uint64_t steps, const Observer& observer) {
  for (std::uint64_t i = 0; i < steps; ++i) {
    const int rule = step_f(current_);
    ++index_;
    visit(rule, observer);
  }
}

void OrbitWalker::visit(int rule, const Observer& observer) {
  const TupleV& v = current_;
  if (const std::uint64_t len = bounded_length(v, options_.record_max_length)) {
    LengthStats& s = stats_[len];
    ++s.visited;
    s.max_index = index_;
    s.argmax = v;
    if (!degraded_) {
      if (auto key = SeenMap::pack(v); key && index_ <= SeenMap::kIndexMask) {
        if (auto prior = seen_->find(*key))
          throw Error(ErrorCode::Verification, "tuple " + v.to_compact() + " revisited at index " +
                                                   std::to_string(index_) + " (first seen at " +
                                                   std::to_string(*prior) + ")");
        if (seen_->size() < options_.capacity)
          seen_->insert(*key, index_);
        else
          degraded_ = true;
      }
    }
  }
  if (v.c_exp == 0) {
    if (v.d == 0 && v.b == 1) milestones_.push_back({Milestone::Kind::Level, static_cast<std::uint64_t>(v.a), index_});
    if (v.d == 1 && v.a == 0 && is_power_of_two(v.b))
      milestones_.push_back({Milestone::Kind::Power, exact_log2(v.b), index_});
  }
  if (observer) observer(index_, v, rule);
}

std::optional<std::uint64_t> OrbitWalker::index_of(const TupleV& v) const {
  if (v == origin()) return 0;
  if (v == current_) return index_;
  if (auto key = SeenMap::pack(v)) return seen_->find(*key);
  return std::nullopt;
}

OrbitWalker orbit_walk(std::uint64_t budget, WalkerOptions options) {
  OrbitWalker w(options);
  w.run(budget);
  return w;
}

// ---------------------------------------------------------------------------
// Closed forms.
//
// From (0,2^m,1,1) the orbit runs a chain of rule-5/rule-4 blocks (j_1 = m,
// j_{i+1} = log2 j_i while j_i is 2^e with e >= 1), one rule-6 step, the
// mirror descent through rules 1 and 2, and the climb (0,b,1,0) -> (0,b+1,1,1)
// up to b = 2^{m+1}.

namespace {

bool positive_power(const BigInt& x) { return x > 1 && is_power_of_two(x); }

// Chain plus descent length out of (0,2^i,1,1), without the climb.
BigInt chain_cost(const BigInt& i) {
  if (i == 0) return 0;
  BigInt r = i + 1;
  if (positive_power(i)) r += chain_cost(BigInt(exact_log2(i)));
  return r;
}

BigInt ceil_log2(const BigInt& m) { return BigInt(bit_length(m - 1)); }

// sum of chain_cost(i) for i < m.
BigInt chain_cost_prefix(const BigInt& m) {
  if (m <= 1) return 0;
  return (m - 1) * (m + 2) / 2 + chain_cost_prefix(ceil_log2(m));
}

}  // namespace

BigInt power_milestone_index(const BigInt& m) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "negative milestone level");
  if (m == 0) return 2;
  return pow2(m + 1) + 2 * chain_cost_prefix(m);
}

BigInt cycle_length(const BigInt& m) { return pow2(m + 1) + 2 * chain_cost(m); }

namespace {

// Lower bound for a non-milestone tuple whose route ends at milestone m.
TowerBound beyond_budget_level(const BigInt& m) {
  // index > P(m-1) >= 2^m
  return TowerBound::at_least_tower(m >= 1 ? 1 + tower_floor(m) : 0);
}

}  // namespace

TowerBound orbit_index_fast(const TupleV& v, std::uint64_t bit_budget) {
  const VReason reason = check_V(v);
  if (reason != VReason::Ok)
    throw Error(ErrorCode::InvalidArgument, "tuple " + v.to_compact() + " is not in V: " + to_string(reason));

  BigInt a = v.a, b = v.b, e = v.c_exp, steps = 0;
  int d = v.d;
  if (d == 1) {
    if (a == 0 && is_power_of_two(b)) {
      const BigInt m = exact_log2(b);
      if (m + 2 > bit_budget) return TowerBound::at_least_tower(1 + tower_floor(m + 1));
      return TowerBound::exact(power_milestone_index(m));
    }
    steps += e;  // rule 4
    b += e;
    e = 0;
    while (positive_power(b)) {  // rule 5, then rule 4
      const std::uint64_t j = exact_log2(b);
      steps += 1 + j;
      a += 1;
      b = j;
    }
    steps += 1;  // rule 6
    d = 0;
  }
  if (a > 0) {
    // (a,b,2^e,0): b rule-1 steps then rule 2 gives (a-1, 2^{e+b}, 1, 0).
    BigInt exponent = e + b;
    steps += b + 1;
    for (;;) {
      if (exponent >= bit_budget) return tower_above(exponent, static_cast<std::uint64_t>(a), bit_budget);
      b = pow2(exponent);
      a -= 1;
      if (a == 0) break;
      steps += b + 1;
      exponent = b;
    }
  }
  // (0,b,1,0) climbs to (0,p,1,1), p the least power of two above b.
  const BigInt m = bit_length(b);
  if (m + 2 > bit_budget) return beyond_budget_level(m);
  steps += 2 * (pow2(m) - b) - 1;
  return TowerBound::exact(power_milestone_index(m) - steps);
}

TupleV orbit_tuple_at(const BigInt& k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative orbit index");
  if (k == 0) return origin();
  if (k == 1) return TupleV{0, 0, 0, 0};
  BigInt m = bit_length(k);
  while (power_milestone_index(m) > k) --m;
  BigInt o = k - power_milestone_index(m);
  if (o == 0) return TupleV{0, pow2(m), 0, 1};

  BigInt pos = 0, level = 0, r = pow2(m);
  if (m >= 1) {
    BigInt j = m;
    for (;;) {
      // rule 5 lands on (level+1, 0, 2^j, 1), then j rule-4 steps.
      ++level;
      if (o <= pos + 1 + j) {
        const BigInt t = o - pos - 1;
        return TupleV{level, t, j - t, 1};
      }
      pos += 1 + j;
      if (!positive_power(j)) break;
      j = exact_log2(j);
    }
    r = j;
  }
  // rule 6
  ++pos;
  if (o == pos) return TupleV{level, r, 0, 0};
  BigInt b = r;
  while (level > 0) {
    // (level, b, 1, 0) -> (level, b-t, 2^t, 0) -> (level-1, 2^b, 1, 0)
    if (o <= pos + b) {
      const BigInt t = o - pos;
      return TupleV{level, b - t, t, 0};
    }
    if (o == pos + b + 1) return TupleV{level - 1, pow2(b), 0, 0};
    pos += b + 1;
    b = pow2(b);
    --level;
  }
  // climb from (0, 2^m, 1, 0)
  const BigInt i = (o - pos + 1) / 2;
  const bool odd = (o - pos) % 2 == 1;
  return TupleV{0, b + i, 0, odd ? 1 : 0};
}

// ---------------------------------------------------------------------------
// r(n)

BigInt language_count(std::size_t n) {
  if (n == 0) return 0;
  const automata::Dfa& d = language_dfa();
  std::vector<BigInt> cur(d.state_count(), 0), nxt(d.state_count());
  cur[d.start()] = 1;
  for (std::size_t step = 0; step < n; ++step) {
    std::fill(nxt.begin(), nxt.end(), BigInt(0));
    for (automata::StateId s = 0; s < d.state_count(); ++s) {
      if (cur[s] == 0) continue;
      for (automata::StateId t : d.row(s)) nxt[t] += cur[s];
    }
    std::swap(cur, nxt);
  }
  BigInt total = 0;
  for (automata::StateId s = 0; s < d.state_count(); ++s)
    if (d.is_accepting(s)) total += cur[s];
  return total;
}

RBound r_lower(std::size_t n, const OrbitWalker& walker) {
  RBound out{TowerBound::exact(0), true, std::nullopt};
  const auto& stats = walker.length_stats();
  for (std::size_t len = 1; len <= n; ++len) {
    if (len >= stats.size()) {
      out.exact = false;
      continue;
    }
    const LengthStats& s = stats[len];
    if (s.visited > 0 && (!out.witness || s.max_index > out.value.value())) {
      out.value = TowerBound::exact(s.max_index);
      out.witness = s.argmax;
    }
    if (BigInt(s.visited) != language_count(len)) out.exact = false;
  }
  return out;
}

RBound r_enumerated(std::size_t n, std::uint64_t bit_budget) {
  RBound out{TowerBound::exact(0), true, std::nullopt};
  automata::for_each_accepted(language_dfa(), n, [&](std::span<const automata::Code> cols) {
    const automata::ConvolutionString w(tuple_alphabet(), std::vector<automata::Code>(cols.begin(), cols.end()));
    const auto v = decode_string(w);
    if (!v) throw Error(ErrorCode::Internal, "language automaton accepted a non-tuple " + w.to_string());
    const TowerBound idx = orbit_index_fast(*v, bit_budget);
    if (!idx.is_exact()) out.exact = false;
    if (!out.witness || !(stronger_lower_bound(out.value, idx) == out.value)) {
      out.value = idx;
      out.witness = *v;
    }
    return true;
  });
  return out;
}

TowerBound r_symbolic(std::size_t n) {
  if (n <= 2) return TowerBound::at_least_tower(0);
  if (n > 64) throw Error(ErrorCode::Budget, "length too large for a symbolic height");
  return TowerBound::at_least_tower((std::uint64_t{1} << (n - 1)) - 1);
}

RBound r_best(std::size_t n, const OrbitWalker* walker, std::size_t enumerate_limit, std::uint64_t bit_budget) {
  std::vector<RBound> candidates;
  if (n >= 3) candidates.push_back({r_symbolic(n), false, TupleV{(BigInt(1) << (n - 1)) + 1, 1, 0, 0}});
  if (walker) candidates.push_back(r_lower(n, *walker));
  if (n <= enumerate_limit) {
    candidates.push_back(r_enumerated(n, bit_budget));
  } else if (enumerate_limit > 0) {
    // strings of length <= limit are among those of length <= n
    candidates.push_back(r_enumerated(enumerate_limit, bit_budget));
    candidates.back().exact = false;
  }
  RBound out{TowerBound::exact(0), n == 0, std::nullopt};
  bool have = false;
  for (const RBound& r : candidates) {
    if (!have || !(stronger_lower_bound(out.value, r.value) == out.value)) {
      out.value = r.value;
      out.witness = r.witness;
      have = true;
    }
  }
  for (const RBound& r : candidates)
    if (r.exact && r.value == out.value) out.exact = true;
  return out;
}

std::string milestones_json(const OrbitWalker& walker) {
  nlohmann::json list = nlohmann::json::array();
  for (const Milestone& m : walker.milestones())
    list.push_back({{"kind", m.kind == Milestone::Kind::Level ? "level" : "power"},
                    {"m", m.m},
                    {"index", m.index},
                    {"tuple", m.tuple().to_compact()}});
  nlohmann::json doc = {{"steps", walker.index()},
                        {"seen", walker.seen_size()},
                        {"degraded", walker.degraded()},
                        {"milestones", std::move(list)}};
  return doc.dump(2);
}

}  // namespace fapres::towerpres
