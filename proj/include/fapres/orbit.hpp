#pragma once

// The orbit of (0,0,1,1) under f: a brute-force walker with a bounded
// tuple -> index map, and closed-form index arithmetic for arbitrary tuples.

#include "fapres/towerpres.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fapres::towerpres {

struct Milestone {
  enum class Kind { Level, Power };  // (m,1,1,0) and (0,2^m,1,1)
  Kind kind;
  std::uint64_t m;
  std::uint64_t index;

  TupleV tuple() const;
  bool operator==(const Milestone&) const = default;
};

struct WalkerOptions {
  std::uint64_t capacity = std::uint64_t{1} << 24;  // seen-map entries
  std::uint64_t record_max_length = 64;              // longer encodings are not indexed
};

struct LengthStats {
  std::uint64_t visited = 0;
  std::uint64_t max_index = 0;
  TupleV argmax;
};

class OrbitWalker {
 public:
  using Observer = std::function<void(std::uint64_t index, const TupleV& v, int rule)>;

  explicit OrbitWalker(WalkerOptions options = {});
  OrbitWalker(OrbitWalker&&) noexcept;
  OrbitWalker& operator=(OrbitWalker&&) noexcept;
  ~OrbitWalker();

  // Applies f `steps` more times. The observer sees every new tuple with the
  // rule that produced it. Throws Verification if a tuple repeats.
  void run(std::uint64_t steps, const Observer& observer = {});

  std::uint64_t index() const noexcept { return index_; }
  const TupleV& current() const noexcept { return current_; }
  const WalkerOptions& options() const noexcept { return options_; }

  std::optional<std::uint64_t> index_of(const TupleV& v) const;
  std::uint64_t seen_size() const noexcept;
  // True once the seen-map hit its capacity and stopped recording.
  bool degraded() const noexcept { return degraded_; }

  const std::vector<Milestone>& milestones() const noexcept { return milestones_; }
  // Indexed by encoding length, 1..record_max_length.
  const std::vector<LengthStats>& length_stats() const noexcept { return stats_; }

 private:
  class SeenMap;
  void visit(int rule, const Observer& observer);

  WalkerOptions options_;
  TupleV current_;
  std::uint64_t index_ = 0;
  bool degraded_ = false;
  std::unique_ptr<SeenMap> seen_;
  std::vector<Milestone> milestones_;
  std::vector<LengthStats> stats_;
};

OrbitWalker orbit_walk(std::uint64_t budget, WalkerOptions options = {});

// Index of (0, 2^m, 1, 1).
BigInt power_milestone_index(const BigInt& m);
// Steps of the cycle from (0,2^m,1,1) to (0,2^{m+1},1,1).
BigInt cycle_length(const BigInt& m);

// Orbit position of v, exact when every intermediate count fits in bit_budget
// bits, otherwise a provable lower bound AtLeastTower(h).
TowerBound orbit_index_fast(const TupleV& v, std::uint64_t bit_budget = kDefaultBitBudget);

// Inverse of the index map: the tuple reached after k steps.
TupleV orbit_tuple_at(const BigInt& k);

struct RBound {
  TowerBound value;
  bool exact = false;  // value is r(n) itself, not just a lower bound
  std::optional<TupleV> witness;
};

// Largest walked index among tuples with encoding length <= n.
RBound r_lower(std::size_t n, const OrbitWalker& walker);
// max over every tuple with encoding length <= n, located by orbit_index_fast.
RBound r_enumerated(std::size_t n, std::uint64_t bit_budget = kDefaultBitBudget);
// T(2^{n-1} - 1) for n > 2, witnessed by (2^{n-1}+1, 1, 1, 0); T(0) otherwise.
TowerBound r_symbolic(std::size_t n);

// Strongest of r_symbolic, r_lower (when a walker is given) and
// r_enumerated(min(n, enumerate_limit)). exact is set when some exact source
// for n itself attains it.
RBound r_best(std::size_t n, const OrbitWalker* walker, std::size_t enumerate_limit = 3,
              std::uint64_t bit_budget = kDefaultBitBudget);

// Number of tuples whose encoding has exactly n columns.
BigInt language_count(std::size_t n);

std::string milestones_json(const OrbitWalker& walker);

}  // namespace fapres::towerpres
