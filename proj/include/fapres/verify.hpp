#pragma once

// Executable invariant suites: props, lemmas, automata, presburger, tm and
// groups. Every check reports pass/fail and a witness or summary line.

#include "fapres/orbit.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fapres::verify {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // counterexample on failure, summary otherwise
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::uint64_t walk_budget = 1'000'000;
  std::uint64_t capacity = std::uint64_t{1} << 24;
  std::uint64_t bit_budget = towerpres::kDefaultBitBudget;
  std::uint64_t samples = 100'000;  // random cases per sampled check
};

const std::vector<std::string>& suite_names();
// Throws NotFound for an unknown suite.
SuiteReport run_suite(std::string_view name, const VerifyOptions& options = {});
// "PASS name: detail" per check.
std::string format_report(const SuiteReport& report);

// props
CheckResult check_golden_chain();
CheckResult check_closure_injectivity(unsigned ab_max = 64, unsigned c_exp_max = 6);

// lemmas
// From (0,2^m,1,1) the walk reaches (0,2^{m+1},1,1) after cycle_length(m) steps.
CheckResult check_power_cycles(std::span<const unsigned> ms);
// For 2^m = T(a) the walk from (0,2^m,1,1) meets (a,1,1,0) before (0,2^{m+1},1,1).
CheckResult check_power_to_level(std::span<const unsigned> ms);
// (0,1,1,0) (0,2,1,1) (1,0,2,1) (1,1,1,1) (1,1,1,0) at indices 3..7, and the
// level milestones (m,1,1,0) follow each other in the walk.
CheckResult check_base_path(const towerpres::OrbitWalker& walker);
// Random small tuples reach some (0,2^m,1,1), in the number of steps the
// closed form predicts.
CheckResult check_power_reachability(std::uint64_t seed, std::size_t starts);
CheckResult check_fast_forward(const towerpres::OrbitWalker& walker);
CheckResult check_r_monotone(const towerpres::OrbitWalker& walker, std::size_t n_max = 8);

// automata
CheckResult check_language_dfa(std::size_t exhaustive_len, std::uint64_t samples, std::size_t sample_len,
                               std::uint64_t seed);
CheckResult check_graph_dfa(unsigned bound, std::uint64_t non_edges, std::uint64_t seed);

}  // namespace fapres::verify
