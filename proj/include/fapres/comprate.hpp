#pragma once

// Presentations of (N; ...) by regular languages and the compressibility rate
// s(n) = max { xi(w) : |w| <= n }, xi(w) being the length of the shortest
// representative of psi(w) under a reference presentation psi0.

#include "fapres/automata.hpp"
#include "fapres/orbit.hpp"
#include "fapres/tower_bound.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fapres::comprate {

using automata::ConvolutionString;
using automata::Dfa;
using towerpres::TowerBound;

struct Presentation {
  Presentation(std::string name_, Dfa language_) : name(std::move(name_)), language(std::move(language_)) {}

  std::string name;
  std::string domain = "N";
  Dfa language;
  std::size_t mu = 0;  // alphabet size
  // Element denoted by w; throws Malformed outside the language.
  std::function<TowerBound(const ConvolutionString&)> decode;
  // Canonical representative; empty when the presentation has no encoder.
  std::function<ConvolutionString(const BigInt&)> encode;
  // |encode(x)| computed without building the string. For symbolic x it
  // returns a symbolic lower bound or throws Budget.
  std::function<TowerBound(const TowerBound&)> canonical_length;
  // canonical_length is nondecreasing in the value.
  bool length_monotone = false;
  // max decode over strings of length <= n (nullopt when there are none),
  // when cheaply known.
  std::function<std::optional<BigInt>(std::size_t)> max_value;
  // Relation automata over TrackAlphabet::nested(language alphabet, arity).
  std::optional<Dfa> successor;
  std::optional<Dfa> addition;  // u + v = w
  std::optional<Dfa> doubling;  // 2u = w
  // Same-element relation; only needed for non-bijective presentations.
  std::optional<Dfa> equality;
};

Presentation unary_presentation();
Presentation base_k_presentation(unsigned k);
// Base k with trailing zeros allowed: every value has infinitely many
// representatives. Carries an equality automaton.
Presentation loose_base_k_presentation(unsigned k);
// Orbit indices: w encodes the tuple reached after psi(w) applications of f.
Presentation tower_presentation(std::uint64_t bit_budget = towerpres::kDefaultBitBudget);
// Looks up "unary", "base-<k>" or "tower".
Presentation presentation_by_name(const std::string& name);

// Keeps only the length-lex least representative of every element; needs
// psi.equality. Bijective inputs come back unchanged up to renaming.
Presentation bijectivize(const Presentation& psi);

// Parses a space-separated list of column labels (or, for one-track
// alphabets with single-character symbols, a plain word) into a string.
ConvolutionString parse_word(const Presentation& psi, const std::string& text);

TowerBound xi(const ConvolutionString& w, const Presentation& psi, const Presentation& psi0);

enum class Strategy { Exhaustive, ValueMax, OrbitAssisted };
const char* to_string(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

struct Witness {
  std::string word;
  TowerBound length;
};

struct CompressProfile {
  std::size_t n = 0;
  TowerBound s_value;
  std::vector<Witness> witnesses;
  Strategy strategy = Strategy::Exhaustive;
  bool exact = true;             // s_value is s(n), not only a lower bound
  bool budget_exhausted = false;  // enumeration stopped early
  std::uint64_t strings_examined = 0;
};

struct SOptions {
  std::uint64_t max_strings = 20'000'000;
  const towerpres::OrbitWalker* walker = nullptr;  // OrbitAssisted
  std::size_t enumerate_limit = 3;                 // OrbitAssisted: closed-form scan up to this n
  std::uint64_t bit_budget = towerpres::kDefaultBitBudget;
};

CompressProfile s_of_n(std::size_t n, const Presentation& psi, const Presentation& psi0, Strategy strategy,
                       const SOptions& options = {});

// "n,s_value,witness"
std::string profile_csv_header();
std::string profile_csv_row(const CompressProfile& p);

struct ValueBoundRow {
  std::size_t n;
  BigInt observed_max;
  BigInt bound;  // mu^{c+1} * mu^n
  bool pass;
};

struct ValueBoundReport {
  std::string presentation;
  std::size_t c = 0;
  std::size_t mu = 0;
  std::size_t sigma = 0;  // mu + 1
  std::vector<ValueBoundRow> rows;
  bool passed = true;
  std::string witness;
};

// Throws InvalidArgument when psi has no addition automaton.
ValueBoundReport value_bound_check(const Presentation& psi, std::size_t n_max, std::size_t n_check = 5);

struct IncompressRow {
  std::size_t n;
  TowerBound s;
  BigInt bound;
  bool pass;
};

struct IncompressReport {
  std::size_t c0 = 0;    // states of psi0's doubling automaton
  std::size_t d0p = 0;   // |v_0|, v_k the psi0 representative of 2^k
  std::size_t d0pp = 0;  // empirical ordering constant
  std::size_t c = 0;     // psi's addition gap constant
  std::size_t mu = 0;
  std::vector<std::size_t> power_lengths;  // |v_k|, k = 0..k_max
  bool gaps_pass = true;
  std::size_t slope = 0;
  std::size_t intercept = 0;
  std::vector<IncompressRow> rows;
  bool passed = true;
  std::string witness;
};

IncompressReport incompressibility_check(const Presentation& psi, const Presentation& psi0, std::size_t n_max,
                                         std::size_t k_max = 30, std::size_t n_check = 5);

}  // namespace fapres::comprate
