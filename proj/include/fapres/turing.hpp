#pragma once

// One-tape deterministic Turing machines on a semi-infinite tape, their
// configuration strings X1..X(i-1) q Xi..Xn, the one-step relation as an
// automaton, and the codec that replaces a leading run gamma^k by u_k.

#include "fapres/automata.hpp"
#include "fapres/orbit.hpp"
#include "fapres/tower_tokens.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fapres::apps {

enum class Move { Left, Right };

struct TmRule {
  std::string state;
  std::string read;
  std::string write;
  Move move = Move::Right;
  std::string next;
};

class TuringMachine {
 public:
  // gamma[0] is the blank. Throws InvalidArgument on overlapping alphabets,
  // unknown symbols or two rules for one (state, read) pair.
  TuringMachine(std::vector<std::string> gamma, std::vector<std::string> states, std::string q0,
                std::vector<TmRule> rules);

  // {gamma, states, q0, commands: [{state, read, write, move, next}]}
  static TuringMachine from_json(std::string_view text);
  std::string to_json() const;

  // Binary counter over {_, g, 0, 1}: walks right over g and the LSB-first
  // number after it, adds one, returns left to the last g and repeats.
  static TuringMachine sample();

  const std::vector<std::string>& gamma() const noexcept { return gamma_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::string& q0() const noexcept { return q0_; }
  const std::string& blank() const noexcept { return gamma_.front(); }
  const std::vector<TmRule>& rules() const noexcept { return rules_; }

  bool is_symbol(const std::string& t) const;
  bool is_state(const std::string& t) const;
  const TmRule* rule(const std::string& state, const std::string& read) const;

  // One track over gamma followed by the states.
  const automata::AlphabetPtr& config_alphabet() const noexcept { return alphabet_; }

 private:
  std::vector<std::string> gamma_;
  std::vector<std::string> states_;
  std::string q0_;
  std::vector<TmRule> rules_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
  automata::AlphabetPtr alphabet_;
};

// Head at tape[head]; head == tape.size() reads an implicit blank.
struct TmConfig {
  Tokens tape;
  std::size_t head = 0;
  std::string state;

  Tokens render() const;
  bool operator==(const TmConfig&) const = default;
};

// Throws Malformed unless tokens hold exactly one state and otherwise tape
// symbols of m.
TmConfig parse_config(const TuringMachine& m, std::span<const std::string> tokens);

// nullopt when no rule applies or a left move would leave cell 0.
std::optional<TmConfig> tm_step(const TuringMachine& m, const TmConfig& cfg);

automata::ConvolutionString config_string(const TuringMachine& m, const TmConfig& cfg);
TmConfig config_from_string(const TuringMachine& m, const automata::ConvolutionString& w);

// The configuration language gamma* Q gamma*.
automata::Dfa tm_config_dfa(const TuringMachine& m);
// alpha ⊗ beta such that one rule transforms alpha into beta.
automata::Dfa tm_step_relation_dfa(const TuringMachine& m);

// gamma^k rest, with rest not starting with gamma.
struct TmSplit {
  BigInt k;
  Tokens rest;
};

// u_k rest for cfg rendered as gamma^k rest.
Tokens tm_encode(const TuringMachine& m, const TmConfig& cfg, const std::string& gamma_symbol);
TmSplit tm_decode_split(const TuringMachine& m, std::span<const std::string> w, const std::string& gamma_symbol);
// Throws Budget when the run is longer than max_run.
TmConfig tm_decode(const TuringMachine& m, std::span<const std::string> w, const std::string& gamma_symbol,
                   std::uint64_t max_run = std::uint64_t{1} << 24);

struct TmRate {
  towerpres::TowerBound value;
  bool exact = false;
  Tokens witness;  // u_k q0 _..._ ; empty when value is 0
};

// s(n) of the compressed codec against plain configuration strings. A string
// u_k rest of length n denotes a configuration of length k + |rest|, and rest
// holds at least the state, so s(n) = max over 1 <= j < n of r(j) + n - j,
// which is r(n-1) + 1; s(0) = s(1) = 0.
TmRate tm_s_lower(const TuringMachine& m, std::size_t n, const towerpres::OrbitWalker* walker,
                  std::size_t enumerate_limit = 2);

}  // namespace fapres::apps
