#pragma once

// Synchronous multi-track automata: padded convolution alphabets, complete
// DFAs over them, boolean algebra, minimization and length-lex enumeration.

#include "fapres/error.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fapres::automata {

using Code = std::uint32_t;     // index of a composite symbol
using StateId = std::uint32_t;

inline constexpr std::string_view kPadding = "⋄";

class TrackAlphabet;
using AlphabetPtr = std::shared_ptr<const TrackAlphabet>;

// Composite alphabet over k tracks: all k-tuples over (base_i ∪ {⋄}) except the
// all-⋄ tuple. Per-track digits are 0..base_size-1 for base symbols and
// base_size for ⋄, so ⋄ sorts last. Composite codes are mixed-radix with
// track 0 most significant, which makes code order the length-lex column order.
//
// A nested alphabet has outer tracks whose base symbols are the composite
// symbols of an inner alphabet; its "flat" view exposes outer*inner tracks,
// an outer ⋄ appearing as ⋄ on every inner track.
class TrackAlphabet {
 public:
  static AlphabetPtr make(std::vector<std::vector<std::string>> base_per_track);
  static AlphabetPtr uniform(std::vector<std::string> base, std::size_t tracks);
  static AlphabetPtr nested(AlphabetPtr inner, std::size_t outer_tracks);

  std::size_t track_count() const noexcept { return base_.size(); }
  std::size_t base_size(std::size_t track) const { return base_.at(track).size(); }
  const std::vector<std::string>& base_symbols(std::size_t track) const { return base_.at(track); }
  std::size_t size() const noexcept { return size_; }
  const AlphabetPtr& inner() const noexcept { return inner_; }

  std::uint32_t digit(Code c, std::size_t track) const { return digits_[c * track_count() + track]; }
  bool is_padding(Code c, std::size_t track) const { return digit(c, track) == base_size(track); }
  // Throws Malformed for the all-⋄ column or an out-of-range digit.
  Code compose(std::span<const std::uint32_t> digits) const;
  // Symbol index of `name` on `track`; the padding name maps to base_size.
  std::uint32_t digit_of(std::size_t track, std::string_view name) const;

  std::size_t flat_track_count() const noexcept { return flat_base_.size(); }
  std::size_t flat_base_size(std::size_t flat_track) const { return flat_base_.at(flat_track).size(); }
  const std::vector<std::string>& flat_base_symbols(std::size_t flat_track) const {
    return flat_base_.at(flat_track);
  }
  std::uint32_t flat_digit(Code c, std::size_t flat_track) const {
    return flat_digits_[c * flat_track_count() + flat_track];
  }

  // Column label: per-track symbols joined by "|".
  std::string name(Code c) const;

  bool operator==(const TrackAlphabet& other) const;

 private:
  TrackAlphabet() = default;
  void finish();

  std::vector<std::vector<std::string>> base_;
  AlphabetPtr inner_;
  std::vector<std::vector<std::string>> flat_base_;
  std::size_t size_ = 0;
  std::vector<std::uint32_t> digits_;
  std::vector<std::uint32_t> flat_digits_;
};

// {0,1} on every track; the alphabet of reverse-binary relations.
AlphabetPtr binary_tracks(std::size_t tracks);

// A string of composite symbols whose per-track padding is a suffix.
class ConvolutionString {
 public:
  ConvolutionString(AlphabetPtr alphabet, std::vector<Code> columns);

  static bool well_formed(const TrackAlphabet& alphabet, std::span<const Code> columns);

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  std::span<const Code> columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return columns_.size(); }
  bool empty() const noexcept { return columns_.empty(); }

  // Number of non-⋄ symbols on an (outer) track.
  std::size_t track_length(std::size_t track) const;
  // Per-track digit strings with padding removed.
  std::vector<std::vector<std::uint32_t>> deconvolve() const;
  // Space-separated column labels.
  std::string to_string() const;

  bool operator==(const ConvolutionString& other) const;

 private:
  AlphabetPtr alphabet_;
  std::vector<Code> columns_;
};

ConvolutionString convolve(const AlphabetPtr& alphabet,
                           const std::vector<std::vector<std::uint32_t>>& tracks);
// One character per symbol; every base symbol of the alphabet must be a single
// character.
ConvolutionString convolve(const AlphabetPtr& alphabet, const std::vector<std::string>& tracks);
// Outer convolution of already-convolved strings over a nested alphabet.
ConvolutionString convolve(const AlphabetPtr& nested_alphabet,
                           const std::vector<ConvolutionString>& parts);

std::vector<std::string> deconvolve_chars(const ConvolutionString& w);

// Complete deterministic automaton over a TrackAlphabet. Immutable.
class Dfa {
 public:
  Dfa(AlphabetPtr alphabet, StateId start, std::vector<StateId> table, std::vector<bool> accepting);

  const AlphabetPtr& alphabet() const noexcept { return alphabet_; }
  std::size_t state_count() const noexcept { return accepting_.size(); }
  StateId start() const noexcept { return start_; }
  StateId next(StateId s, Code c) const { return table_[static_cast<std::size_t>(s) * width_ + c]; }
  bool is_accepting(StateId s) const { return accepting_[s]; }
  std::span<const StateId> row(StateId s) const {
    return {table_.data() + static_cast<std::size_t>(s) * width_, width_};
  }

  // Throws AlphabetMismatch when w is over a different alphabet.
  bool accepts(const ConvolutionString& w) const;
  bool accepts_columns(std::span<const Code> columns) const;

  bool is_empty() const;
  // A non-accepting state whose every transition loops back to itself.
  std::optional<StateId> sink() const;

  // Same alphabet (by value) and identical tables.
  bool operator==(const Dfa& other) const;

 private:
  AlphabetPtr alphabet_;
  std::size_t width_ = 0;
  StateId start_ = 0;
  std::vector<StateId> table_;
  std::vector<bool> accepting_;
};

// Explores the reachable part of an implicitly described automaton. `step`
// returns std::nullopt for a dead transition, which is routed to a shared sink.
// State must be totally ordered.
template <typename State, typename Step, typename Accept>
Dfa explore(const AlphabetPtr& alphabet, const State& initial, Step step, Accept accept) {
  std::map<State, StateId> ids;
  std::vector<State> pending;
  std::vector<StateId> table;
  std::vector<bool> accepting;
  const std::size_t width = alphabet->size();
  constexpr StateId kUnassigned = ~StateId{0};
  std::optional<StateId> sink;

  auto intern = [&](const State& s) {
    auto [it, inserted] = ids.emplace(s, static_cast<StateId>(accepting.size()));
    if (inserted) {
      pending.push_back(s);
      accepting.push_back(static_cast<bool>(accept(s)));
      table.resize(accepting.size() * width, kUnassigned);
    }
    return it->second;
  };
  intern(initial);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const State current = pending[i];
    for (Code c = 0; c < width; ++c) {
      if (std::optional<State> next = step(current, c)) {
        const StateId target = intern(*next);
        table[i * width + c] = target;
      }
    }
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] != kUnassigned) continue;
    if (!sink) {
      sink = static_cast<StateId>(accepting.size());
      accepting.push_back(false);
      table.resize(accepting.size() * width, *sink);
    }
    table[i] = *sink;
  }
  return Dfa(alphabet, 0, std::move(table), std::move(accepting));
}

// Accepts exactly the well-formed convolution strings over the alphabet.
Dfa well_formed_dfa(const AlphabetPtr& alphabet);
Dfa universal_dfa(const AlphabetPtr& alphabet);
Dfa empty_dfa(const AlphabetPtr& alphabet);

// Boolean operations. The complement is taken relative to the well-formed
// strings, so every language here stays inside the convolution universe.
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);
Dfa complement(const Dfa& d);
// Minimal equivalent automaton with states renumbered in breadth-first order
// from the start (code order), so equal languages give equal automata.
Dfa minimize(const Dfa& d);
bool equivalent(const Dfa& a, const Dfa& b);

// Cylindrification: runs `d` on the tracks of `target` selected by
// flat_track_map (d's flat track i reads target flat track flat_track_map[i]).
// Columns that are all ⋄ on the selected tracks leave the state unchanged.
Dfa lift(const Dfa& d, const AlphabetPtr& target, std::span<const std::size_t> flat_track_map);

// Existential projection onto the outer tracks in `keep` (in that order):
// accepts x iff some filling of the other tracks is accepted by d. Over a
// nested alphabet a single kept track yields an automaton over the inner one.
Dfa project(const Dfa& d, std::span<const std::size_t> keep);

// Calls visit(columns) for every accepted string of length <= max_len in
// length-lexicographic order. Returning false from visit stops the walk.
void for_each_accepted(const Dfa& d, std::size_t max_len,
                       const std::function<bool(std::span<const Code>)>& visit);

// Pull-style stream over the same sequence as for_each_accepted.
class Enumeration {
 public:
  Enumeration(const Dfa& d, std::size_t max_len);
  std::optional<ConvolutionString> next();

 private:
  bool advance_to_length(std::size_t len);

  const Dfa* dfa_;
  std::size_t max_len_;
  std::size_t length_ = 0;
  bool started_ = false;
  bool done_ = false;
  // live_[r][s]: some accepted continuation of exactly r columns from s.
  std::vector<std::vector<bool>> live_;
  struct Frame {
    StateId state;
    Code next_code;
  };
  std::vector<Frame> stack_;
  std::vector<Code> word_;
};

enum class Primitive { Increment, Decrement, Double, Halve, Equal, IsPowerOfTwo, Copy };

std::optional<Primitive> primitive_from_name(std::string_view name);
std::string_view primitive_name(Primitive p);

// Relations on reverse-binary numerals (LSB first, canonical: last symbol 1,
// or exactly "0"). Two tracks u ⊗ v, except IsPowerOfTwo which is one track.
//   Increment v = u+1   Decrement v = u-1   Double v = 2u   Halve v = u/2
//   Equal / Copy v = u
Dfa build_primitive_relation(Primitive kind);

// One-track numeral predicates over {0,1}.
Dfa numeral_dfa();
Dfa numeral_equals(unsigned value);
Dfa numeral_not_equals(unsigned value);

// Verified pumping constant of a relation that is functional toward
// output_track: returns the state count c after checking that every accepted
// string of length <= n_check has all other tracks no longer than the output
// track plus c. Throws Verification with a witness otherwise.
std::size_t functional_gap_bound(const Dfa& d, std::size_t output_track, std::size_t n_check);

// Largest observed (other track length - output track length) over accepted
// strings of length <= n_check; negative gaps are reported as 0.
std::size_t observed_gap(const Dfa& d, std::size_t output_track, std::size_t n_check);

// JSON {tracks, symbols, inner?, states, start, accepting, sink, transitions}.
// Transitions into the sink are omitted and restored on load.
std::string to_json(const Dfa& d);
Dfa from_json(std::string_view text);
std::string to_dot(const Dfa& d, std::string_view graph_name = "dfa");

}  // namespace fapres::automata
