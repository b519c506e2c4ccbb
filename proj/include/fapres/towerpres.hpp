#pragma once

// The set V of tuples (a, b, 2^c_exp, d), the successor-like function f on V
// and its automatic presentation over four reverse-binary tracks.

#include "fapres/automata.hpp"
#include "fapres/bigint.hpp"
#include "fapres/tower_bound.hpp"

#include <array>
#include <tuple>
#include <optional>
#include <string>
#include <utility>

namespace fapres::towerpres {

// c is stored through its exponent: c = 2^c_exp.
struct TupleV {
  BigInt a = 0;
  BigInt b = 0;
  BigInt c_exp = 0;
  int d = 1;

  bool operator==(const TupleV&) const = default;
  bool operator<(const TupleV& o) const {
    return std::tie(a, b, c_exp, d) < std::tie(o.a, o.b, o.c_exp, o.d);
  }

  // "(a,b,c,d)" with c written out as a number.
  std::string to_string() const;
  // "a,b,c_exp,d"
  std::string to_compact() const;
};

// (0,0,1,1), the start of the orbit.
TupleV origin();

enum class VReason { Ok, Negative, CNotPowerOfTwo, DNotBit, BZeroNeedsBigC, AZeroNeedsCOne };

const char* to_string(VReason r);

// Membership of a raw quadruple with c given as a number.
VReason check_V(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d);
VReason check_V(const TupleV& v);
inline bool in_V(const TupleV& v) { return check_V(v) == VReason::Ok; }

// Guards of rules 1..6 evaluated independently.
std::array<bool, 6> rule_guards(const TupleV& v);

// f(v) and the 1-based rule that fired. Throws InvalidArgument outside V.
std::pair<TupleV, int> apply_f(const TupleV& v);
// In-place variant for tight loops; v must be in V.
int step_f(TupleV& v);

// The unique preimage under f, or nullopt for (0,0,1,1).
std::optional<TupleV> apply_f_inverse(const TupleV& v);

// Reverse binary, "0" for zero.
std::string encode_nat(const BigInt& n);
std::optional<BigInt> decode_nat(std::string_view bits);

// {0,1} on four tracks (a, b, c, d).
const automata::AlphabetPtr& tuple_alphabet();
// Two copies of tuple_alphabet() as outer tracks: u ⊗ w.
const automata::AlphabetPtr& graph_alphabet();

// Column count of the encoding, computed without building it.
BigInt encoding_length(const TupleV& v);
// Throws Budget when the encoding would exceed max_columns.
automata::ConvolutionString encode_tuple(const TupleV& v, std::size_t max_columns = 1u << 24);
// nullopt when w is not the encoding of a tuple of V.
std::optional<TupleV> decode_string(const automata::ConvolutionString& w);

// Minimal automaton for the encodings of V.
const automata::Dfa& language_dfa();
// Minimal automaton for { enc(v) ⊗ enc(f(v)) }.
const automata::Dfa& graph_f_dfa();

}  // namespace fapres::towerpres
