#include "fapres/towerpres.hpp"

#include "fapres/error.hpp"

#include <vector>

namespace fapres::towerpres {

using automata::AlphabetPtr;
using automata::Code;
using automata::ConvolutionString;
using automata::Dfa;

std::string TupleV::to_string() const {
  const std::string c = c_exp < 64 ? pow2(c_exp).str() : "2^" + c_exp.str();
  return "(" + a.str() + "," + b.str() + "," + c + "," + std::to_string(d) + ")";
}

std::string TupleV::to_compact() const {
  return a.str() + "," + b.str() + "," + c_exp.str() + "," + std::to_string(d);
}

TupleV origin() { return TupleV{0, 0, 0, 1}; }

const char* to_string(VReason r) {
  switch (r) {
    case VReason::Ok: return "ok";
    case VReason::Negative: return "negative component";
    case VReason::CNotPowerOfTwo: return "c is not a power of two";
    case VReason::DNotBit: return "d is not 0 or 1";
    case VReason::BZeroNeedsBigC: return "a > 0 and b = 0 require c > 1";
    case VReason::AZeroNeedsCOne: return "a = 0 requires c = 1";
  }
  return "?";
}

VReason check_V(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d) {
  if (a < 0 || b < 0 || d < 0) return VReason::Negative;
  if (!is_power_of_two(c)) return VReason::CNotPowerOfTwo;
  if (d > 1) return VReason::DNotBit;
  if (a > 0 && b == 0 && c == 1) return VReason::BZeroNeedsBigC;
  if (a == 0 && c != 1) return VReason::AZeroNeedsCOne;
  return VReason::Ok;
}

VReason check_V(const TupleV& v) {
  if (v.a < 0 || v.b < 0 || v.c_exp < 0 || v.d < 0) return VReason::Negative;
  if (v.d > 1) return VReason::DNotBit;
  if (v.a > 0 && v.b == 0 && v.c_exp == 0) return VReason::BZeroNeedsBigC;
  if (v.a == 0 && v.c_exp != 0) return VReason::AZeroNeedsCOne;
  return VReason::Ok;
}

namespace {

bool is_positive_power_of_two(const BigInt& x) { return x > 1 && is_power_of_two(x); }

void require_V(const TupleV& v) {
  const VReason r = check_V(v);
  if (r != VReason::Ok)
    throw Error(ErrorCode::InvalidArgument, "tuple " + v.to_compact() + " is not in V: " + to_string(r));
}

}  // namespace

std::array<bool, 6> rule_guards(const TupleV& v) {
  const bool d0 = v.d == 0, d1 = v.d == 1;
  const bool c1 = v.c_exp == 0;
  return {
      d0 && v.a > 0 && v.b > 0,
      d0 && v.a > 0 && v.b == 0,
      d0 && v.a == 0 && c1,
      d1 && !c1,
      d1 && c1 && is_positive_power_of_two(v.b),
      d1 && c1 && !is_positive_power_of_two(v.b),
  };
}

int step_f(TupleV& v) {
  if (v.d == 0) {
    if (v.a > 0) {
      if (v.b > 0) {
        --v.b;
        ++v.c_exp;
        return 1;
      }
      --v.a;
      v.b = pow2(v.c_exp);
      v.c_exp = 0;
      return 2;
    }
    ++v.b;
    v.d = 1;
    return 3;
  }
  if (v.c_exp > 0) {
    ++v.b;
    --v.c_exp;
    return 4;
  }
  if (is_positive_power_of_two(v.b)) {
    ++v.a;
    v.c_exp = exact_log2(v.b);
    v.b = 0;
    return 5;
  }
  v.d = 0;
  return 6;
}

std::pair<TupleV, int> apply_f(const TupleV& v) {
  require_V(v);
  const auto guards = rule_guards(v);
  int fired = 0, count = 0;
  for (int i = 0; i < 6; ++i)
    if (guards[i]) {
      fired = i + 1;
      ++count;
    }
  if (count != 1)
    throw Error(ErrorCode::Internal, "rule guards not exclusive at " + v.to_compact());
  TupleV w = v;
  const int rule = step_f(w);
  if (rule != fired) throw Error(ErrorCode::Internal, "rule dispatch disagrees with guards at " + v.to_compact());
  return {std::move(w), rule};
}

std::optional<TupleV> apply_f_inverse(const TupleV& v) {
  require_V(v);
  if (v.d == 0) {
    if (v.c_exp > 0) return TupleV{v.a, v.b + 1, v.c_exp - 1, 0};          // rule 1
    if (is_positive_power_of_two(v.b)) return TupleV{v.a + 1, 0, exact_log2(v.b), 0};  // rule 2
    return TupleV{v.a, v.b, 0, 1};                                        // rule 6
  }
  if (v.b == 0) {
    if (v.a == 0) return std::nullopt;
    return TupleV{v.a - 1, pow2(v.c_exp), 0, 1};  // rule 5
  }
  if (v.a == 0) return TupleV{0, v.b - 1, 0, 0};  // rule 3
  return TupleV{v.a, v.b - 1, v.c_exp + 1, 1};     // rule 4
}

std::string encode_nat(const BigInt& n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative natural");
  if (n == 0) return "0";
  const std::uint64_t bits = bit_length(n);
  std::string out(bits, '0');
  for (std::uint64_t i = 0; i < bits; ++i)
    if (boost::multiprecision::bit_test(n, static_cast<unsigned>(i))) out[i] = '1';
  return out;
}

std::optional<BigInt> decode_nat(std::string_view bits) {
  if (bits.empty()) return std::nullopt;
  if (bits == "0") return BigInt(0);
  if (bits.back() != '1') return std::nullopt;
  BigInt n = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      boost::multiprecision::bit_set(n, static_cast<unsigned>(i));
    else if (bits[i] != '0')
      return std::nullopt;
  }
  return n;
}

const AlphabetPtr& tuple_alphabet() {
  static const AlphabetPtr alphabet = automata::binary_tracks(4);
  return alphabet;
}

const AlphabetPtr& graph_alphabet() {
  static const AlphabetPtr alphabet = automata::TrackAlphabet::nested(tuple_alphabet(), 2);
  return alphabet;
}

namespace {

BigInt numeral_length(const BigInt& n) { return n == 0 ? BigInt(1) : BigInt(bit_length(n)); }

}  // namespace

BigInt encoding_length(const TupleV& v) {
  return std::max({numeral_length(v.a), numeral_length(v.b), BigInt(v.c_exp + 1)});
}

ConvolutionString encode_tuple(const TupleV& v, std::size_t max_columns) {
  require_V(v);
  if (encoding_length(v) > max_columns)
    throw Error(ErrorCode::Budget, "encoding of " + v.to_compact() + " exceeds the column budget");
  std::string c(static_cast<std::size_t>(v.c_exp) + 1, '0');
  c.back() = '1';
  return automata::convolve(tuple_alphabet(), std::vector<std::string>{encode_nat(v.a), encode_nat(v.b), c,
                                                                        std::string(1, v.d ? '1' : '0')});
}

std::optional<TupleV> decode_string(const ConvolutionString& w) {
  if (!(*w.alphabet() == *tuple_alphabet()))
    throw Error(ErrorCode::AlphabetMismatch, "expected a string over the four-track binary alphabet");
  if (w.empty() || !ConvolutionString::well_formed(*w.alphabet(), w.columns())) return std::nullopt;
  const auto tracks = automata::deconvolve_chars(w);
  auto a = decode_nat(tracks[0]);
  auto b = decode_nat(tracks[1]);
  auto c = decode_nat(tracks[2]);
  auto d = decode_nat(tracks[3]);
  if (!a || !b || !c || !d) return std::nullopt;
  if (check_V(*a, *b, *c, *d) != VReason::Ok) return std::nullopt;
  return TupleV{*a, *b, BigInt(exact_log2(*c)), static_cast<int>(*d)};
}

namespace {

using automata::Primitive;

// One-track predicates over {0,1}.
Dfa positive_power_of_two() {
  return automata::intersect(automata::build_primitive_relation(Primitive::IsPowerOfTwo),
                             automata::numeral_not_equals(1));
}

Dfa bit_dfa() { return automata::unite(automata::numeral_equals(0), automata::numeral_equals(1)); }

struct Lifter {
  AlphabetPtr target;
  Dfa on(const Dfa& d, std::initializer_list<std::size_t> tracks) const {
    const std::vector<std::size_t> map(tracks);
    return automata::lift(d, target, map);
  }
};

Dfa all_of(std::vector<Dfa> parts) {
  Dfa acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = automata::intersect(acc, parts[i]);
  return acc;
}

Dfa any_of(std::vector<Dfa> parts) {
  Dfa acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = automata::unite(acc, parts[i]);
  return acc;
}

Dfa build_language() {
  const Lifter on{tuple_alphabet()};
  const Dfa eq0 = automata::numeral_equals(0), ne0 = automata::numeral_not_equals(0);
  const Dfa eq1 = automata::numeral_equals(1), ne1 = automata::numeral_not_equals(1);
  return all_of({
      automata::well_formed_dfa(tuple_alphabet()),
      on.on(automata::numeral_dfa(), {0}),
      on.on(automata::numeral_dfa(), {1}),
      on.on(automata::build_primitive_relation(Primitive::IsPowerOfTwo), {2}),
      on.on(bit_dfa(), {3}),
      any_of({on.on(eq0, {0}), on.on(ne0, {1}), on.on(ne1, {2})}),
      any_of({on.on(ne0, {0}), on.on(eq1, {2})}),
  });
}

// Flat tracks: u = (a,b,c,d) on 0..3, w = f(u) on 4..7.
Dfa build_graph() {
  const Lifter on{graph_alphabet()};
  const Dfa eq0 = automata::numeral_equals(0), ne0 = automata::numeral_not_equals(0);
  const Dfa eq1 = automata::numeral_equals(1), ne1 = automata::numeral_not_equals(1);
  const Dfa pow2pos = positive_power_of_two();
  const Dfa not_pow2pos = automata::intersect(automata::numeral_dfa(), automata::complement(pow2pos));
  const Dfa equal = automata::build_primitive_relation(Primitive::Equal);
  const Dfa copy = automata::build_primitive_relation(Primitive::Copy);
  const Dfa inc = automata::build_primitive_relation(Primitive::Increment);
  const Dfa dec = automata::build_primitive_relation(Primitive::Decrement);
  const Dfa dbl = automata::build_primitive_relation(Primitive::Double);
  const Dfa half = automata::build_primitive_relation(Primitive::Halve);

  const Dfa rule1 = all_of({on.on(eq0, {3}), on.on(ne0, {0}), on.on(ne0, {1}), on.on(equal, {0, 4}),
                            on.on(dec, {1, 5}), on.on(dbl, {2, 6}), on.on(eq0, {7})});
  const Dfa rule2 = all_of({on.on(eq0, {3}), on.on(ne0, {0}), on.on(eq0, {1}), on.on(dec, {0, 4}),
                            on.on(copy, {2, 5}), on.on(eq1, {6}), on.on(eq0, {7})});
  const Dfa rule3 = all_of({on.on(eq0, {3}), on.on(eq0, {0}), on.on(eq0, {4}), on.on(inc, {1, 5}),
                            on.on(eq1, {6}), on.on(eq1, {7})});
  const Dfa rule4 = all_of({on.on(eq1, {3}), on.on(ne1, {2}), on.on(equal, {0, 4}), on.on(inc, {1, 5}),
                            on.on(half, {2, 6}), on.on(eq1, {7})});
  const Dfa rule5 = all_of({on.on(eq1, {3}), on.on(eq1, {2}), on.on(pow2pos, {1}), on.on(inc, {0, 4}),
                            on.on(eq0, {5}), on.on(copy, {1, 6}), on.on(eq1, {7})});
  const Dfa rule6 = all_of({on.on(eq1, {3}), on.on(eq1, {2}), on.on(not_pow2pos, {1}), on.on(equal, {0, 4}),
                            on.on(equal, {1, 5}), on.on(eq1, {6}), on.on(eq0, {7})});

  const Dfa& lang = language_dfa();
  return all_of({
      automata::well_formed_dfa(graph_alphabet()),
      on.on(lang, {0, 1, 2, 3}),
      on.on(lang, {4, 5, 6, 7}),
      any_of({rule1, rule2, rule3, rule4, rule5, rule6}),
  });
}

}  // namespace

const Dfa& language_dfa() {
  static const Dfa d = automata::minimize(build_language());
  return d;
}

const Dfa& graph_f_dfa() {
  static const Dfa d = automata::minimize(build_graph());
  return d;
}

}  // namespace fapres::towerpres
