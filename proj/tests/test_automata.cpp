#include "fapres/automata.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace fapres;
using namespace fapres::automata;

namespace {

std::string rb(unsigned n) {
  if (n == 0) return "0";
  std::string s;
  for (; n; n >>= 1) s += (n & 1) ? '1' : '0';
  return s;
}

ConvolutionString pair(unsigned x, unsigned y) { return convolve(binary_tracks(2), std::vector<std::string>{rb(x), rb(y)}); }

// Every string over {0,1} of length 1..max_len.
std::vector<std::string> all_bit_strings(std::size_t max_len) {
  std::vector<std::string> out;
  for (std::size_t len = 1; len <= max_len; ++len)
    for (unsigned mask = 0; mask < (1u << len); ++mask) {
      std::string s;
      for (std::size_t i = 0; i < len; ++i) s += (mask >> i & 1) ? '1' : '0';
      out.push_back(s);
    }
  return out;
}

// Counts accepted strings of length exactly n by brute force over all columns.
std::size_t brute_count(const Dfa& d, std::size_t n) {
  std::size_t count = 0;
  std::vector<Code> w(n, 0);
  const std::size_t width = d.alphabet()->size();
  for (;;) {
    if (d.accepts_columns(w)) ++count;
    std::size_t i = 0;
    while (i < n && ++w[i] == width) w[i++] = 0;
    if (i == n) break;
  }
  return count;
}

}  // namespace

TEST_CASE("composite alphabet excludes the all-padding column") {
  const auto a = binary_tracks(2);
  CHECK(a->size() == 8);
  const auto t = binary_tracks(4);
  CHECK(t->size() == 80);
  for (Code c = 0; c < a->size(); ++c) CHECK_FALSE((a->is_padding(c, 0) && a->is_padding(c, 1)));
  const auto nested = TrackAlphabet::nested(t, 2);
  CHECK(nested->size() == 81 * 81 - 1);
  CHECK(nested->flat_track_count() == 8);
}

TEST_CASE("convolve pads shorter tracks and round-trips") {
  const auto w = convolve(binary_tracks(2), std::vector<std::string>{"1", "011"});
  CHECK(w.size() == 3);
  CHECK(w.track_length(0) == 1);
  CHECK(w.track_length(1) == 3);
  CHECK(deconvolve_chars(w) == std::vector<std::string>{"1", "011"});

  std::mt19937 rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<std::string> tracks(3);
    for (auto& t : tracks) {
      const std::size_t len = rng() % 17;
      for (std::size_t i = 0; i < len; ++i) t += (rng() & 1) ? '1' : '0';
    }
    if (tracks[0].empty() && tracks[1].empty() && tracks[2].empty()) continue;
    CHECK(deconvolve_chars(convolve(binary_tracks(3), tracks)) == tracks);
  }
}

TEST_CASE("padding inside a track is rejected") {
  const auto a = binary_tracks(2);
  const Code pad_then_one = a->compose(std::vector<std::uint32_t>{2, 1});
  const Code one_one = a->compose(std::vector<std::uint32_t>{1, 1});
  CHECK(ConvolutionString::well_formed(*a, std::vector<Code>{one_one, pad_then_one}));
  CHECK_FALSE(ConvolutionString::well_formed(*a, std::vector<Code>{pad_then_one, one_one}));
  CHECK_THROWS_AS(ConvolutionString(a, {pad_then_one, one_one}), Error);
  CHECK_THROWS_AS(a->compose(std::vector<std::uint32_t>{2, 2}), Error);
}

TEST_CASE("accepts rejects foreign alphabets") {
  const Dfa eq = build_primitive_relation(Primitive::Equal);
  const auto w = convolve(binary_tracks(3), std::vector<std::string>{"1", "1", "1"});
  try {
    (void)eq.accepts(w);
    FAIL("expected an alphabet mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphabetMismatch);
  }
}

TEST_CASE("primitive relations agree with arithmetic below 64") {
  const Dfa inc = build_primitive_relation(Primitive::Increment);
  const Dfa dec = build_primitive_relation(Primitive::Decrement);
  const Dfa dbl = build_primitive_relation(Primitive::Double);
  const Dfa half = build_primitive_relation(Primitive::Halve);
  const Dfa eq = build_primitive_relation(Primitive::Equal);
  const Dfa copy = build_primitive_relation(Primitive::Copy);
  for (unsigned x = 0; x < 64; ++x)
    for (unsigned y = 0; y < 64; ++y) {
      const auto w = pair(x, y);
      CHECK(inc.accepts(w) == (y == x + 1));
      CHECK(dec.accepts(w) == (x >= 1 && y == x - 1));
      CHECK(dbl.accepts(w) == (y == 2 * x));
      CHECK(half.accepts(w) == (2 * y == x));
      CHECK(eq.accepts(w) == (x == y));
      CHECK(copy.accepts(w) == (x == y));
    }
  CHECK(inc.accepts(convolve(binary_tracks(2), std::vector<std::string>{"11", "001"})));
  CHECK(dbl.accepts(convolve(binary_tracks(2), std::vector<std::string>{"1", "01"})));
}

TEST_CASE("relations reject non-canonical numerals") {
  const Dfa eq = build_primitive_relation(Primitive::Equal);
  CHECK_FALSE(eq.accepts(convolve(binary_tracks(2), std::vector<std::string>{"10", "10"})));
  CHECK_FALSE(eq.accepts(convolve(binary_tracks(2), std::vector<std::string>{"00", "00"})));
  CHECK(eq.accepts(convolve(binary_tracks(2), std::vector<std::string>{"0", "0"})));
}

TEST_CASE("is_power_of_two is exactly 0*1") {
  const Dfa p = build_primitive_relation(Primitive::IsPowerOfTwo);
  for (const auto& s : all_bit_strings(10)) {
    const bool shape = s.back() == '1' && s.find('1') == s.size() - 1;
    CHECK(p.accepts(convolve(binary_tracks(1), std::vector<std::string>{s})) == shape);
  }
}

TEST_CASE("numeral literals") {
  const Dfa eq5 = numeral_equals(5), ne5 = numeral_not_equals(5), num = numeral_dfa();
  for (const auto& s : all_bit_strings(8)) {
    const auto w = convolve(binary_tracks(1), std::vector<std::string>{s});
    const bool canonical = s == "0" || s.back() == '1';
    CHECK(num.accepts(w) == canonical);
    CHECK(eq5.accepts(w) == (s == "101"));
    CHECK(ne5.accepts(w) == (canonical && s != "101"));
  }
}

TEST_CASE("boolean algebra satisfies De Morgan on all short strings") {
  const auto g = binary_tracks(2);
  const std::vector<std::size_t> t0{0}, t1{1};
  const Dfa x = lift(numeral_equals(3), g, t0);
  const Dfa y = lift(build_primitive_relation(Primitive::IsPowerOfTwo), g, t1);
  const Dfa lhs = complement(intersect(x, y));
  const Dfa rhs = unite(complement(x), complement(y));
  CHECK(equivalent(lhs, rhs));
  const Dfa wf = well_formed_dfa(g);
  for (std::size_t n = 0; n <= 4; ++n) {
    std::vector<Code> w(n, 0);
    for (;;) {
      const bool in_x = x.accepts_columns(w), in_y = y.accepts_columns(w);
      const bool formed = wf.accepts_columns(w);
      CHECK(lhs.accepts_columns(w) == (formed && !(in_x && in_y)));
      CHECK(intersect(x, y).accepts_columns(w) == (in_x && in_y));
      std::size_t i = 0;
      while (i < n && ++w[i] == g->size()) w[i++] = 0;
      if (i == n) break;
    }
  }
}

TEST_CASE("minimize is canonical and preserves the language") {
  const Dfa inc = build_primitive_relation(Primitive::Increment);
  const Dfa doubled = intersect(inc, universal_dfa(inc.alphabet()));
  CHECK(minimize(doubled) == minimize(inc));
  CHECK(minimize(minimize(inc)) == minimize(inc));
  CHECK(empty_dfa(inc.alphabet()).is_empty());
  CHECK_FALSE(inc.is_empty());
  CHECK(intersect(inc, build_primitive_relation(Primitive::Equal)).is_empty());
}

TEST_CASE("lift leaves the state unchanged on padded sub-columns") {
  const auto g = binary_tracks(3);
  const std::vector<std::size_t> map{0, 2};
  const Dfa inc3 = intersect(lift(build_primitive_relation(Primitive::Increment), g, map), well_formed_dfa(g));
  const auto w = convolve(g, std::vector<std::string>{"1", "00101", "01"});
  CHECK(inc3.accepts(w));
  const auto v = convolve(g, std::vector<std::string>{"1", "00101", "1"});
  CHECK_FALSE(inc3.accepts(v));
}

TEST_CASE("enumeration is length-lex and matches path counts") {
  const Dfa eq = build_primitive_relation(Primitive::Equal);
  std::vector<std::vector<Code>> seen;
  for_each_accepted(eq, 4, [&](std::span<const Code> w) {
    seen.emplace_back(w.begin(), w.end());
    return true;
  });
  for (std::size_t i = 1; i < seen.size(); ++i) {
    const auto& p = seen[i - 1];
    const auto& q = seen[i];
    CHECK((p.size() < q.size() || (p.size() == q.size() && p < q)));
  }
  std::size_t by_length[5] = {};
  for (const auto& w : seen) ++by_length[w.size()];
  for (std::size_t n = 0; n <= 4; ++n) CHECK(by_length[n] == brute_count(eq, n));

  Enumeration stream(eq, 4);
  std::size_t k = 0;
  while (auto w = stream.next()) {
    REQUIRE(k < seen.size());
    CHECK(std::vector<Code>(w->columns().begin(), w->columns().end()) == seen[k]);
    ++k;
  }
  CHECK(k == seen.size());
}

TEST_CASE("gap constants") {
  const Dfa eq = build_primitive_relation(Primitive::Equal);
  CHECK(observed_gap(eq, 1, 8) == 0);
  CHECK(functional_gap_bound(eq, 1, 8) == eq.state_count());
  const Dfa dbl = build_primitive_relation(Primitive::Double);
  const std::size_t gap = observed_gap(dbl, 0, 8);
  CHECK(gap <= 1);
  CHECK(gap <= functional_gap_bound(dbl, 0, 8));
}

TEST_CASE("json round trip and dot export") {
  for (Primitive p : {Primitive::Increment, Primitive::Double, Primitive::IsPowerOfTwo}) {
    const Dfa d = build_primitive_relation(p);
    CHECK(from_json(to_json(d)) == d);
  }
  const auto nested = TrackAlphabet::nested(binary_tracks(2), 2);
  const std::vector<std::size_t> map{0, 3};
  const Dfa lifted = lift(build_primitive_relation(Primitive::Equal), nested, map);
  CHECK(from_json(to_json(lifted)) == lifted);
  const std::string dot = to_dot(build_primitive_relation(Primitive::Increment));
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK_THROWS_AS(from_json("{\"tracks\": 2}"), Error);
}
