#include "fapres/turing.hpp"

#include <doctest.h>

#include <random>

using namespace fapres;
using namespace fapres::apps;
using towerpres::TowerBound;

namespace {

TmConfig cfg(const TuringMachine& m, const std::string& text) { return parse_config(m, split_tokens(text)); }

std::string show(const TmConfig& c) { return join_tokens(c.render()); }

// Every configuration string with exactly `len` tokens.
std::vector<Tokens> configs_of_length(const TuringMachine& m, std::size_t len) {
  std::vector<Tokens> out;
  const std::size_t g = m.gamma().size();
  for (std::size_t pos = 0; pos < len; ++pos)
    for (const auto& q : m.states()) {
      std::vector<std::size_t> digits(len - 1, 0);
      for (;;) {
        Tokens t;
        for (std::size_t i = 0, d = 0; i < len; ++i) t.push_back(i == pos ? q : m.gamma()[digits[d++]]);
        out.push_back(t);
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == g) digits[i++] = 0;
        if (i == digits.size()) break;
      }
    }
  return out;
}

automata::ConvolutionString pair_string(const TuringMachine& m, const automata::Dfa& rel, const TmConfig& a,
                                        const TmConfig& b) {
  return automata::convolve(rel.alphabet(),
                            std::vector<automata::ConvolutionString>{config_string(m, a), config_string(m, b)});
}

}  // namespace

TEST_CASE("sample machine steps") {
  const TuringMachine m = TuringMachine::sample();
  CHECK(show(*tm_step(m, cfg(m, "q0 1 1"))) == "0 q0 1");
  CHECK(show(*tm_step(m, cfg(m, "0 q0 1"))) == "0 0 q0");
  CHECK(show(*tm_step(m, cfg(m, "0 0 q0"))) == "0 q1 0 1");
  CHECK(show(*tm_step(m, cfg(m, "g q1 0 1"))) == "q1 g 0 1");
  CHECK(show(*tm_step(m, cfg(m, "q1 g 0 1"))) == "g q0 0 1");
  CHECK(show(*tm_step(m, cfg(m, "g q0 0 1"))) == "q1 g 1 1");
  CHECK_FALSE(tm_step(m, cfg(m, "q1 _")).has_value());
  CHECK_FALSE(tm_step(m, cfg(m, "q1 0")).has_value());  // would leave cell 0
  CHECK_FALSE(tm_step(m, cfg(m, "q0 0")).has_value());
}

TEST_CASE("configuration parsing") {
  const TuringMachine m = TuringMachine::sample();
  CHECK_THROWS_AS(cfg(m, "g g"), Error);
  CHECK_THROWS_AS(cfg(m, "q0 g q1"), Error);
  CHECK_THROWS_AS(cfg(m, "q0 x"), Error);
  const TmConfig c = cfg(m, "g 0 q1");
  CHECK(c.head == 2);
  CHECK(c.tape == Tokens{"g", "0"});
  CHECK(config_from_string(m, config_string(m, c)) == c);
  const auto lang = tm_config_dfa(m);
  CHECK(lang.accepts(config_string(m, c)));
}

TEST_CASE("machine definitions") {
  const TuringMachine m = TuringMachine::sample();
  const TuringMachine back = TuringMachine::from_json(m.to_json());
  CHECK(back.gamma() == m.gamma());
  CHECK(back.states() == m.states());
  CHECK(back.rules().size() == m.rules().size());
  CHECK(back.to_json() == m.to_json());
  CHECK_THROWS_AS(TuringMachine({"_", "q"}, {"q"}, "q", {}), Error);
  CHECK_THROWS_AS(TuringMachine({"_", "a"}, {"q"}, "q", {{"q", "a", "a", Move::Left, "q"}, {"q", "a", "_", Move::Right, "q"}}),
                  Error);
  CHECK_THROWS_AS(TuringMachine({"_", "<0|0|1|1>"}, {"q"}, "q", {}), Error);
  CHECK_THROWS_AS(TuringMachine::from_json("{\"gamma\": [\"_\"]}"), Error);
}

TEST_CASE("step automaton agrees with the simulator on short configurations") {
  const TuringMachine m = TuringMachine::sample();
  const auto rel = tm_step_relation_dfa(m);
  std::uint64_t stepping = 0;
  for (std::size_t len = 1; len <= 5; ++len)
    for (const Tokens& t : configs_of_length(m, len)) {
      const TmConfig a = parse_config(m, t);
      const auto b = tm_step(m, a);
      if (!b) continue;
      ++stepping;
      CHECK(rel.accepts(pair_string(m, rel, a, *b)));
      CHECK_FALSE(rel.accepts(pair_string(m, rel, a, a)));
    }
  // every accepted pair is a real step; with the count this pins the relation
  std::uint64_t accepted = 0;
  automata::for_each_accepted(rel, 6, [&](std::span<const automata::Code> cols) {
    const automata::ConvolutionString w(rel.alphabet(), std::vector<automata::Code>(cols.begin(), cols.end()));
    const auto tracks = w.deconvolve();
    Tokens ta, tb;
    for (auto d : tracks[0]) ta.push_back(m.config_alphabet()->name(d));
    for (auto d : tracks[1]) tb.push_back(m.config_alphabet()->name(d));
    const auto b = tm_step(m, parse_config(m, ta));
    if (!b || *b != parse_config(m, tb)) FAIL_CHECK("spurious pair " << join_tokens(ta) << " / " << join_tokens(tb));
    if (ta.size() <= 5) ++accepted;
    return true;
  });
  CHECK(accepted == stepping);
  CHECK(stepping > 100);
}

TEST_CASE("halted configurations have no successor pair") {
  const TuringMachine m = TuringMachine::sample();
  const auto rel = tm_step_relation_dfa(m);
  for (const std::string halted : {"q1 _", "q1 0", "g q1 _"}) {
    const TmConfig a = cfg(m, halted);
    REQUIRE_FALSE(tm_step(m, a).has_value());
    for (std::size_t len = 1; len <= 4; ++len)
      for (const Tokens& t : configs_of_length(m, len)) CHECK_FALSE(rel.accepts(pair_string(m, rel, a, parse_config(m, t))));
  }
}

TEST_CASE("compressed configuration codec") {
  const TuringMachine m = TuringMachine::sample();
  const TmConfig xi3 = cfg(m, "g g g q0 _");
  const Tokens w = tm_encode(m, xi3, "g");
  Tokens expect = tower_tokens(3);
  expect.push_back("q0");
  expect.push_back("_");
  CHECK(w == expect);
  CHECK(tm_decode(m, w, "g") == xi3);

  const TmConfig lead = cfg(m, "q0 g 1");
  const Tokens w0 = tm_encode(m, lead, "g");
  CHECK(w0.size() == tower_tokens(0).size() + 3);
  CHECK(tm_decode(m, w0, "g") == lead);

  for (int k = 0; k < 200; ++k) {
    TmConfig xi;
    xi.tape.assign(static_cast<std::size_t>(k), "g");
    xi.tape.push_back("_");
    xi.head = static_cast<std::size_t>(k);
    xi.state = "q0";
    CHECK(tm_encode(m, xi, "g").size() == tower_tokens(k).size() + 2);
  }

  Tokens unfolded = tower_tokens(2);
  unfolded.push_back("g");
  unfolded.push_back("q0");
  CHECK_THROWS_AS(tm_decode(m, unfolded, "g"), Error);
  CHECK_THROWS_AS(tm_decode(m, split_tokens("q0 _"), "g"), Error);
  CHECK_THROWS_AS(tm_encode(m, xi3, "_"), Error);
}

TEST_CASE("random configurations round trip") {
  const TuringMachine m = TuringMachine::sample();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    TmConfig c;
    const std::size_t run = rng() % 40, tail = rng() % 8;
    c.tape.assign(run, "g");
    for (std::size_t j = 0; j < tail; ++j) c.tape.push_back(m.gamma()[rng() % 4]);
    c.head = rng() % (c.tape.size() + 1);
    c.state = m.states()[rng() % 2];
    const Tokens w = tm_encode(m, c, "g");
    REQUIRE(tm_decode(m, w, "g") == c);
  }
}

TEST_CASE("stepping through the compressed codec") {
  const TuringMachine m = TuringMachine::sample();
  TmConfig plain = cfg(m, "g g g q0 _");
  Tokens packed = tm_encode(m, plain, "g");
  for (int i = 0; i < 100; ++i) {
    const auto next_plain = tm_step(m, plain);
    const auto next_from_packed = tm_step(m, tm_decode(m, packed, "g"));
    REQUIRE(next_plain.has_value());
    REQUIRE(next_from_packed.has_value());
    CHECK(*next_plain == *next_from_packed);
    plain = *next_plain;
    packed = tm_encode(m, *next_from_packed, "g");
  }
  CHECK(tm_decode(m, packed, "g") == plain);
}

TEST_CASE("compression rate of configurations") {
  const TuringMachine m = TuringMachine::sample();
  const towerpres::OrbitWalker walker = towerpres::orbit_walk(200000);
  CHECK(tm_s_lower(m, 0, &walker).value == TowerBound::exact(0));
  CHECK(tm_s_lower(m, 1, &walker).value == TowerBound::exact(0));

  // brute force over every token string of length <= 3
  Tokens alphabet = tower_token_alphabet();
  for (const auto& g : m.gamma()) alphabet.push_back(g);
  for (const auto& q : m.states()) alphabet.push_back(q);
  std::vector<BigInt> best(4, 0);
  std::vector<std::size_t> idx;
  for (std::size_t len = 1; len <= 3; ++len) {
    idx.assign(len, 0);
    for (;;) {
      Tokens w;
      for (std::size_t i : idx) w.push_back(alphabet[i]);
      try {
        const TmSplit s = tm_decode_split(m, w, "g");
        const BigInt size = s.k + s.rest.size();
        for (std::size_t n = len; n <= 3; ++n) best[n] = std::max(best[n], size);
      } catch (const Error&) {
      }
      std::size_t i = 0;
      while (i < len && ++idx[i] == alphabet.size()) idx[i++] = 0;
      if (i == len) break;
    }
  }
  CHECK(best[1] == 0);
  CHECK(best[2] == 8);
  for (std::size_t n = 2; n <= 3; ++n) {
    const TmRate r = tm_s_lower(m, n, &walker);
    CHECK(r.exact);
    REQUIRE(r.value.is_exact());
    CHECK(r.value.value() == best[n]);
    CHECK(r.witness.size() == n);
    const TmSplit s = tm_decode_split(m, r.witness, "g");
    CHECK(s.k + s.rest.size() == best[n]);
  }

  const TmRate s5 = tm_s_lower(m, 5, &walker);
  const towerpres::RBound r3 = towerpres::r_lower(3, walker);
  CHECK(towerpres::tower_compare(s5.value, TowerBound::exact(r3.value.value() + 2)) != towerpres::Ordering::Less);
  CHECK(towerpres::tower_compare(s5.value, TowerBound::exact(18)) == towerpres::Ordering::Greater);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto lhs = tm_s_lower(m, n + 2, &walker).value;
    const auto rhs = towerpres::r_lower(n, walker).value;
    CHECK(towerpres::tower_compare(lhs, TowerBound::exact(rhs.value() + 2)) != towerpres::Ordering::Less);
  }
  CHECK(towerpres::tower_compare(tm_s_lower(m, 7, &walker).value, towerpres::tower_T(7)) != towerpres::Ordering::Less);
}
