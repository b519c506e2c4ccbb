#include "fapres/comprate.hpp"

#include <doctest.h>

#include <random>

using namespace fapres;
using namespace fapres::comprate;
using automata::Code;
using towerpres::TupleV;

namespace {

ConvolutionString word(const Presentation& psi, const std::string& text) { return parse_word(psi, text); }

// LSB-first digits of n in base k, computed without the library.
std::vector<std::uint32_t> digits_of(std::uint64_t n, unsigned k) {
  std::vector<std::uint32_t> d;
  do {
    d.push_back(static_cast<std::uint32_t>(n % k));
    n /= k;
  } while (n > 0);
  return d;
}

ConvolutionString numeral(const Presentation& psi, std::uint64_t n, unsigned k) {
  const auto d = digits_of(n, k);
  return ConvolutionString(psi.language.alphabet(), std::vector<Code>(d.begin(), d.end()));
}

ConvolutionString triple(const Presentation& psi, const ConvolutionString& x, const ConvolutionString& y,
                         const ConvolutionString& z) {
  return automata::convolve(psi.addition->alphabet(), std::vector<ConvolutionString>{x, y, z});
}

}  // namespace

TEST_CASE("unary presentation") {
  const Presentation u = unary_presentation();
  CHECK(u.decode(word(u, "000")) == TowerBound::exact(3));
  CHECK(u.decode(word(u, "")) == TowerBound::exact(0));
  CHECK(u.mu == 1);
  const auto& succ = *u.successor;
  for (std::size_t k = 0; k <= 50; ++k) {
    const ConvolutionString a = u.encode(k), b = u.encode(k + 1), c = u.encode(k + 2);
    CHECK(succ.accepts(automata::convolve(succ.alphabet(), std::vector<ConvolutionString>{a, b})));
    CHECK_FALSE(succ.accepts(automata::convolve(succ.alphabet(), std::vector<ConvolutionString>{a, c})));
    CHECK_FALSE(succ.accepts(automata::convolve(succ.alphabet(), std::vector<ConvolutionString>{a, a})));
  }
}

TEST_CASE("base-k decoding and round trips") {
  const Presentation b2 = base_k_presentation(2);
  CHECK(b2.decode(word(b2, "101")) == TowerBound::exact(5));
  CHECK(b2.decode(word(b2, "0")) == TowerBound::exact(0));
  CHECK_THROWS_AS(b2.decode(word(b2, "10")), Error);
  CHECK_FALSE(b2.language.accepts(word(b2, "")));
  CHECK_THROWS_AS(base_k_presentation(1), Error);

  const Presentation b4 = base_k_presentation(4);
  for (std::uint64_t n = 0; n < 4096; ++n) {
    const ConvolutionString w = b4.encode(n);
    CHECK(w == numeral(b4, n, 4));
    CHECK(b4.language.accepts(w));
    CHECK(b4.decode(w) == TowerBound::exact(n));
  }
}

TEST_CASE("base-2 addition agrees with integer addition") {
  const Presentation b2 = base_k_presentation(2);
  CHECK(b2.addition->accepts(triple(b2, word(b2, "1"), word(b2, "1"), word(b2, "01"))));
  for (std::uint64_t x = 0; x < 64; ++x)
    for (std::uint64_t y = 0; y < 64; ++y)
      for (std::uint64_t z = 0; z < 128; ++z)
        if (b2.addition->accepts(triple(b2, numeral(b2, x, 2), numeral(b2, y, 2), numeral(b2, z, 2))) != (x + y == z))
          FAIL_CHECK(x << "+" << y << "=" << z);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t x = rng() % 1024, y = rng() % 1024, off = 1 + rng() % 5;
    CHECK(b2.addition->accepts(triple(b2, numeral(b2, x, 2), numeral(b2, y, 2), numeral(b2, x + y, 2))));
    CHECK_FALSE(b2.addition->accepts(triple(b2, numeral(b2, x, 2), numeral(b2, y, 2), numeral(b2, x + y + off, 2))));
  }
}

TEST_CASE("base-3 successor, doubling and equality") {
  const Presentation b3 = base_k_presentation(3);
  auto pair = [&](const automata::Dfa& d, std::uint64_t x, std::uint64_t y) {
    return d.accepts(automata::convolve(d.alphabet(), std::vector<ConvolutionString>{numeral(b3, x, 3), numeral(b3, y, 3)}));
  };
  for (std::uint64_t x = 0; x < 81; ++x)
    for (std::uint64_t y = 0; y < 200; ++y) {
      CHECK(pair(*b3.successor, x, y) == (y == x + 1));
      CHECK(pair(*b3.doubling, x, y) == (y == 2 * x));
      CHECK(pair(*b3.equality, x, y) == (y == x));
    }
}

TEST_CASE("xi") {
  const Presentation u = unary_presentation(), b2 = base_k_presentation(2), t = tower_presentation();
  CHECK(xi(word(b2, "101"), b2, u) == TowerBound::exact(5));
  CHECK(xi(word(b2, "0111"), b2, b2) == TowerBound::exact(4));
  const ConvolutionString w = towerpres::encode_tuple(TupleV{0, 4, 0, 0});
  CHECK(xi(w, t, u) == TowerBound::exact(23));
  CHECK(t.encode(23) == w);
  // equal values, equal xi
  const Presentation loose = loose_base_k_presentation(2);
  CHECK(xi(word(loose, "1"), loose, b2) == xi(word(loose, "1000"), loose, b2));
  CHECK_THROWS_AS(xi(word(b2, "10"), b2, u), Error);
}

TEST_CASE("s(n) for small presentations") {
  const Presentation u = unary_presentation(), b2 = base_k_presentation(2), b4 = base_k_presentation(4);
  CHECK(s_of_n(0, b2, u, Strategy::Exhaustive).s_value == TowerBound::exact(0));
  const CompressProfile p4 = s_of_n(4, b2, u, Strategy::Exhaustive);
  CHECK(p4.s_value == TowerBound::exact(15));
  CHECK(p4.exact);
  REQUIRE_FALSE(p4.witnesses.empty());
  CHECK(p4.witnesses.front().word == "1 1 1 1");
  for (std::size_t n = 0; n <= 10; ++n) {
    CHECK(s_of_n(n, b2, b2, Strategy::Exhaustive).s_value == TowerBound::exact(n));
    CHECK(s_of_n(n, u, u, Strategy::Exhaustive).s_value == TowerBound::exact(n));
  }
  // the positional maximizer agrees with enumeration
  for (std::size_t n = 0; n <= 7; ++n) {
    CHECK(s_of_n(n, b4, b2, Strategy::ValueMax).s_value == s_of_n(n, b4, b2, Strategy::Exhaustive).s_value);
    CHECK(s_of_n(n, b2, u, Strategy::ValueMax).s_value == s_of_n(n, b2, u, Strategy::Exhaustive).s_value);
  }
  SOptions tight;
  tight.max_strings = 10;
  const CompressProfile cut = s_of_n(6, b2, u, Strategy::Exhaustive, tight);
  CHECK(cut.budget_exhausted);
  CHECK_FALSE(cut.exact);
  CHECK(profile_csv_row(cut).find("budget exhausted") != std::string::npos);
}

TEST_CASE("s(n) of the tower presentation") {
  const Presentation u = unary_presentation(), t = tower_presentation();
  CHECK(s_of_n(0, t, u, Strategy::OrbitAssisted).s_value == TowerBound::exact(0));
  const CompressProfile p1 = s_of_n(1, t, u, Strategy::OrbitAssisted);
  CHECK(p1.exact);
  CHECK(p1.s_value == s_of_n(1, t, u, Strategy::Exhaustive).s_value);
  const CompressProfile p3 = s_of_n(3, t, u, Strategy::OrbitAssisted);
  CHECK(towerpres::tower_compare(p3.s_value, TowerBound::exact(16)) == towerpres::Ordering::Greater);
  const CompressProfile p6 = s_of_n(6, t, u, Strategy::OrbitAssisted);
  CHECK(towerpres::tower_compare(p6.s_value, towerpres::tower_T(6)) != towerpres::Ordering::Less);
  CHECK_THROWS_AS(s_of_n(2, base_k_presentation(2), u, Strategy::OrbitAssisted), Error);
  CHECK(profile_csv_header() == "n,s_value,exact,witness");
}

TEST_CASE("exponential value bound for addition presentations") {
  const Presentation b2 = base_k_presentation(2);
  const ValueBoundReport r2 = value_bound_check(b2, 16);
  CHECK(r2.passed);
  CHECK(r2.c == b2.addition->state_count());
  CHECK(r2.sigma == 3);
  for (const auto& row : r2.rows) {
    const BigInt expect = row.n == 0 ? BigInt(0) : pow2(row.n) - 1;
    CHECK(row.observed_max == expect);
  }
  const ValueBoundReport r4 = value_bound_check(base_k_presentation(4), 8);
  CHECK(r4.passed);
  CHECK(r4.mu == 4);
  for (const auto& row : r4.rows) {
    const BigInt expect = row.n == 0 ? BigInt(0) : boost::multiprecision::pow(BigInt(4), row.n) - 1;
    CHECK(row.observed_max == expect);
  }
  CHECK_THROWS_AS(value_bound_check(unary_presentation(), 4), Error);
}

TEST_CASE("incompressibility of base 4 against base 2") {
  const IncompressReport r = incompressibility_check(base_k_presentation(4), base_k_presentation(2), 16);
  CHECK(r.passed);
  CHECK(r.gaps_pass);
  CHECK(r.d0p == 1);
  REQUIRE(r.power_lengths.size() == 32);
  for (std::size_t k = 0; k + 1 < r.power_lengths.size(); ++k) {
    CHECK(r.power_lengths[k] == k + 1);
    CHECK(r.power_lengths[k + 1] - r.power_lengths[k] <= r.c0);
  }
  for (const auto& row : r.rows) {
    REQUIRE(row.s.is_exact());
    CHECK(row.s.value() <= 2 * row.n + 1);
    CHECK(row.s.value() == (row.n == 0 ? 0 : 2 * row.n));
  }
  const IncompressReport same = incompressibility_check(base_k_presentation(2), base_k_presentation(2), 12);
  CHECK(same.passed);
  for (const auto& row : same.rows) CHECK(row.s == TowerBound::exact(row.n));
}

TEST_CASE("bijectivize keeps the least representatives") {
  const Presentation loose = loose_base_k_presentation(2);
  CHECK(loose.language.accepts(word(loose, "100")));
  const Presentation tight = bijectivize(loose);
  CHECK(automata::equivalent(tight.language, base_k_presentation(2).language));
  CHECK(tight.decode(word(tight, "011")) == TowerBound::exact(6));
  CHECK_THROWS_AS(tight.decode(word(tight, "0110")), Error);
  const Presentation b3 = bijectivize(base_k_presentation(3));
  CHECK(automata::equivalent(b3.language, base_k_presentation(3).language));
  CHECK_THROWS_AS(bijectivize(unary_presentation()), Error);
}

TEST_CASE("presentation lookup") {
  CHECK(presentation_by_name("base-7").mu == 7);
  CHECK(presentation_by_name("unary").name == "unary");
  CHECK(presentation_by_name("loose-base-2").name == "loose-base-2");
  CHECK_THROWS_AS(presentation_by_name("octal"), Error);
  CHECK(strategy_from_name("value-max") == Strategy::ValueMax);
  CHECK_FALSE(strategy_from_name("fast").has_value());
}
