#include "fapres/groups.hpp"

#include <doctest.h>

#include <random>

using namespace fapres;
using namespace fapres::apps;
using towerpres::TowerBound;

namespace {

Tokens T(const std::string& s) { return split_tokens(s); }

Tokens concat(Tokens a, const Tokens& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<GroupSpec> families() {
  return {GroupSpec::free_abelian(1), GroupSpec::free_abelian(3), GroupSpec::free(1),
          GroupSpec::free(2),         GroupSpec::free(3),         GroupSpec::baumslag_solitar(1, 2),
          GroupSpec::baumslag_solitar(2, 3), GroupSpec::baumslag_solitar(3, 5), GroupSpec::semidirect(1, 0, 0, 1),
          GroupSpec::semidirect(2, 1, 1, 1), GroupSpec::semidirect(0, 1, 1, 0)};
}

GroupElement random_element(const GroupSpec& g, std::mt19937_64& rng) {
  const Tokens gens = g.generators();
  Tokens w;
  const std::size_t len = rng() % 30;
  for (std::size_t i = 0; i < len; ++i) w.push_back(gens[rng() % gens.size()]);
  GroupElement x = group_eval(g, w);
  // occasionally a long or huge leading exponent
  if (rng() % 4 == 0) {
    // huge negative runs have no short encoding at all, so only small ones
    BigInt big = rng() % 3 == 0 ? BigInt(rng()) << 40 : -BigInt(rng() % 500);
    if (rng() % 2) big = -big;
    if (big < -500) big = -big;
    if (auto* e = std::get_if<FreeAbelianNF>(&x)) e->k[0] += big;
    if (auto* e = std::get_if<SemidirectNF>(&x)) e->k += big;
    if (auto* e = std::get_if<BsNF>(&x)) e->m += big;
  }
  return x;
}

}  // namespace

TEST_CASE("free group encodings") {
  const GroupSpec f2 = GroupSpec::free(2);
  const GroupElement g = group_eval(f2, T("a1 a1 a1 a2 a1^-1"));
  CHECK(group_encode_std(f2, g) == T("a1 a1 a1 a2 a1^-1"));
  CHECK(group_encode_compressed(f2, g) == concat(tower_tokens(3), T("a2 a1^-1")));
  CHECK(group_eval(f2, T("a1 a2 a2^-1")) == group_eval(f2, T("a1")));
  const GroupElement neg = group_eval(f2, T("a1^-1 a2"));
  CHECK(group_encode_compressed(f2, neg) == T("a1^-1 a2"));
  CHECK_THROWS_AS(group_decode_std(f2, T("a1 a1^-1")), Error);
  CHECK_THROWS_AS(group_decode_compressed(f2, concat(tower_tokens(2), T("a1 a2"))), Error);
  CHECK_THROWS_AS(group_decode_compressed(f2, concat(tower_tokens(2), T("a1^-1"))), Error);
  CHECK_THROWS_AS(group_decode_compressed(f2, T("a2")), Error);
}

TEST_CASE("cyclic group keeps negative exponents in unary") {
  const GroupSpec z = GroupSpec::free_abelian(1);
  const GroupElement g = FreeAbelianNF{{-2}};
  CHECK(group_encode_std(z, g) == T("a^-1 a^-1"));
  CHECK(group_encode_compressed(z, g) == T("a^-1 a^-1"));
  CHECK(group_encode_compressed(z, FreeAbelianNF{{23}}) == tower_tokens(23));
  CHECK(group_decode_compressed(z, tower_tokens(23)) == GroupElement(FreeAbelianNF{{23}}));
  const GroupSpec z3 = GroupSpec::free_abelian(3);
  CHECK(group_encode_std(z3, FreeAbelianNF{{1, -1, 2}}) == T("a1 a2^-1 a3 a3"));
  CHECK_THROWS_AS(group_decode_std(z3, T("a2 a1")), Error);
  CHECK_THROWS_AS(group_decode_std(z3, T("a1 a1^-1")), Error);
}

TEST_CASE("Baumslag-Solitar normal forms") {
  const GroupSpec bs = GroupSpec::baumslag_solitar(1, 2);
  const GroupElement a5 = group_eval(bs, T("a a a a a"));
  CHECK(group_encode_std(bs, a5) == T("1 0 1"));
  CHECK(group_encode_std(bs, BsNF{{}, -6}) == T("- 0 1 1"));
  CHECK(group_encode_std(bs, group_identity(bs)).empty());
  CHECK(group_eval(bs, T("t a t^-1")) == group_eval(bs, T("a a")));
  for (auto [p, q] : {std::pair{1u, 2u}, {2u, 3u}, {1u, 3u}, {3u, 5u}, {2u, 5u}}) {
    const GroupSpec g = GroupSpec::baumslag_solitar(p, q);
    Tokens lhs{"t"}, rhs;
    lhs.insert(lhs.end(), p, "a");
    lhs.push_back("t^-1");
    rhs.insert(rhs.end(), q, "a");
    CHECK(group_eval(g, lhs) == group_eval(g, rhs));
  }
  // t^3 a: the run is t^3
  const GroupElement x = group_eval(bs, T("t t t a"));
  CHECK(group_encode_std(bs, x) == T("t t t 1"));
  CHECK(group_encode_compressed(bs, x) == concat(tower_tokens(3), T("1")));
  CHECK_THROWS_AS(group_decode_compressed(bs, concat(tower_tokens(1), T("t^-1"))), Error);
  CHECK_THROWS_AS(group_decode_compressed(bs, T("t 1")), Error);
  CHECK_THROWS_AS(GroupSpec::baumslag_solitar(2, 2), Error);
}

TEST_CASE("Baumslag-Solitar validator is exact on short strings") {
  for (auto [p, q] : {std::pair{1u, 2u}, {2u, 3u}}) {
    const GroupSpec g = GroupSpec::baumslag_solitar(p, q);
    Tokens alphabet{"a", "t", "t^-1", "-"};
    for (unsigned d = 0; d < q; ++d) alphabet.push_back(std::to_string(d));
    std::size_t valid = 0;
    for (std::size_t len = 0; len <= 6; ++len) {
      std::vector<std::size_t> idx(len, 0);
      for (;;) {
        Tokens w;
        for (auto i : idx) w.push_back(alphabet[i]);
        // naive reading: a word in a, t, t^-1, then an optional sign and any
        // q-ary digits
        std::optional<GroupElement> naive;
        std::size_t cut = 0;
        while (cut < w.size() && (w[cut] == "a" || w[cut] == "t" || w[cut] == "t^-1")) ++cut;
        bool ok = true;
        std::size_t j = cut;
        bool negative = false;
        if (j < w.size() && w[j] == "-") {
          negative = true;
          ++j;
          ok = j < w.size();
        }
        long m = 0, place = 1;
        for (; ok && j < w.size(); ++j) {
          if (w[j] == "a" || w[j] == "t" || w[j] == "t^-1" || w[j] == "-") {
            ok = false;
            break;
          }
          m += place * std::stol(w[j]);
          place *= q;
        }
        if (ok) {
          GroupElement x = group_eval(g, std::span<const std::string>(w.data(), cut));
          for (long i = 0; i < m; ++i) x = group_act(g, x, negative ? "a^-1" : "a");
          naive = x;
        }
        bool decodes = true;
        try {
          group_decode_std(g, w);
        } catch (const Error&) {
          decodes = false;
        }
        const bool canonical = naive && group_encode_std(g, *naive) == w;
        if (decodes != canonical) FAIL_CHECK(join_tokens(w));
        if (decodes) CHECK(group_decode_std(g, w) == *naive);
        valid += decodes;
        std::size_t i = 0;
        while (i < len && ++idx[i] == alphabet.size()) idx[i++] = 0;
        if (i == len) break;
      }
    }
    CHECK(valid > 50);
  }
}

TEST_CASE("semidirect products") {
  const GroupSpec id = GroupSpec::semidirect(1, 0, 0, 1);
  CHECK(group_act(id, SemidirectNF{2, 1, 0}, "a") == GroupElement(SemidirectNF{3, 1, 0}));
  const GroupSpec cat = GroupSpec::semidirect(2, 1, 1, 1);
  // a^-1 b1 a = (0, A e1)
  CHECK(group_eval(cat, T("a^-1 b1 a")) == group_eval(cat, T("b1 b1 b2")));
  CHECK(group_eval(cat, T("a b2 a^-1")) == group_eval(cat, T("b1^-1 b2 b2")));
  const GroupElement x = SemidirectNF{3, -5, 2};
  CHECK(group_encode_std(cat, x) == T("a a a (-,+) (1,0) (0,1) (1,0)"));
  CHECK(group_encode_compressed(cat, x) == concat(tower_tokens(3), T("(-,+) (1,0) (0,1) (1,0)")));
  CHECK(group_encode_std(cat, SemidirectNF{-1, 0, 0}) == T("a^-1"));
  CHECK_THROWS_AS(group_decode_std(cat, T("(+,+) (0,0)")), Error);
  CHECK_THROWS_AS(group_decode_std(cat, T("(-,+) (0,1)")), Error);
  CHECK_THROWS_AS(GroupSpec::semidirect(2, 0, 0, 1), Error);
}

TEST_CASE("actions are invertible") {
  std::mt19937_64 rng(23);
  for (const GroupSpec& g : families()) {
    const Tokens gens = g.generators();
    const std::size_t half = gens.size() / 2;
    for (int iter = 0; iter < 300; ++iter) {
      const GroupElement x = random_element(g, rng);
      for (std::size_t i = 0; i < half; ++i) {
        CHECK(group_act(g, group_act(g, x, gens[i]), gens[i + half]) == x);
        CHECK(group_act(g, group_act(g, x, gens[i + half]), gens[i]) == x);
      }
    }
  }
}

TEST_CASE("random round trips in both encodings") {
  std::mt19937_64 rng(29);
  for (const GroupSpec& g : families()) {
    for (int iter = 0; iter < 10000; ++iter) {
      const GroupElement x = random_element(g, rng);
      validate(g, x);
      const BigInt len = group_std_length(g, x);
      if (len < 100000) {
        const Tokens s = group_encode_std(g, x);
        REQUIRE(BigInt(s.size()) == len);
        REQUIRE(group_decode_std(g, s) == x);
      }
      const Tokens c = group_encode_compressed(g, x);
      REQUIRE(group_decode_compressed(g, c) == x);
      const GroupSplit split = group_decode_split(g, c);
      CHECK(split.k + split.rest.size() == len);
    }
  }
}

TEST_CASE("compression rate of group elements") {
  const towerpres::OrbitWalker walker = towerpres::orbit_walk(200000);
  for (const GroupSpec& g : {GroupSpec::free_abelian(1), GroupSpec::free(2), GroupSpec::baumslag_solitar(1, 2),
                             GroupSpec::semidirect(2, 1, 1, 1)}) {
    CHECK(group_s_lower(g, 0, &walker).value == TowerBound::exact(0));
    Tokens alphabet = tower_token_alphabet();
    if (g.family == Family::BaumslagSolitar)
      alphabet = concat(alphabet, T("a t t^-1 - 0 1"));
    else if (g.family == Family::Semidirect)
      alphabet = concat(alphabet, T("a a^-1 (+,+) (-,+) (+,-) (-,-) (0,0) (0,1) (1,0) (1,1)"));
    else
      alphabet = concat(alphabet, g.generators());
    std::vector<BigInt> best(3, 0);
    for (std::size_t len = 1; len <= 2; ++len) {
      std::vector<std::size_t> idx(len, 0);
      for (;;) {
        Tokens w;
        for (auto i : idx) w.push_back(alphabet[i]);
        try {
          const GroupSplit s = group_decode_split(g, w);
          const BigInt size = s.k + s.rest.size();
          if (len == 1) CHECK(group_std_length(g, group_decode_compressed(g, w)) == size);
          for (std::size_t n = len; n <= 2; ++n) best[n] = std::max(best[n], size);
        } catch (const Error&) {
        }
        std::size_t i = 0;
        while (i < len && ++idx[i] == alphabet.size()) idx[i++] = 0;
        if (i == len) break;
      }
    }
    for (std::size_t n = 1; n <= 2; ++n) {
      const GroupRate r = group_s_lower(g, n, &walker);
      CHECK(r.exact);
      REQUIRE(r.value.is_exact());
      CHECK(r.value.value() == best[n]);
    }
    CHECK(best[1] == 7);
  }
  const GroupSpec z = GroupSpec::free_abelian(1);
  const GroupRate s3 = group_s_lower(z, 3, &walker, 0);
  CHECK(s3.value == towerpres::r_lower(3, walker).value);
  CHECK(towerpres::tower_compare(s3.value, TowerBound::exact(16)) == towerpres::Ordering::Greater);
  CHECK(towerpres::tower_compare(group_s_lower(z, 3, &walker).value, towerpres::tower_T(9)) !=
        towerpres::Ordering::Less);
  CHECK(group_s_lower(z, 8, nullptr).value == towerpres::TowerBound::at_least_tower(127));
}

TEST_CASE("group specs from text") {
  CHECK(GroupSpec::parse("free-abelian:3").name() == "Z^3");
  CHECK(GroupSpec::parse("free:2").name() == "F_2");
  CHECK(GroupSpec::parse("bs:1,2").name() == "BS(1,2)");
  CHECK(GroupSpec::parse("semidirect:2,1,1,1").A == std::array<long, 4>{2, 1, 1, 1});
  CHECK_THROWS_AS(GroupSpec::parse("bs:2"), Error);
  CHECK_THROWS_AS(GroupSpec::parse("bs:1,x"), Error);
  CHECK_THROWS_AS(GroupSpec::parse("free:0"), Error);
  CHECK_THROWS_AS(GroupSpec::parse("semidirect:2,0,0,1"), Error);
  CHECK_THROWS_AS(GroupSpec::parse("heisenberg"), Error);
}
