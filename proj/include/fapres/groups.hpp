#pragma once

// Normal forms, generator actions and two string encodings for four families
// of Cayley automatic groups: Z^m, the free group F_m, Baumslag-Solitar
// BS(p,q) and Z^2 x_A Z. The compressed encoding replaces the leading run
// x^k (k >= 0) of the standard string by u_k; negative runs stay as they are.

#include "fapres/orbit.hpp"
#include "fapres/tower_tokens.hpp"

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fapres::apps {

enum class Family { FreeAbelian, Free, BaumslagSolitar, Semidirect };

const char* to_string(Family f);

struct GroupSpec {
  Family family = Family::FreeAbelian;
  unsigned m = 1;             // rank of Z^m and F_m
  unsigned p = 1, q = 2;      // BS(p,q), 1 <= p < q
  std::array<long, 4> A{1, 0, 0, 1};  // row-major, |det A| = 1

  static GroupSpec free_abelian(unsigned m);
  static GroupSpec free(unsigned m);
  static GroupSpec baumslag_solitar(unsigned p, unsigned q);
  static GroupSpec semidirect(long a11, long a12, long a21, long a22);
  // "free-abelian:<m>", "free:<m>", "bs:<p>,<q>", "semidirect:<a11>,<a12>,<a21>,<a22>"
  static GroupSpec parse(std::string_view text);

  // "Z^m", "F_m", "BS(p,q)", "Z^2 x_A Z"
  std::string name() const;
  // Generator tokens followed by their inverses, e.g. a1 a2 a1^-1 a2^-1.
  Tokens generators() const;
  // The run symbol x of the compressed encoding (a1, a or t).
  std::string run_symbol() const;
};

struct FreeAbelianNF {
  std::vector<BigInt> k;  // exponents of a1..am
  bool operator==(const FreeAbelianNF&) const = default;
};

struct Letter {
  unsigned gen;  // 1-based
  int sign;      // +1 or -1
  bool operator==(const Letter&) const = default;
};

struct FreeNF {
  std::vector<Letter> word;  // freely reduced
  bool operator==(const FreeNF&) const = default;
};

// w t^eps with w = a^power
struct BsFactor {
  unsigned power;
  int eps;
  bool operator==(const BsFactor&) const = default;
};

// factors[0] t ... factors.back() t, then a^m
struct BsNF {
  std::vector<BsFactor> factors;
  BigInt m;
  bool operator==(const BsNF&) const = default;
};

// (a^k, z); the product is (k, z)(j, y) = (k + j, A^j z + y)
struct SemidirectNF {
  BigInt k;
  BigInt z1, z2;
  bool operator==(const SemidirectNF&) const = default;
};

using GroupElement = std::variant<FreeAbelianNF, FreeNF, BsNF, SemidirectNF>;

GroupElement group_identity(const GroupSpec& g);
// Throws Malformed when x is not a valid normal form of g's family.
void validate(const GroupSpec& g, const GroupElement& x);

// x times the generator token.
GroupElement group_act(const GroupSpec& g, const GroupElement& x, const std::string& generator);
// Product of the generator tokens, starting from the identity.
GroupElement group_eval(const GroupSpec& g, std::span<const std::string> word);

inline constexpr std::uint64_t kMaxExpandedRun = std::uint64_t{1} << 24;

// Standard strings. a^k runs are written out, BS(p,q) ends with an LSB-first
// q-ary tail ("-" first when negative, empty for 0), the lattice part of
// Z^2 x_A Z is a sign column "(s1,s2)" and LSB-first bit columns "(b1,b2)".
Tokens group_encode_std(const GroupSpec& g, const GroupElement& x);
GroupElement group_decode_std(const GroupSpec& g, std::span<const std::string> w);
BigInt group_std_length(const GroupSpec& g, const GroupElement& x);

Tokens group_encode_compressed(const GroupSpec& g, const GroupElement& x);
GroupElement group_decode_compressed(const GroupSpec& g, std::span<const std::string> w,
                                     std::uint64_t max_run = kMaxExpandedRun);

// A compressed string u_k rest stands for the standard string x^k rest.
// For strings without a tower prefix k is 0 and rest is the whole string.
struct GroupSplit {
  BigInt k;
  Tokens rest;
};
// Validates w without expanding the run.
GroupSplit group_decode_split(const GroupSpec& g, std::span<const std::string> w);

struct GroupRate {
  towerpres::TowerBound value;
  bool exact = false;
  Tokens witness;
};

// s(n) of the compressed encoding against the standard one. A string u_k rest
// has a standard string of length k + |rest|, r grows by more than one per
// extra column, and negative runs are not shortened, so s(n) = r(n) for
// n >= 1 and s(0) = 0.
GroupRate group_s_lower(const GroupSpec& g, std::size_t n, const towerpres::OrbitWalker* walker,
                        std::size_t enumerate_limit = 3);

}  // namespace fapres::apps
