#include "fapres/comprate.hpp"

#include "fapres/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace fapres::comprate {

using automata::AlphabetPtr;
using automata::Code;
using automata::TrackAlphabet;
using towerpres::TupleV;

namespace {

constexpr std::uint64_t kUnaryEncodeCap = 100'000'000;

AlphabetPtr digit_alphabet(unsigned k) {
  static std::map<unsigned, AlphabetPtr> cache;
  static std::mutex guard;
  std::lock_guard lock(guard);
  auto& slot = cache[k];
  if (!slot) {
    std::vector<std::string> digits;
    for (unsigned i = 0; i < k; ++i) digits.push_back(std::to_string(i));
    slot = TrackAlphabet::uniform(std::move(digits), 1);
  }
  return slot;
}

// Shape of one numeral track: length so far (capped at 2), whether the last
// digit was zero, and whether padding started.
struct Shape {
  std::uint8_t len = 0;
  bool last_zero = false;
  bool padded = false;

  bool feed(std::uint32_t digit, std::uint32_t pad) {
    if (digit == pad) {
      padded = true;
      return true;
    }
    if (padded) return false;
    len = static_cast<std::uint8_t>(std::min(2, len + 1));
    last_zero = digit == 0;
    return true;
  }
  bool canonical() const { return len == 1 || (len == 2 && !last_zero); }
  bool nonempty() const { return len >= 1; }
  auto operator<=>(const Shape&) const = default;
};

struct AffineState {
  std::vector<Shape> shapes;
  unsigned carry = 0;
  auto operator<=>(const AffineState&) const = default;
};

// Relation sum_i coef[i]*x_i + constant = y on the flat tracks of
// nested(digits, coefs.size()+1), y on the last track.
Dfa affine_relation(unsigned k, const std::vector<unsigned>& coefs, unsigned constant, bool canonical) {
  const AlphabetPtr alphabet = TrackAlphabet::nested(digit_alphabet(k), coefs.size() + 1);
  const std::size_t m = coefs.size();
  AffineState init{std::vector<Shape>(m + 1), constant};
  return automata::minimize(automata::explore(
      alphabet, init,
      [&](AffineState s, Code c) -> std::optional<AffineState> {
        unsigned total = s.carry;
        for (std::size_t i = 0; i <= m; ++i) {
          const std::uint32_t d = alphabet->flat_digit(c, i);
          if (!s.shapes[i].feed(d, k)) return std::nullopt;
          if (i < m && d != k) total += coefs[i] * d;
        }
        const std::uint32_t y = alphabet->flat_digit(c, m);
        if (total % k != (y == k ? 0u : y)) return std::nullopt;
        s.carry = total / k;
        return s;
      },
      [&](const AffineState& s) {
        for (const Shape& sh : s.shapes)
          if (canonical ? !sh.canonical() : !sh.nonempty()) return false;
        return s.carry == 0;
      }));
}

Dfa numeral_language(unsigned k, bool canonical) {
  const AlphabetPtr alphabet = digit_alphabet(k);
  return automata::minimize(automata::explore(
      alphabet, Shape{},
      [&](Shape s, Code c) -> std::optional<Shape> {
        if (!s.feed(alphabet->digit(c, 0), k)) return std::nullopt;
        return s;
      },
      [&](const Shape& s) { return canonical ? s.canonical() : s.nonempty(); }));
}

BigInt positional_value(const ConvolutionString& w, unsigned k) {
  BigInt v = 0, place = 1;
  for (Code c : w.columns()) {
    v += place * w.alphabet()->digit(c, 0);
    place *= k;
  }
  return v;
}

// max sum d_i k^i over accepted strings of length <= n, by backward dynamic
// programming over (position, state).
std::optional<BigInt> positional_max(const Dfa& d, unsigned k, std::size_t n) {
  std::optional<BigInt> best;
  const std::size_t states = d.state_count();
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::optional<BigInt>> value(states);
    for (automata::StateId s = 0; s < states; ++s)
      if (d.is_accepting(s)) value[s] = BigInt(0);
    BigInt place = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(len - 1));
    for (std::size_t pos = len; pos-- > 0;) {
      std::vector<std::optional<BigInt>> prev(states);
      for (automata::StateId s = 0; s < states; ++s)
        for (Code c = 0; c < d.alphabet()->size(); ++c) {
          const auto& tail = value[d.next(s, c)];
          if (!tail) continue;
          BigInt v = *tail + place * d.alphabet()->digit(c, 0);
          if (!prev[s] || v > *prev[s]) prev[s] = std::move(v);
        }
      value = std::move(prev);
      if (pos > 0) place /= k;
    }
    if (const auto& v = value[d.start()]; v && (!best || *v > *best)) best = *v;
  }
  if (n == 0 || !best) {
    if (d.is_accepting(d.start())) return BigInt(0);
  }
  return best;
}

std::size_t ceil_log2(std::size_t x) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < x) ++r;
  return r;
}

void require_language(const Presentation& psi, const ConvolutionString& w) {
  if (!psi.language.accepts(w))
    throw Error(ErrorCode::Malformed, "'" + w.to_string() + "' is not in the language of " + psi.name);
}

}  // namespace

Presentation unary_presentation() {
  const AlphabetPtr alphabet = TrackAlphabet::uniform({"0"}, 1);
  Presentation p("unary", automata::universal_dfa(alphabet));
  p.mu = 1;
  p.decode = [](const ConvolutionString& w) { return TowerBound::exact(w.size()); };
  p.encode = [alphabet](const BigInt& n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative natural");
    if (n > kUnaryEncodeCap) throw Error(ErrorCode::Budget, "unary string too long to materialize");
    return ConvolutionString(alphabet, std::vector<Code>(static_cast<std::size_t>(n), 0));
  };
  p.canonical_length = [](const TowerBound& x) { return x; };
  p.length_monotone = true;
  p.max_value = [](std::size_t n) -> std::optional<BigInt> { return BigInt(n); };

  // 0^k ⊗ 0^{k+1}
  const AlphabetPtr pair = TrackAlphabet::nested(alphabet, 2);
  p.successor = automata::minimize(automata::explore(
      pair, 0,
      [&](int phase, Code c) -> std::optional<int> {
        const bool u = !pair->is_padding(c, 0), v = !pair->is_padding(c, 1);
        if (phase == 0 && u && v) return 0;
        if (phase == 0 && !u && v) return 1;
        return std::nullopt;
      },
      [](int phase) { return phase == 1; }));
  return p;
}

Presentation base_k_presentation(unsigned k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "base must be at least 2");
  if (k > 64) throw Error(ErrorCode::InvalidArgument, "base too large");
  const AlphabetPtr alphabet = digit_alphabet(k);
  Presentation p("base-" + std::to_string(k), numeral_language(k, true));
  p.mu = k;
  const Dfa lang = p.language;
  p.decode = [lang, k, name = p.name](const ConvolutionString& w) {
    if (!lang.accepts(w)) throw Error(ErrorCode::Malformed, "'" + w.to_string() + "' is not in the language of " + name);
    return TowerBound::exact(positional_value(w, k));
  };
  p.encode = [alphabet, k](const BigInt& n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative natural");
    std::vector<Code> digits;
    BigInt rest = n;
    do {
      digits.push_back(static_cast<Code>(static_cast<unsigned>(rest % k)));
      rest /= k;
    } while (rest > 0);
    return ConvolutionString(alphabet, std::move(digits));
  };
  p.canonical_length = [k](const TowerBound& x) {
    if (x.is_exact()) {
      std::size_t digits = 1;
      for (BigInt rest = x.value() / k; rest > 0; rest /= k) ++digits;
      return TowerBound::exact(digits);
    }
    // x >= T(h) has more than T(h-1) binary digits
    if (k == 2) return TowerBound::at_least_tower(x.height() == 0 ? 0 : x.height() - 1);
    throw Error(ErrorCode::Budget, "symbolic length only supported in base 2");
  };
  p.length_monotone = true;
  p.max_value = [lang, k](std::size_t n) { return positional_max(lang, k, n); };
  p.successor = affine_relation(k, {1}, 1, true);
  p.addition = affine_relation(k, {1, 1}, 0, true);
  p.doubling = affine_relation(k, {2}, 0, true);
  p.equality = affine_relation(k, {1}, 0, true);
  return p;
}

Presentation loose_base_k_presentation(unsigned k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "base must be at least 2");
  Presentation p("loose-base-" + std::to_string(k), numeral_language(k, false));
  p.mu = k;
  const Dfa lang = p.language;
  p.decode = [lang, k](const ConvolutionString& w) {
    if (!lang.accepts(w)) throw Error(ErrorCode::Malformed, "not a digit string");
    return TowerBound::exact(positional_value(w, k));
  };
  p.length_monotone = false;
  p.addition = affine_relation(k, {1, 1}, 0, false);
  p.equality = affine_relation(k, {1}, 0, false);
  return p;
}

Presentation tower_presentation(std::uint64_t bit_budget) {
  Presentation p("tower", towerpres::language_dfa());
  p.mu = towerpres::tuple_alphabet()->size();
  p.decode = [bit_budget](const ConvolutionString& w) {
    const auto v = towerpres::decode_string(w);
    if (!v) throw Error(ErrorCode::Malformed, "'" + w.to_string() + "' does not encode a tuple");
    return towerpres::orbit_index_fast(*v, bit_budget);
  };
  p.encode = [](const BigInt& k) { return towerpres::encode_tuple(towerpres::orbit_tuple_at(k)); };
  p.canonical_length = [](const TowerBound& x) {
    if (!x.is_exact()) throw Error(ErrorCode::Budget, "no tower representative for a symbolic value");
    return TowerBound::exact(towerpres::encoding_length(towerpres::orbit_tuple_at(x.value())));
  };
  p.successor = towerpres::graph_f_dfa();
  return p;
}

Presentation presentation_by_name(const std::string& name) {
  if (name == "unary") return unary_presentation();
  if (name == "tower") return tower_presentation();
  for (const std::string prefix : {"base-", "loose-base-"}) {
    if (name.rfind(prefix, 0) == 0) {
      const std::string digits = name.substr(prefix.size());
      if (!digits.empty() && digits.size() < 4 && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        const unsigned k = static_cast<unsigned>(std::stoul(digits));
        return prefix == "base-" ? base_k_presentation(k) : loose_base_k_presentation(k);
      }
    }
  }
  throw Error(ErrorCode::NotFound, "unknown presentation '" + name + "'");
}

namespace {

// v <_llex u on outer tracks (u, v) = (0, 1).
Dfa llex_less(const AlphabetPtr& inner) {
  enum Phase { Equal, Less, Greater, Shorter, Longer };
  const AlphabetPtr pair = TrackAlphabet::nested(inner, 2);
  return automata::explore(
      pair, Equal,
      [&](Phase s, Code c) -> std::optional<Phase> {
        const bool u = !pair->is_padding(c, 0), v = !pair->is_padding(c, 1);
        if (s == Shorter || s == Longer) return s;
        if (u && !v) return Shorter;
        if (!u && v) return Longer;
        if (s != Equal) return s;
        const auto du = pair->digit(c, 0), dv = pair->digit(c, 1);
        return dv < du ? Less : dv > du ? Greater : Equal;
      },
      [](Phase s) { return s == Less || s == Shorter; });
}

}  // namespace

Presentation bijectivize(const Presentation& psi) {
  if (!psi.equality) throw Error(ErrorCode::InvalidArgument, psi.name + " has no equality automaton");
  const AlphabetPtr& inner = psi.language.alphabet();
  const std::vector<std::size_t> keep{0};
  const std::vector<std::size_t> v_track{1};
  const Dfa v_in_language = automata::lift(psi.language, psi.equality->alphabet(),
                                           std::vector<std::size_t>{1});
  const Dfa smaller_twin = automata::project(
      automata::intersect(automata::intersect(*psi.equality, llex_less(inner)), v_in_language), keep);
  Presentation out = psi;
  out.name = psi.name + "-llex";
  out.language = automata::minimize(automata::intersect(psi.language, automata::complement(smaller_twin)));
  const Dfa lang = out.language;
  const auto decode = psi.decode;
  out.decode = [lang, decode](const ConvolutionString& w) {
    if (!lang.accepts(w)) throw Error(ErrorCode::Malformed, "not a least representative");
    return decode(w);
  };
  return out;
}

ConvolutionString parse_word(const Presentation& psi, const std::string& text) {
  const AlphabetPtr& alphabet = psi.language.alphabet();
  std::map<std::string, Code> by_name;
  bool single_chars = true;
  for (Code c = 0; c < alphabet->size(); ++c) {
    by_name[alphabet->name(c)] = c;
    single_chars = single_chars && alphabet->name(c).size() == 1;
  }
  std::vector<Code> cols;
  const bool spaced = text.find_first_of(" \t") != std::string::npos;
  if (!spaced && single_chars) {
    for (char ch : text) {
      auto it = by_name.find(std::string(1, ch));
      if (it == by_name.end()) throw Error(ErrorCode::Malformed, std::string("unknown symbol '") + ch + "'");
      cols.push_back(it->second);
    }
  } else {
    std::istringstream in(text);
    for (std::string tok; in >> tok;) {
      auto it = by_name.find(tok);
      if (it == by_name.end()) throw Error(ErrorCode::Malformed, "unknown column '" + tok + "'");
      cols.push_back(it->second);
    }
  }
  return ConvolutionString(alphabet, std::move(cols));
}

TowerBound xi(const ConvolutionString& w, const Presentation& psi, const Presentation& psi0) {
  if (psi.domain != psi0.domain)
    throw Error(ErrorCode::InvalidArgument, "presentations of different structures: " + psi.domain + " vs " + psi0.domain);
  if (!psi0.canonical_length) throw Error(ErrorCode::InvalidArgument, psi0.name + " has no canonical encoder");
  require_language(psi, w);
  return psi0.canonical_length(psi.decode(w));
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Exhaustive: return "exhaustive";
    case Strategy::ValueMax: return "value-max";
    case Strategy::OrbitAssisted: return "orbit-assisted";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
  for (Strategy s : {Strategy::Exhaustive, Strategy::ValueMax, Strategy::OrbitAssisted})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

namespace {

void offer(CompressProfile& p, const TowerBound& value, const std::string& word, bool& have) {
  if (!have || !(towerpres::stronger_lower_bound(p.s_value, value) == p.s_value)) {
    p.s_value = value;
    p.witnesses = {Witness{word, value}};
    have = true;
  }
}

}  // namespace

CompressProfile s_of_n(std::size_t n, const Presentation& psi, const Presentation& psi0, Strategy strategy,
                       const SOptions& options) {
  CompressProfile p;
  p.n = n;
  p.strategy = strategy;
  p.s_value = TowerBound::exact(0);
  bool have = false;

  switch (strategy) {
    case Strategy::Exhaustive: {
      automata::for_each_accepted(psi.language, n, [&](std::span<const Code> cols) {
        if (p.strings_examined >= options.max_strings) {
          p.budget_exhausted = true;
          p.exact = false;
          return false;
        }
        ++p.strings_examined;
        const ConvolutionString w(psi.language.alphabet(), std::vector<Code>(cols.begin(), cols.end()));
        const TowerBound x = xi(w, psi, psi0);
        if (!x.is_exact()) p.exact = false;
        offer(p, x, w.to_string(), have);
        return true;
      });
      break;
    }
    case Strategy::ValueMax: {
      if (!psi.max_value) throw Error(ErrorCode::InvalidArgument, psi.name + " has no value maximizer");
      if (!psi0.length_monotone || !psi0.canonical_length)
        throw Error(ErrorCode::InvalidArgument, psi0.name + " lengths are not monotone in the value");
      if (psi.domain != psi0.domain) throw Error(ErrorCode::InvalidArgument, "presentations of different structures");
      if (const auto top = psi.max_value(n)) {
        const std::string word = psi.encode ? psi.encode(*top).to_string() : top->str();
        offer(p, psi0.canonical_length(TowerBound::exact(*top)), word, have);
      }
      break;
    }
    case Strategy::OrbitAssisted: {
      if (psi.name != "tower" || psi0.name != "unary")
        throw Error(ErrorCode::InvalidArgument, "orbit-assisted strategy needs the tower presentation against unary");
      const towerpres::RBound r = towerpres::r_best(n, options.walker, options.enumerate_limit, options.bit_budget);
      offer(p, r.value, r.witness ? towerpres::encode_tuple(*r.witness).to_string() : "", have);
      p.exact = r.exact;
      break;
    }
  }
  return p;
}

std::string profile_csv_header() { return "n,s_value,exact,witness"; }

std::string profile_csv_row(const CompressProfile& p) {
  std::string row = std::to_string(p.n) + "," + p.s_value.to_string() + "," + (p.exact ? "1" : "0") + ",";
  if (!p.witnesses.empty()) row += p.witnesses.front().word;
  if (p.budget_exhausted) row += " (budget exhausted)";
  return row;
}

ValueBoundReport value_bound_check(const Presentation& psi, std::size_t n_max, std::size_t n_check) {
  if (!psi.addition)
    throw Error(ErrorCode::InvalidArgument,
                psi.name + " carries no addition automaton; (N;+) has no presentation over a unary alphabet");
  ValueBoundReport r;
  r.presentation = psi.name;
  r.mu = psi.mu;
  r.sigma = psi.mu + 1;
  r.c = automata::functional_gap_bound(*psi.addition, 2, n_check);

  std::vector<BigInt> best(n_max + 1, 0);
  std::vector<std::string> best_word(n_max + 1);
  automata::for_each_accepted(psi.language, n_max, [&](std::span<const Code> cols) {
    const ConvolutionString w(psi.language.alphabet(), std::vector<Code>(cols.begin(), cols.end()));
    const TowerBound v = psi.decode(w);
    if (!v.is_exact()) throw Error(ErrorCode::Budget, "symbolic value in an (N;+) presentation");
    if (v.value() > best[w.size()] || best_word[w.size()].empty()) {
      best[w.size()] = v.value();
      best_word[w.size()] = w.to_string();
    }
    return true;
  });
  BigInt running = 0;
  std::string running_word;
  const BigInt mu = psi.mu;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (!best_word[n].empty() && (running_word.empty() || best[n] > running)) {
      running = best[n];
      running_word = best_word[n];
    }
    const BigInt bound = boost::multiprecision::pow(mu, static_cast<unsigned>(r.c + 1 + n));
    const bool pass = running <= bound;
    r.rows.push_back({n, running, bound, pass});
    if (!pass && r.passed) {
      r.passed = false;
      r.witness = running_word;
    }
  }
  return r;
}

IncompressReport incompressibility_check(const Presentation& psi, const Presentation& psi0, std::size_t n_max,
                                         std::size_t k_max, std::size_t n_check) {
  if (!psi.addition || !psi0.addition)
    throw Error(ErrorCode::InvalidArgument, "both presentations need addition automata");
  if (!psi0.doubling || !psi0.canonical_length)
    throw Error(ErrorCode::InvalidArgument, psi0.name + " needs a doubling automaton and an encoder");
  IncompressReport r;
  r.c0 = psi0.doubling->state_count();
  r.mu = psi.mu;
  r.c = automata::functional_gap_bound(*psi.addition, 2, n_check);

  auto len0 = [&](const BigInt& x) {
    return static_cast<std::size_t>(psi0.canonical_length(TowerBound::exact(x)).value());
  };
  r.d0p = len0(1);
  for (std::size_t k = 0; k <= k_max + 1; ++k) r.power_lengths.push_back(len0(pow2(k)));
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (r.power_lengths[k + 1] > r.power_lengths[k] + r.c0) {
      r.gaps_pass = false;
      if (r.witness.empty()) r.witness = "|v_" + std::to_string(k + 1) + "| - |v_" + std::to_string(k) + "| > c0";
    }
  }
  // max over x < y < 2^10 of |rep x| - |rep y|
  std::size_t prefix_max = 0;
  for (unsigned y = 0; y < 1024; ++y) {
    const std::size_t ly = len0(y);
    if (y > 0 && prefix_max > ly) r.d0pp = std::max(r.d0pp, prefix_max - ly);
    prefix_max = std::max(prefix_max, ly);
  }
  r.slope = r.c0 * std::max<std::size_t>(1, ceil_log2(r.mu));
  r.intercept = r.slope * (r.c + 1) + r.d0p + r.d0pp;

  const Strategy strategy = psi.max_value && psi0.length_monotone ? Strategy::ValueMax : Strategy::Exhaustive;
  r.passed = r.gaps_pass;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const CompressProfile prof = s_of_n(n, psi, psi0, strategy);
    const BigInt bound = BigInt(r.slope) * n + r.intercept;
    const bool pass = prof.s_value.is_exact() && prof.s_value.value() <= bound && !prof.budget_exhausted;
    r.rows.push_back({n, prof.s_value, bound, pass});
    if (!pass && r.passed) {
      r.passed = false;
      r.witness = "n=" + std::to_string(n) + (prof.witnesses.empty() ? "" : " w=" + prof.witnesses.front().word);
    }
  }
  r.passed = r.passed && r.gaps_pass;
  return r;
}

}  // namespace fapres::comprate
