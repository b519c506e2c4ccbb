#include "fapres/groups.hpp"

#include "fapres/error.hpp"

#include <algorithm>

namespace fapres::apps {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string gen_name(const GroupSpec& g, unsigned i) {
  switch (g.family) {
    case Family::FreeAbelian:
      return g.m == 1 ? "a" : "a" + std::to_string(i);
    case Family::Free:
      return "a" + std::to_string(i);
    case Family::BaumslagSolitar:
      return i == 1 ? "a" : "t";
    case Family::Semidirect:
      return i == 1 ? "a" : "b" + std::to_string(i - 1);
  }
  return "?";
}

unsigned gen_count(const GroupSpec& g) {
  switch (g.family) {
    case Family::FreeAbelian:
    case Family::Free:
      return g.m;
    case Family::BaumslagSolitar:
      return 2;
    case Family::Semidirect:
      return 3;
  }
  return 0;
}

std::string inverse_name(const std::string& gen) { return gen + "^-1"; }

// (generator index, sign) of a generator token, or {0, 0}.
std::pair<unsigned, int> parse_gen(const GroupSpec& g, const std::string& token) {
  for (unsigned i = 1; i <= gen_count(g); ++i) {
    const std::string name = gen_name(g, i);
    if (token == name) return {i, 1};
    if (token == inverse_name(name)) return {i, -1};
  }
  return {0, 0};
}

void check_spec(const GroupSpec& g) {
  switch (g.family) {
    case Family::FreeAbelian:
    case Family::Free:
      if (g.m < 1 || g.m > 64) throw Error(ErrorCode::InvalidArgument, "rank must be between 1 and 64");
      break;
    case Family::BaumslagSolitar:
      if (g.p < 1 || g.p >= g.q) throw Error(ErrorCode::InvalidArgument, "BS(p,q) needs 1 <= p < q");
      break;
    case Family::Semidirect: {
      const long det = g.A[0] * g.A[3] - g.A[1] * g.A[2];
      if (det != 1 && det != -1) throw Error(ErrorCode::InvalidArgument, "A must have determinant 1 or -1");
      break;
    }
  }
}

template <typename T>
const T& expect(const GroupSpec& g, const GroupElement& x) {
  const T* p = std::get_if<T>(&x);
  if (!p) throw Error(ErrorCode::InvalidArgument, "element does not belong to " + g.name());
  return *p;
}

void append_run(Tokens& out, const std::string& token, const BigInt& count) {
  if (count > kMaxExpandedRun) throw Error(ErrorCode::Budget, "run of " + count.str() + " symbols is too long to write");
  out.insert(out.end(), static_cast<std::size_t>(count), token);
}

std::vector<std::uint32_t> digits_lsb(BigInt n, unsigned base) {
  std::vector<std::uint32_t> d;
  while (n > 0) {
    d.push_back(static_cast<std::uint32_t>(static_cast<unsigned>(n % base)));
    n /= base;
  }
  return d;
}

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

Tokens bs_tail(const GroupSpec& g, const BigInt& m) {
  Tokens out;
  if (m < 0) out.push_back("-");
  for (auto d : digits_lsb(abs_big(m), g.q)) out.push_back(std::to_string(d));
  return out;
}

Tokens lattice_tokens(const BigInt& z1, const BigInt& z2) {
  Tokens out;
  if (z1 == 0 && z2 == 0) return out;
  out.push_back(std::string("(") + (z1 < 0 ? "-" : "+") + "," + (z2 < 0 ? "-" : "+") + ")");
  const auto b1 = digits_lsb(abs_big(z1), 2), b2 = digits_lsb(abs_big(z2), 2);
  for (std::size_t i = 0; i < std::max(b1.size(), b2.size()); ++i)
    out.push_back("(" + std::to_string(i < b1.size() ? b1[i] : 0) + "," + std::to_string(i < b2.size() ? b2[i] : 0) +
                  ")");
  return out;
}

std::size_t lattice_length(const BigInt& z1, const BigInt& z2) {
  if (z1 == 0 && z2 == 0) return 0;
  return 1 + std::max(bit_length(abs_big(z1)), bit_length(abs_big(z2)));
}

void parse_lattice(std::span<const std::string> w, BigInt& z1, BigInt& z2) {
  z1 = z2 = 0;
  if (w.empty()) return;
  auto bad = [] { return Error(ErrorCode::Malformed, "bad lattice part"); };
  const std::string& s = w[0];
  if (s.size() != 5 || s[0] != '(' || s[2] != ',' || s[4] != ')') throw bad();
  const char s1 = s[1], s2 = s[3];
  if ((s1 != '+' && s1 != '-') || (s2 != '+' && s2 != '-')) throw bad();
  if (w.size() < 2) throw bad();
  BigInt place = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const std::string& c = w[i];
    if (c.size() != 5 || c[0] != '(' || c[2] != ',' || c[4] != ')') throw bad();
    if ((c[1] != '0' && c[1] != '1') || (c[3] != '0' && c[3] != '1')) throw bad();
    if (c[1] == '1') z1 += place;
    if (c[3] == '1') z2 += place;
    place <<= 1;
  }
  if (w.back() == "(0,0)") throw bad();
  if ((z1 == 0 && s1 == '-') || (z2 == 0 && s2 == '-')) throw Error(ErrorCode::Malformed, "zero with a minus sign");
  if (s1 == '-') z1 = -z1;
  if (s2 == '-') z2 = -z2;
}

// The run x^k at the front of the standard string, k >= 0, and what follows.
// nullopt for negative runs, which the compressed encoding leaves alone.
std::optional<GroupSplit> run_split(const GroupSpec& g, const GroupElement& x) {
  switch (g.family) {
    case Family::FreeAbelian: {
      const auto& e = expect<FreeAbelianNF>(g, x);
      if (e.k[0] < 0) return std::nullopt;
      FreeAbelianNF tail = e;
      tail.k[0] = 0;
      return GroupSplit{e.k[0], group_encode_std(g, tail)};
    }
    case Family::Free: {
      const auto& e = expect<FreeNF>(g, x);
      if (!e.word.empty() && e.word[0] == Letter{1, -1}) return std::nullopt;
      std::size_t k = 0;
      while (k < e.word.size() && e.word[k] == Letter{1, 1}) ++k;
      FreeNF tail{std::vector<Letter>(e.word.begin() + static_cast<std::ptrdiff_t>(k), e.word.end())};
      return GroupSplit{k, group_encode_std(g, tail)};
    }
    case Family::BaumslagSolitar: {
      const auto& e = expect<BsNF>(g, x);
      std::size_t k = 0;
      while (k < e.factors.size() && e.factors[k] == BsFactor{0, 1}) ++k;
      BsNF tail{std::vector<BsFactor>(e.factors.begin() + static_cast<std::ptrdiff_t>(k), e.factors.end()), e.m};
      return GroupSplit{k, group_encode_std(g, tail)};
    }
    case Family::Semidirect: {
      const auto& e = expect<SemidirectNF>(g, x);
      if (e.k < 0) return std::nullopt;
      return GroupSplit{e.k, lattice_tokens(e.z1, e.z2)};
    }
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::FreeAbelian: return "free-abelian";
    case Family::Free: return "free";
    case Family::BaumslagSolitar: return "bs";
    case Family::Semidirect: return "semidirect";
  }
  return "?";
}

GroupSpec GroupSpec::free_abelian(unsigned m) {
  GroupSpec g;
  g.family = Family::FreeAbelian;
  g.m = m;
  check_spec(g);
  return g;
}

GroupSpec GroupSpec::free(unsigned m) {
  GroupSpec g;
  g.family = Family::Free;
  g.m = m;
  check_spec(g);
  return g;
}

GroupSpec GroupSpec::baumslag_solitar(unsigned p, unsigned q) {
  GroupSpec g;
  g.family = Family::BaumslagSolitar;
  g.p = p;
  g.q = q;
  check_spec(g);
  return g;
}

GroupSpec GroupSpec::semidirect(long a11, long a12, long a21, long a22) {
  GroupSpec g;
  g.family = Family::Semidirect;
  g.A = {a11, a12, a21, a22};
  check_spec(g);
  return g;
}

GroupSpec GroupSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string family(text.substr(0, colon));
  std::vector<long> args;
  if (colon != std::string_view::npos) {
    std::string rest(text.substr(colon + 1));
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const std::size_t comma = std::min(rest.find(',', pos), rest.size());
      const std::string item = rest.substr(pos, comma - pos);
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (item.empty() || used != item.size())
        throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in group '" + std::string(text) + "'");
      args.push_back(v);
      pos = comma + 1;
    }
  }
  const auto arity = [&](std::size_t n) {
    if (args.size() != n)
      throw Error(ErrorCode::InvalidArgument,
                  "group '" + std::string(text) + "' needs " + std::to_string(n) + " parameters");
    for (std::size_t i = 0; family != "semidirect" && i < n; ++i)
      if (args[i] < 1) throw Error(ErrorCode::InvalidArgument, "group parameters must be positive");
  };
  if (family == "free-abelian") return arity(1), free_abelian(static_cast<unsigned>(args[0]));
  if (family == "free") return arity(1), free(static_cast<unsigned>(args[0]));
  if (family == "bs") return arity(2), baumslag_solitar(static_cast<unsigned>(args[0]), static_cast<unsigned>(args[1]));
  if (family == "semidirect") return arity(4), semidirect(args[0], args[1], args[2], args[3]);
  throw Error(ErrorCode::NotFound, "unknown group family '" + family + "'");
}

std::string GroupSpec::name() const {
  switch (family) {
    case Family::FreeAbelian: return m == 1 ? "Z" : "Z^" + std::to_string(m);
    case Family::Free: return "F_" + std::to_string(m);
    case Family::BaumslagSolitar: return "BS(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Family::Semidirect:
      return "Z^2 x_A Z, A = [" + std::to_string(A[0]) + " " + std::to_string(A[1]) + "; " + std::to_string(A[2]) +
             " " + std::to_string(A[3]) + "]";
  }
  return "?";
}

Tokens GroupSpec::generators() const {
  Tokens out;
  for (unsigned i = 1; i <= gen_count(*this); ++i) out.push_back(gen_name(*this, i));
  for (unsigned i = 1; i <= gen_count(*this); ++i) out.push_back(inverse_name(gen_name(*this, i)));
  return out;
}

std::string GroupSpec::run_symbol() const {
  return family == Family::BaumslagSolitar ? "t" : gen_name(*this, 1);
}

GroupElement group_identity(const GroupSpec& g) {
  check_spec(g);
  switch (g.family) {
    case Family::FreeAbelian: return FreeAbelianNF{std::vector<BigInt>(g.m, 0)};
    case Family::Free: return FreeNF{};
    case Family::BaumslagSolitar: return BsNF{};
    case Family::Semidirect: return SemidirectNF{};
  }
  return FreeNF{};
}

void validate(const GroupSpec& g, const GroupElement& x) {
  check_spec(g);
  switch (g.family) {
    case Family::FreeAbelian:
      if (expect<FreeAbelianNF>(g, x).k.size() != g.m) throw Error(ErrorCode::Malformed, "wrong number of exponents");
      return;
    case Family::Free: {
      const auto& w = expect<FreeNF>(g, x).word;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].gen < 1 || w[i].gen > g.m || (w[i].sign != 1 && w[i].sign != -1))
          throw Error(ErrorCode::Malformed, "bad letter");
        if (i > 0 && w[i].gen == w[i - 1].gen && w[i].sign == -w[i - 1].sign)
          throw Error(ErrorCode::Malformed, "word is not reduced");
      }
      return;
    }
    case Family::BaumslagSolitar: {
      const auto& f = expect<BsNF>(g, x).factors;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].eps != 1 && f[i].eps != -1) throw Error(ErrorCode::Malformed, "t exponent must be 1 or -1");
        if (f[i].power >= (f[i].eps == 1 ? g.q : g.p))
          throw Error(ErrorCode::Malformed, "factor a^" + std::to_string(f[i].power) + " out of range");
        if (i > 0 && f[i].power == 0 && f[i].eps == -f[i - 1].eps)
          throw Error(ErrorCode::Malformed, "t and t^-1 cancel");
      }
      return;
    }
    case Family::Semidirect:
      expect<SemidirectNF>(g, x);
      return;
  }
}

GroupElement group_act(const GroupSpec& g, const GroupElement& x, const std::string& generator) {
  const auto [gen, sign] = parse_gen(g, generator);
  if (gen == 0) throw Error(ErrorCode::InvalidArgument, "'" + generator + "' is not a generator of " + g.name());
  switch (g.family) {
    case Family::FreeAbelian: {
      FreeAbelianNF e = expect<FreeAbelianNF>(g, x);
      e.k[gen - 1] += sign;
      return e;
    }
    case Family::Free: {
      FreeNF e = expect<FreeNF>(g, x);
      if (!e.word.empty() && e.word.back() == Letter{gen, -sign})
        e.word.pop_back();
      else
        e.word.push_back({gen, sign});
      return e;
    }
    case Family::BaumslagSolitar: {
      BsNF e = expect<BsNF>(g, x);
      if (gen == 1) {
        e.m += sign;
        return e;
      }
      // a^q t = t a^p and a^p t^-1 = t^-1 a^q
      const unsigned below = sign == 1 ? g.q : g.p;  // rewritten through t^sign
      const unsigned above = sign == 1 ? g.p : g.q;
      const BigInt s = floor_div(e.m, below);
      const unsigned r = static_cast<unsigned>(e.m - s * below);
      if (r == 0 && !e.factors.empty() && e.factors.back().eps == -sign) {
        const unsigned j = e.factors.back().power;
        e.factors.pop_back();
        e.m = j + s * above;
      } else {
        e.factors.push_back({r, sign});
        e.m = s * above;
      }
      return e;
    }
    case Family::Semidirect: {
      SemidirectNF e = expect<SemidirectNF>(g, x);
      if (gen == 2) {
        e.z1 += sign;
      } else if (gen == 3) {
        e.z2 += sign;
      } else {
        const auto& A = g.A;
        const long det = A[0] * A[3] - A[1] * A[2];
        BigInt n1, n2;
        if (sign == 1) {
          n1 = A[0] * e.z1 + A[1] * e.z2;
          n2 = A[2] * e.z1 + A[3] * e.z2;
        } else {
          n1 = det * (A[3] * e.z1 - A[1] * e.z2);
          n2 = det * (-A[2] * e.z1 + A[0] * e.z2);
        }
        e.z1 = n1;
        e.z2 = n2;
        e.k += sign;
      }
      return e;
    }
  }
  return x;
}

GroupElement group_eval(const GroupSpec& g, std::span<const std::string> word) {
  GroupElement x = group_identity(g);
  for (const std::string& t : word) x = group_act(g, x, t);
  return x;
}

Tokens group_encode_std(const GroupSpec& g, const GroupElement& x) {
  validate(g, x);
  Tokens out;
  switch (g.family) {
    case Family::FreeAbelian: {
      const auto& e = std::get<FreeAbelianNF>(x);
      BigInt total = 0;
      for (const auto& k : e.k) total += abs_big(k);
      if (total > kMaxExpandedRun) throw Error(ErrorCode::Budget, "standard string too long to write");
      for (unsigned i = 0; i < g.m; ++i) {
        const std::string name = gen_name(g, i + 1);
        append_run(out, e.k[i] < 0 ? inverse_name(name) : name, abs_big(e.k[i]));
      }
      break;
    }
    case Family::Free:
      for (const Letter& l : std::get<FreeNF>(x).word)
        out.push_back(l.sign == 1 ? gen_name(g, l.gen) : inverse_name(gen_name(g, l.gen)));
      break;
    case Family::BaumslagSolitar: {
      const auto& e = std::get<BsNF>(x);
      for (const BsFactor& f : e.factors) {
        out.insert(out.end(), f.power, "a");
        out.push_back(f.eps == 1 ? "t" : "t^-1");
      }
      const Tokens tail = bs_tail(g, e.m);
      out.insert(out.end(), tail.begin(), tail.end());
      break;
    }
    case Family::Semidirect: {
      const auto& e = std::get<SemidirectNF>(x);
      append_run(out, e.k < 0 ? "a^-1" : "a", abs_big(e.k));
      const Tokens v = lattice_tokens(e.z1, e.z2);
      out.insert(out.end(), v.begin(), v.end());
      break;
    }
  }
  return out;
}

BigInt group_std_length(const GroupSpec& g, const GroupElement& x) {
  validate(g, x);
  switch (g.family) {
    case Family::FreeAbelian: {
      BigInt total = 0;
      for (const auto& k : std::get<FreeAbelianNF>(x).k) total += abs_big(k);
      return total;
    }
    case Family::Free:
      return std::get<FreeNF>(x).word.size();
    case Family::BaumslagSolitar: {
      const auto& e = std::get<BsNF>(x);
      BigInt total = e.m < 0 ? 1 : 0;
      for (const BsFactor& f : e.factors) total += f.power + 1;
      BigInt rest = abs_big(e.m);
      while (rest > 0) {
        ++total;
        rest /= g.q;
      }
      return total;
    }
    case Family::Semidirect: {
      const auto& e = std::get<SemidirectNF>(x);
      return abs_big(e.k) + lattice_length(e.z1, e.z2);
    }
  }
  return 0;
}

GroupElement group_decode_std(const GroupSpec& g, std::span<const std::string> w) {
  check_spec(g);
  switch (g.family) {
    case Family::FreeAbelian: {
      FreeAbelianNF e{std::vector<BigInt>(g.m, 0)};
      unsigned current = 0;
      int current_sign = 0;
      for (const std::string& t : w) {
        const auto [gen, sign] = parse_gen(g, t);
        if (gen == 0) throw Error(ErrorCode::Malformed, "unknown symbol '" + t + "'");
        if (gen < current || (gen == current && sign != current_sign))
          throw Error(ErrorCode::Malformed, "generators out of order at '" + t + "'");
        current = gen;
        current_sign = sign;
        e.k[gen - 1] += sign;
      }
      return e;
    }
    case Family::Free: {
      FreeNF e;
      for (const std::string& t : w) {
        const auto [gen, sign] = parse_gen(g, t);
        if (gen == 0) throw Error(ErrorCode::Malformed, "unknown symbol '" + t + "'");
        e.word.push_back({gen, sign});
      }
      validate(g, e);
      return e;
    }
    case Family::BaumslagSolitar: {
      BsNF e;
      std::size_t i = 0;
      std::size_t last_t = 0;
      for (std::size_t j = 0; j < w.size(); ++j)
        if (w[j] == "t" || w[j] == "t^-1") last_t = j + 1;
      unsigned pending = 0;
      for (; i < last_t; ++i) {
        if (w[i] == "a") {
          if (++pending >= g.q) throw Error(ErrorCode::Malformed, "factor too long");
        } else if (w[i] == "t" || w[i] == "t^-1") {
          e.factors.push_back({pending, w[i] == "t" ? 1 : -1});
          pending = 0;
        } else {
          throw Error(ErrorCode::Malformed, "unexpected '" + w[i] + "' before the last t");
        }
      }
      const auto tail = w.subspan(last_t);
      bool negative = false;
      std::size_t start = 0;
      if (!tail.empty() && tail[0] == "-") {
        negative = true;
        start = 1;
        if (tail.size() == 1) throw Error(ErrorCode::Malformed, "sign without digits");
      }
      BigInt place = 1;
      for (std::size_t j = start; j < tail.size(); ++j) {
        const std::string& d = tail[j];
        unsigned v = 0;
        if (d.empty() || d.size() > 4 || !std::all_of(d.begin(), d.end(), ::isdigit) || (d.size() > 1 && d[0] == '0'))
          throw Error(ErrorCode::Malformed, "unexpected '" + d + "' in the q-ary tail");
        v = static_cast<unsigned>(std::stoul(d));
        if (v >= g.q) throw Error(ErrorCode::Malformed, "digit " + d + " out of range");
        e.m += place * v;
        place *= g.q;
      }
      if (tail.size() > start && tail.back() == "0") throw Error(ErrorCode::Malformed, "trailing zero digit");
      if (negative) e.m = -e.m;
      validate(g, e);
      return e;
    }
    case Family::Semidirect: {
      SemidirectNF e;
      std::size_t i = 0;
      if (!w.empty() && (w[0] == "a" || w[0] == "a^-1")) {
        const std::string run = w[0];
        while (i < w.size() && w[i] == run) ++i;
        e.k = run == "a" ? BigInt(i) : -BigInt(i);
      }
      parse_lattice(w.subspan(i), e.z1, e.z2);
      return e;
    }
  }
  throw Error(ErrorCode::Internal, "unknown family");
}

Tokens group_encode_compressed(const GroupSpec& g, const GroupElement& x) {
  validate(g, x);
  const auto split = run_split(g, x);
  if (!split) return group_encode_std(g, x);
  Tokens out = tower_tokens(split->k);
  out.insert(out.end(), split->rest.begin(), split->rest.end());
  return out;
}

GroupSplit group_decode_split(const GroupSpec& g, std::span<const std::string> w) {
  check_spec(g);
  const std::string run = g.run_symbol();
  if (w.empty() || !is_tower_token(w[0])) {
    if (g.family == Family::BaumslagSolitar) throw Error(ErrorCode::Malformed, "missing tower prefix");
    if (w.empty() || w[0] != inverse_name(run))
      throw Error(ErrorCode::Malformed, "expected a tower prefix or a negative run of " + run);
    group_decode_std(g, w);
    return GroupSplit{0, Tokens(w.begin(), w.end())};
  }
  auto [k, used] = read_tower_prefix(w);
  GroupSplit out{std::move(k), Tokens(w.begin() + static_cast<std::ptrdiff_t>(used), w.end())};
  if (!out.rest.empty()) {
    const std::string& first = out.rest.front();
    if (first == run) throw Error(ErrorCode::Malformed, "the run of " + run + " must be folded into the prefix");
    if (g.family != Family::BaumslagSolitar && first == inverse_name(run))
      throw Error(ErrorCode::Malformed, "negative runs are written without a prefix");
  }
  // validity of x^k rest only depends on whether k is zero
  Tokens probe;
  if (out.k > 0) probe.push_back(run);
  probe.insert(probe.end(), out.rest.begin(), out.rest.end());
  group_decode_std(g, probe);
  return out;
}

GroupElement group_decode_compressed(const GroupSpec& g, std::span<const std::string> w, std::uint64_t max_run) {
  const GroupSplit split = group_decode_split(g, w);
  if (w.empty() || !is_tower_token(w[0])) return group_decode_std(g, w);
  switch (g.family) {
    case Family::FreeAbelian: {
      auto e = std::get<FreeAbelianNF>(group_decode_std(g, split.rest));
      e.k[0] = split.k;
      return e;
    }
    case Family::Semidirect: {
      auto e = std::get<SemidirectNF>(group_decode_std(g, split.rest));
      e.k = split.k;
      return e;
    }
    case Family::Free:
    case Family::BaumslagSolitar: {
      if (split.k > max_run) throw Error(ErrorCode::Budget, "run of " + split.k.str() + " is too long to expand");
      Tokens full(static_cast<std::size_t>(split.k), g.run_symbol());
      full.insert(full.end(), split.rest.begin(), split.rest.end());
      return group_decode_std(g, full);
    }
  }
  throw Error(ErrorCode::Internal, "unknown family");
}

GroupRate group_s_lower(const GroupSpec& g, std::size_t n, const towerpres::OrbitWalker* walker,
                        std::size_t enumerate_limit) {
  check_spec(g);
  if (n == 0) return {towerpres::TowerBound::exact(0), true, {}};
  const towerpres::RBound r = towerpres::r_best(n, walker, enumerate_limit);
  GroupRate out{r.value, r.exact, {}};
  if (r.witness) {
    const automata::ConvolutionString u = towerpres::encode_tuple(*r.witness);
    for (automata::Code c : u.columns()) out.witness.push_back("<" + u.alphabet()->name(c) + ">");
  }
  return out;
}

}  // namespace fapres::apps
