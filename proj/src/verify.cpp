#include "fapres/verify.hpp"

#include "fapres/comprate.hpp"
#include "fapres/error.hpp"
#include "fapres/groups.hpp"
#include "fapres/turing.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <unordered_set>

namespace fapres::verify {

using automata::Code;
using automata::ConvolutionString;
using automata::Dfa;
using towerpres::OrbitWalker;
using towerpres::TowerBound;
using towerpres::TupleV;

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

// Collects failures; the first one becomes the reported witness.
class Checker {
 public:
  explicit Checker(std::string name) { result_.name = std::move(name); }

  bool expect(bool ok, const std::string& witness) {
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.detail = witness;
    }
    if (!ok) ++failures_;
    return ok;
  }
  template <class F>
  bool expect_lazy(bool ok, F witness) {
    return ok ? true : expect(false, witness());
  }
  bool failed() const { return !result_.passed; }

  CheckResult done(const std::string& summary) {
    if (result_.passed)
      result_.detail = summary;
    else if (failures_ > 1)
      result_.detail += " (" + std::to_string(failures_) + " failures)";
    return result_;
  }

 private:
  CheckResult result_;
  std::uint64_t failures_ = 0;
};

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return CheckResult{name, false, std::string("exception: ") + e.what()};
  }
}

TupleV power_tuple(unsigned m) { return TupleV{0, BigInt(1) << m, 0, 1}; }
TupleV level_tuple(unsigned a) { return TupleV{a, 1, 0, 0}; }

bool is_power_tuple(const TupleV& v) {
  return v.a == 0 && v.c_exp == 0 && v.d == 1 && v.b > 0 && (v.b & (v.b - 1)) == 0;
}

std::uint64_t to_u64(const BigInt& x) { return x.convert_to<std::uint64_t>(); }

std::string show(const TowerBound& t) { return t.to_string(); }

}  // namespace

CheckResult check_golden_chain() {
  return guarded("23-step chain", [] {
    // (a, b, c, d) with c as a number, and the rule producing it
    static const int chain[23][5] = {
        {0, 0, 1, 0, 6}, {0, 1, 1, 1, 3}, {0, 1, 1, 0, 6}, {0, 2, 1, 1, 3}, {1, 0, 2, 1, 5}, {1, 1, 1, 1, 4},
        {1, 1, 1, 0, 6}, {1, 0, 2, 0, 1}, {0, 2, 1, 0, 2}, {0, 3, 1, 1, 3}, {0, 3, 1, 0, 6}, {0, 4, 1, 1, 3},
        {1, 0, 4, 1, 5}, {1, 1, 2, 1, 4}, {1, 2, 1, 1, 4}, {2, 0, 2, 1, 5}, {2, 1, 1, 1, 4}, {2, 1, 1, 0, 6},
        {2, 0, 2, 0, 1}, {1, 2, 1, 0, 2}, {1, 1, 2, 0, 1}, {1, 0, 4, 0, 1}, {0, 4, 1, 0, 2},
    };
    Checker ck("23-step chain");
    TupleV v = towerpres::origin();
    for (int i = 0; i < 23; ++i) {
      const auto [next, rule] = towerpres::apply_f(v);
      BigInt c = BigInt(1) << static_cast<unsigned>(next.c_exp);
      const bool same = next.a == chain[i][0] && next.b == chain[i][1] && c == chain[i][2] && next.d == chain[i][3] &&
                        rule == chain[i][4];
      ck.expect_lazy(same, [&] { return "step " + std::to_string(i + 1) + " gives " + next.to_string(); });
      v = next;
    }
    return ck.done("23 steps end at " + v.to_string());
  });
}

CheckResult check_closure_injectivity(unsigned ab_max, unsigned c_exp_max) {
  const std::string name = "closure and injectivity";
  return guarded(name, [&] {
    Checker ck(name);
    std::map<TupleV, TupleV> preimage;
    std::uint64_t count = 0;
    for (unsigned a = 0; a <= ab_max; ++a)
      for (unsigned b = 0; b <= ab_max; ++b)
        for (unsigned e = 0; e <= c_exp_max; ++e)
          for (int d = 0; d <= 1; ++d) {
            const TupleV v{a, b, e, d};
            if (!towerpres::in_V(v)) continue;
            ++count;
            const auto g = towerpres::rule_guards(v);
            ck.expect_lazy(std::count(g.begin(), g.end(), true) == 1,
                           [&] { return "guards not exclusive at " + v.to_compact(); });
            const TupleV w = towerpres::apply_f(v).first;
            ck.expect_lazy(towerpres::in_V(w), [&] { return "f leaves V at " + v.to_compact(); });
            const auto [it, fresh] = preimage.emplace(w, v);
            ck.expect_lazy(fresh, [&] {
              return "f(" + v.to_compact() + ") = f(" + it->second.to_compact() + ") = " + w.to_compact();
            });
            ck.expect_lazy(towerpres::apply_f_inverse(w) == v, [&] { return "inverse fails at " + v.to_compact(); });
          }
    return ck.done(std::to_string(count) + " tuples with a,b <= " + std::to_string(ab_max) +
                   ", c_exp <= " + std::to_string(c_exp_max));
  });
}

CheckResult check_power_cycles(std::span<const unsigned> ms) {
  const std::string name = "power cycles (0,2^m,1,1) -> (0,2^(m+1),1,1)";
  return guarded(name, [&] {
    Checker ck(name);
    std::ostringstream summary;
    for (unsigned m : ms) {
      const BigInt predicted = towerpres::cycle_length(m);
      const TupleV target = power_tuple(m + 1);
      TupleV v = power_tuple(m);
      std::uint64_t steps = 0;
      const std::uint64_t cap = to_u64(predicted) + 1;
      while (steps < cap && v != target) {
        towerpres::step_f(v);
        ++steps;
        if (is_power_tuple(v) && v != target) break;
      }
      ck.expect_lazy(v == target && steps == predicted, [&] {
        return "m=" + std::to_string(m) + ": walked " + std::to_string(steps) + " steps to " + v.to_compact() +
               ", closed form " + predicted.str();
      });
      summary << (summary.tellp() ? " " : "") << "m=" << m << ":" << steps;
    }
    return ck.done(summary.str());
  });
}

CheckResult check_power_to_level(std::span<const unsigned> ms) {
  const std::string name = "(0,T(a),1,1) reaches (a,1,1,0)";
  return guarded(name, [&] {
    Checker ck(name);
    std::ostringstream summary;
    for (unsigned m : ms) {
      // 2^m = T(a)
      unsigned a = 0;
      BigInt t = 1;
      while (t < (BigInt(1) << m)) {
        t = BigInt(1) << static_cast<unsigned>(t);
        ++a;
      }
      if (t != BigInt(1) << m) throw Error(ErrorCode::InvalidArgument, "2^" + std::to_string(m) + " is not a tower value");
      const TupleV target = level_tuple(a);
      const BigInt predicted = towerpres::orbit_index_fast(target).value() - towerpres::power_milestone_index(m);
      TupleV v = power_tuple(m);
      std::uint64_t steps = 0;
      const std::uint64_t cap = to_u64(towerpres::cycle_length(m));
      while (steps < cap && v != target) {
        towerpres::step_f(v);
        ++steps;
      }
      ck.expect_lazy(v == target && steps == predicted, [&] {
        return "m=" + std::to_string(m) + ": stopped at " + v.to_compact() + " after " + std::to_string(steps) +
               " steps, closed form " + predicted.str();
      });
      summary << (summary.tellp() ? " " : "") << "m=" << m << "->a=" << a << ":" << steps;
    }
    return ck.done(summary.str());
  });
}

CheckResult check_base_path(const OrbitWalker& walker) {
  const std::string name = "base path and level milestones";
  return guarded(name, [&] {
    Checker ck(name);
    const TupleV path[] = {{0, 1, 0, 0}, {0, 2, 0, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 0, 0}};
    for (std::uint64_t i = 0; i < 5; ++i) {
      const auto at = walker.index_of(path[i]);
      ck.expect_lazy(at == 3 + i, [&] {
        return path[i].to_string() + " at " + (at ? std::to_string(*at) : "unseen") + ", expected " +
               std::to_string(3 + i);
      });
    }
    std::uint64_t expect_m = 0, prev = 0;
    for (const auto& ms : walker.milestones()) {
      if (ms.kind != towerpres::Milestone::Kind::Level) continue;
      ck.expect_lazy(ms.m == expect_m && (expect_m == 0 || ms.index > prev),
                     [&] { return "level " + std::to_string(ms.m) + " out of order at " + std::to_string(ms.index); });
      // every step between consecutive levels keeps a >= m, so no level repeats
      prev = ms.index;
      ++expect_m;
    }
    ck.expect(expect_m >= 2, "fewer than two level milestones within the budget");
    return ck.done("indices 3..7, levels 0.." + std::to_string(expect_m - 1) + " in order");
  });
}

CheckResult check_power_reachability(std::uint64_t seed, std::size_t starts) {
  const std::string name = "random starts reach (0,2^m,1,1)";
  return guarded(name, [&] {
    Checker ck(name);
    std::mt19937_64 rng(seed);
    const std::uint64_t cap = 200'000;
    std::uint64_t total = 0, tried = 0;
    std::size_t done = 0;
    while (done < starts && tried < 100 * starts) {
      ++tried;
      const TupleV v{BigInt(rng() % 4), BigInt(rng() % 33), BigInt(rng() % 5), static_cast<int>(rng() % 2)};
      if (!towerpres::in_V(v)) continue;
      const TowerBound at = towerpres::orbit_index_fast(v);
      if (!at.is_exact() || at.value() > cap * std::uint64_t{1024}) continue;
      const BigInt& idx = at.value();
      unsigned m = 0;
      while (towerpres::power_milestone_index(m) < idx) ++m;
      const BigInt predicted = towerpres::power_milestone_index(m) - idx;
      if (predicted > cap) continue;
      TupleV w = v;
      std::uint64_t steps = 0;
      while (!is_power_tuple(w) && steps <= cap) {
        towerpres::step_f(w);
        ++steps;
      }
      ck.expect_lazy(w == power_tuple(m) && steps == predicted, [&] {
        return v.to_compact() + " reached " + w.to_compact() + " after " + std::to_string(steps) +
               " steps, closed form 2^" + std::to_string(m) + " after " + predicted.str();
      });
      total += steps;
      ++done;
    }
    ck.expect(done == starts, "only " + std::to_string(done) + " usable starts");
    return ck.done(std::to_string(done) + " starts, " + std::to_string(total) + " steps");
  });
}

CheckResult check_fast_forward(const OrbitWalker& walker) {
  const std::string name = "closed-form index at milestones";
  return guarded(name, [&] {
    Checker ck(name);
    for (const auto& ms : walker.milestones()) {
      const TowerBound fast = towerpres::orbit_index_fast(ms.tuple());
      ck.expect_lazy(fast == TowerBound::exact(ms.index), [&] {
        return ms.tuple().to_string() + ": walked " + std::to_string(ms.index) + ", closed form " + show(fast);
      });
    }
    const TowerBound i23 = towerpres::orbit_index_fast(TupleV{0, 4, 0, 0});
    ck.expect(i23 == TowerBound::exact(23), "(0,4,1,0) gives " + show(i23));
    return ck.done(std::to_string(walker.milestones().size()) + " milestones within " +
                   std::to_string(walker.index()) + " steps; (0,4,1,0) -> 23");
  });
}

CheckResult check_r_monotone(const OrbitWalker& walker, std::size_t n_max) {
  const std::string name = "r_lower nondecreasing";
  return guarded(name, [&] {
    Checker ck(name);
    std::ostringstream row;
    for (std::size_t n = 0; n <= n_max; ++n) {
      const TowerBound a = towerpres::r_lower(n, walker).value, b = towerpres::r_lower(n + 1, walker).value;
      ck.expect_lazy(towerpres::tower_compare(a, b) != towerpres::Ordering::Greater,
                     [&] { return "r_lower(" + std::to_string(n) + ") > r_lower(" + std::to_string(n + 1) + ")"; });
      row << (n ? " " : "") << show(a);
    }
    return ck.done(row.str());
  });
}

namespace {

// in_V of the tuple spelled by the four tracks, read directly from the bits
bool oracle_in_L(const ConvolutionString& w) {
  if (w.empty()) return false;
  const auto tracks = automata::deconvolve_chars(w);
  BigInt x[4];
  for (int t = 0; t < 4; ++t) {
    const auto v = towerpres::decode_nat(tracks[t]);
    if (!v) return false;
    x[t] = *v;
  }
  return towerpres::check_V(x[0], x[1], x[2], x[3]) == towerpres::VReason::Ok;
}

// States from which some accepting state is reachable.
std::vector<bool> live_states(const Dfa& d) {
  const std::size_t n = d.state_count(), width = d.alphabet()->size();
  std::vector<std::vector<automata::StateId>> rev(n);
  for (std::size_t s = 0; s < n; ++s)
    for (Code c = 0; c < width; ++c) rev[d.next(static_cast<automata::StateId>(s), c)].push_back(static_cast<automata::StateId>(s));
  std::vector<bool> live(n, false);
  std::vector<automata::StateId> todo;
  for (std::size_t s = 0; s < n; ++s)
    if (d.is_accepting(static_cast<automata::StateId>(s))) {
      live[s] = true;
      todo.push_back(static_cast<automata::StateId>(s));
    }
  while (!todo.empty()) {
    const auto s = todo.back();
    todo.pop_back();
    for (auto p : rev[s])
      if (!live[p]) {
        live[p] = true;
        todo.push_back(p);
      }
  }
  return live;
}

}  // namespace

CheckResult check_language_dfa(std::size_t exhaustive_len, std::uint64_t samples, std::size_t sample_len,
                               std::uint64_t seed) {
  const std::string name = "language automaton";
  return guarded(name, [&] {
    Checker ck(name);
    const Dfa& L = towerpres::language_dfa();
    const auto& alpha = towerpres::tuple_alphabet();
    const std::size_t width = alpha->size();
    const std::vector<bool> live = live_states(L);

    // Depth-first over all strings. Once a track has padding followed by a
    // symbol no extension is a convolution, and the automaton has to be in a
    // dead state; that covers every such extension at once.
    std::uint64_t strings = 0, accepted = 0, pruned = 0;
    std::vector<Code> cols;
    struct Frame {
      automata::StateId state;
      unsigned padded;  // bit t: track t already padded
    };
    std::function<void(const Frame&)> dfs = [&](const Frame& f) {
      if (cols.size() >= exhaustive_len || ck.failed()) return;
      for (Code c = 0; c < width; ++c) {
        const auto next = L.next(f.state, c);
        unsigned padded = f.padded;
        bool broken = false;
        for (std::size_t t = 0; t < 4; ++t) {
          if (alpha->is_padding(c, t))
            padded |= 1u << t;
          else if (padded >> t & 1u)
            broken = true;
        }
        cols.push_back(c);
        if (broken) {
          ++pruned;
          ck.expect_lazy(!live[next], [&] { return "accepting extension after " + ConvolutionString(alpha, cols).to_string(); });
        } else {
          const ConvolutionString w(alpha, cols);
          const bool truth = oracle_in_L(w);
          ++strings;
          accepted += truth;
          ck.expect_lazy(L.is_accepting(next) == truth, [&] { return w.to_string() + (truth ? " rejected" : " accepted"); });
          dfs(Frame{next, padded});
        }
        cols.pop_back();
      }
    };
    ck.expect(!L.is_accepting(L.start()), "empty string accepted");
    dfs(Frame{L.start(), 0});

    std::mt19937_64 rng(seed);
    std::uint64_t sampled_accepted = 0;
    for (std::uint64_t i = 0; i < samples && !ck.failed(); ++i) {
      const std::size_t len = 1 + rng() % sample_len;
      bool truth;
      bool got;
      std::string shown;
      if (i % 2 == 0) {
        // arbitrary columns, mostly not convolutions
        std::vector<Code> raw(len);
        for (auto& c : raw) c = static_cast<Code>(rng() % width);
        got = L.accepts_columns(raw);
        truth = ConvolutionString::well_formed(*alpha, raw) && oracle_in_L(ConvolutionString(alpha, raw));
        if (got != truth) shown = ConvolutionString::well_formed(*alpha, raw) ? ConvolutionString(alpha, raw).to_string() : "ill-formed string";
      } else {
        // four random tracks, biased towards members of V
        std::vector<std::string> tr(4);
        for (std::size_t t = 0; t < 4; ++t) {
          const std::size_t l = t == 3 ? 1 + rng() % 2 : 1 + rng() % len;
          for (std::size_t j = 0; j < l; ++j) tr[t] += (rng() % 2) ? '1' : '0';
          if (rng() % 4) tr[t].back() = '1';
          if (t == 2 && rng() % 2) {
            tr[t].assign(l - 1, '0');
            tr[t] += '1';
          }
        }
        tr[static_cast<std::size_t>(rng() % 3)].resize(len, '1');
        const ConvolutionString w = automata::convolve(alpha, tr);
        got = L.accepts(w);
        truth = oracle_in_L(w);
        shown = w.to_string();
      }
      sampled_accepted += truth;
      ck.expect_lazy(got == truth, [&] { return shown + (truth ? " rejected" : " accepted"); });
    }
    return ck.done(std::to_string(strings) + " convolutions up to length " + std::to_string(exhaustive_len) + " (" +
                   std::to_string(accepted) + " in L, " + std::to_string(pruned) + " dead prefixes), " +
                   std::to_string(samples) + " random strings (" + std::to_string(sampled_accepted) + " in L)");
  });
}

CheckResult check_graph_dfa(unsigned bound, std::uint64_t non_edges, std::uint64_t seed) {
  const std::string name = "graph automaton";
  return guarded(name, [&] {
    Checker ck(name);
    const Dfa& G = towerpres::graph_f_dfa();
    const auto pair = [](const TupleV& u, const TupleV& w) {
      return automata::convolve(towerpres::graph_alphabet(),
                                std::vector<ConvolutionString>{towerpres::encode_tuple(u), towerpres::encode_tuple(w)});
    };
    std::vector<TupleV> dom;
    for (unsigned a = 0; a < bound; ++a)
      for (unsigned b = 0; b < bound; ++b)
        for (unsigned e = 0; e < bound; ++e)
          for (int d = 0; d <= 1; ++d)
            if (TupleV v{a, b, e, d}; towerpres::in_V(v)) dom.push_back(v);
    std::vector<TupleV> image;
    for (const TupleV& v : dom) {
      image.push_back(towerpres::apply_f(v).first);
      ck.expect_lazy(G.accepts(pair(v, image.back())), [&] { return "edge from " + v.to_compact() + " rejected"; });
    }
    std::mt19937_64 rng(seed);
    std::uint64_t tested = 0;
    while (tested < non_edges && !ck.failed()) {
      const std::size_t i = rng() % dom.size();
      TupleV w;
      switch (rng() % 3) {
        case 0:
          w = dom[rng() % dom.size()];
          break;
        case 1:
          // near miss
          w = image[i];
          switch (rng() % 4) {
            case 0: w.a += (rng() % 2) ? 1 : -1; break;
            case 1: w.b += (rng() % 2) ? 1 : -1; break;
            case 2: w.c_exp += (rng() % 2) ? 1 : -1; break;
            default: w.d ^= 1;
          }
          break;
        default:
          w = towerpres::apply_f(dom[rng() % dom.size()]).first;
      }
      if (w == image[i] || !towerpres::in_V(w)) continue;
      ++tested;
      ck.expect_lazy(!G.accepts(pair(dom[i], w)),
                     [&] { return dom[i].to_compact() + " -> " + w.to_compact() + " accepted"; });
    }
    return ck.done(std::to_string(dom.size()) + " edges with components < " + std::to_string(bound) + ", " +
                   std::to_string(tested) + " non-edges");
  });
}

namespace {

using apps::Tokens;

CheckResult presburger_value_bound(const std::string& pres, std::size_t n_max) {
  const std::string name = "exponential bound for " + pres;
  return guarded(name, [&] {
    Checker ck(name);
    const comprate::Presentation p = comprate::presentation_by_name(pres);
    const comprate::ValueBoundReport r = comprate::value_bound_check(p, n_max);
    ck.expect(r.passed, r.witness);
    for (const auto& row : r.rows) {
      const BigInt expect = row.n == 0 ? BigInt(0) : boost::multiprecision::pow(BigInt(p.mu), static_cast<unsigned>(row.n)) - 1;
      ck.expect_lazy(row.observed_max == expect, [&] {
        return "n=" + std::to_string(row.n) + ": max " + row.observed_max.str() + ", expected " + expect.str();
      });
      ck.expect_lazy(row.pass && row.observed_max <= row.bound,
                     [&] { return "n=" + std::to_string(row.n) + " exceeds " + row.bound.str(); });
    }
    return ck.done("max = " + std::to_string(p.mu) + "^n - 1 for n <= " + std::to_string(n_max) + ", c = " +
                   std::to_string(r.c) + ", bound mu^(c+1) mu^n");
  });
}

CheckResult presburger_incompressible() {
  const std::string name = "base-4 against base-2";
  return guarded(name, [&] {
    Checker ck(name);
    const auto r = comprate::incompressibility_check(comprate::base_k_presentation(4), comprate::base_k_presentation(2), 16, 30);
    ck.expect(r.passed, r.witness);
    ck.expect(r.gaps_pass, "power length gaps exceed c0");
    for (std::size_t k = 0; k + 1 < r.power_lengths.size(); ++k)
      ck.expect_lazy(r.power_lengths[k + 1] - r.power_lengths[k] <= r.c0,
                     [&] { return "gap at 2^" + std::to_string(k) + " exceeds c0"; });
    for (const auto& row : r.rows)
      ck.expect_lazy(row.s.is_exact() && row.s.value() <= 2 * row.n + 1,
                     [&] { return "s(" + std::to_string(row.n) + ") = " + show(row.s) + " > 2n+1"; });
    return ck.done("s(n) <= 2n+1 for n <= 16, gaps <= c0 = " + std::to_string(r.c0) + " for k <= 30");
  });
}

CheckResult presburger_identity() {
  const std::string name = "base-2 against itself";
  return guarded(name, [&] {
    Checker ck(name);
    const auto b2 = comprate::base_k_presentation(2);
    for (std::size_t n = 0; n <= 12; ++n) {
      const auto p = comprate::s_of_n(n, b2, b2, comprate::Strategy::Exhaustive);
      ck.expect_lazy(p.s_value == TowerBound::exact(n), [&] { return "s(" + std::to_string(n) + ") = " + show(p.s_value); });
    }
    bool threw = false;
    try {
      comprate::value_bound_check(comprate::unary_presentation(), 4);
    } catch (const Error&) {
      threw = true;
    }
    ck.expect(threw, "unary presentation accepted as an addition presentation");
    return ck.done("s(n) = n for n <= 12; unary rejected");
  });
}

apps::TmConfig random_config(const apps::TuringMachine& m, std::mt19937_64& rng, const std::string& x) {
  apps::TmConfig c;
  const std::size_t run = rng() % 40, tail = rng() % 8;
  c.tape.assign(run, x);
  for (std::size_t j = 0; j < tail; ++j) c.tape.push_back(m.gamma()[rng() % m.gamma().size()]);
  c.head = rng() % (c.tape.size() + 1);
  c.state = m.states()[rng() % m.states().size()];
  return c;
}

CheckResult tm_step_automaton(const apps::TuringMachine& m, std::size_t max_len) {
  const std::string name = "step automaton against the simulator";
  return guarded(name, [&] {
    Checker ck(name);
    const Dfa rel = apps::tm_step_relation_dfa(m);
    const auto pair = [&](const apps::TmConfig& a, const apps::TmConfig& b) {
      return automata::convolve(rel.alphabet(),
                                std::vector<ConvolutionString>{apps::config_string(m, a), apps::config_string(m, b)});
    };
    // every configuration string up to max_len
    std::uint64_t stepping = 0;
    const std::size_t g = m.gamma().size();
    for (std::size_t len = 1; len <= max_len; ++len)
      for (std::size_t pos = 0; pos < len; ++pos)
        for (const auto& q : m.states()) {
          std::vector<std::size_t> digits(len - 1, 0);
          for (;;) {
            Tokens t;
            for (std::size_t i = 0, d = 0; i < len; ++i) t.push_back(i == pos ? q : m.gamma()[digits[d++]]);
            const apps::TmConfig a = apps::parse_config(m, t);
            if (const auto b = apps::tm_step(m, a)) {
              ++stepping;
              ck.expect_lazy(rel.accepts(pair(a, *b)), [&] { return apps::join_tokens(t) + " step rejected"; });
              ck.expect_lazy(!rel.accepts(pair(a, a)), [&] { return apps::join_tokens(t) + " fixed point accepted"; });
            }
            std::size_t i = 0;
            while (i < digits.size() && ++digits[i] == g) digits[i++] = 0;
            if (i == digits.size()) break;
          }
        }
    // every accepted pair is a real step
    std::uint64_t accepted = 0;
    automata::for_each_accepted(rel, max_len + 1, [&](std::span<const Code> cols) {
      const ConvolutionString w(rel.alphabet(), std::vector<Code>(cols.begin(), cols.end()));
      const auto tracks = w.deconvolve();
      Tokens ta, tb;
      for (auto d : tracks[0]) ta.push_back(m.config_alphabet()->name(d));
      for (auto d : tracks[1]) tb.push_back(m.config_alphabet()->name(d));
      const auto b = apps::tm_step(m, apps::parse_config(m, ta));
      ck.expect_lazy(b && *b == apps::parse_config(m, tb),
                     [&] { return "spurious pair " + apps::join_tokens(ta) + " / " + apps::join_tokens(tb); });
      if (ta.size() <= max_len) ++accepted;
      return !ck.failed();
    });
    ck.expect(accepted == stepping, "accepted " + std::to_string(accepted) + " pairs, simulator has " + std::to_string(stepping));
    return ck.done(std::to_string(stepping) + " steps from configurations up to length " + std::to_string(max_len));
  });
}

CheckResult tm_round_trips(const apps::TuringMachine& m, std::uint64_t seed, std::uint64_t count) {
  const std::string name = "configuration codecs round trip";
  return guarded(name, [&] {
    Checker ck(name);
    std::mt19937_64 rng(seed);
    const std::string x = m.gamma().size() > 1 ? m.gamma()[1] : m.gamma()[0];
    for (std::uint64_t i = 0; i < count && !ck.failed(); ++i) {
      const apps::TmConfig c = random_config(m, rng, x);
      ck.expect_lazy(apps::config_from_string(m, apps::config_string(m, c)) == c,
                     [&] { return apps::join_tokens(c.render()) + " standard"; });
      ck.expect_lazy(apps::tm_decode(m, apps::tm_encode(m, c, x), x) == c,
                     [&] { return apps::join_tokens(c.render()) + " compressed"; });
    }
    return ck.done(std::to_string(count) + " random configurations, run symbol " + x);
  });
}

CheckResult tm_compressed_run(const apps::TuringMachine& m, std::size_t steps) {
  const std::string name = "compressed run";
  return guarded(name, [&] {
    Checker ck(name);
    const std::string x = m.gamma().size() > 1 ? m.gamma()[1] : m.gamma()[0];
    apps::TmConfig plain;
    plain.tape.assign(3, x);
    plain.head = 3;
    plain.state = m.q0();
    Tokens packed = apps::tm_encode(m, plain, x);
    std::size_t done = 0;
    for (; done < steps && !ck.failed(); ++done) {
      const auto a = apps::tm_step(m, plain);
      const auto b = apps::tm_step(m, apps::tm_decode(m, packed, x));
      if (!a || !b) {
        ck.expect(!a && !b, "halting differs at step " + std::to_string(done));
        break;
      }
      ck.expect_lazy(*a == *b, [&] { return "step " + std::to_string(done + 1) + ": " + apps::join_tokens(a->render()); });
      plain = *a;
      packed = apps::tm_encode(m, *b, x);
    }
    ck.expect(apps::tm_decode(m, packed, x) == plain, "final configurations differ");
    return ck.done(std::to_string(done) + " steps, final " + apps::join_tokens(plain.render()));
  });
}

CheckResult tm_rate(const apps::TuringMachine& m, const OrbitWalker& walker) {
  const std::string name = "configuration compression rate";
  return guarded(name, [&] {
    Checker ck(name);
    const TowerBound s5 = apps::tm_s_lower(m, 5, &walker).value;
    const TowerBound r3 = towerpres::r_lower(3, walker).value;
    ck.expect(r3.is_exact() && r3.value() + 2 >= 18, "r_lower(3) + 2 = " + show(r3) + " + 2 < 18");
    ck.expect(r3.is_exact() &&
                  towerpres::tower_compare(s5, TowerBound::exact(r3.value() + 2)) != towerpres::Ordering::Less,
              "s(5) = " + show(s5) + " below r_lower(3) + 2");
    for (std::size_t n = 1; n <= 8; ++n) {
      const TowerBound lhs = apps::tm_s_lower(m, n + 2, &walker).value;
      const TowerBound rhs = towerpres::r_lower(n, walker).value;
      ck.expect_lazy(rhs.is_exact() &&
                         towerpres::tower_compare(lhs, TowerBound::exact(rhs.value() + 2)) != towerpres::Ordering::Less,
                     [&] { return "s(" + std::to_string(n + 2) + ") = " + show(lhs) + " below r_lower(" + std::to_string(n) + ") + 2"; });
    }
    return ck.done("s(5) = " + show(s5) + " >= r_lower(3) + 2 = " + (r3.is_exact() ? BigInt(r3.value() + 2).str() : show(r3)));
  });
}

apps::GroupElement random_group_element(const apps::GroupSpec& g, std::mt19937_64& rng) {
  const Tokens gens = g.generators();
  Tokens w;
  const std::size_t len = rng() % 30;
  for (std::size_t i = 0; i < len; ++i) w.push_back(gens[rng() % gens.size()]);
  apps::GroupElement x = apps::group_eval(g, w);
  if (rng() % 4 == 0) {
    // a long leading run; huge ones only in the positive direction, where the
    // compressed form stays short
    BigInt big = rng() % 3 == 0 ? BigInt(rng()) << 40 : BigInt(rng() % 500);
    if (big < 500 && rng() % 2) big = -big;
    if (auto* e = std::get_if<apps::FreeAbelianNF>(&x)) e->k[0] += big;
    if (auto* e = std::get_if<apps::SemidirectNF>(&x)) e->k += big;
    if (auto* e = std::get_if<apps::BsNF>(&x)) e->m += big;
  }
  return x;
}

std::vector<apps::GroupSpec> group_samples() {
  using apps::GroupSpec;
  return {GroupSpec::free_abelian(1),         GroupSpec::free_abelian(3),         GroupSpec::free(1),
          GroupSpec::free(2),                 GroupSpec::baumslag_solitar(1, 2),  GroupSpec::baumslag_solitar(2, 3),
          GroupSpec::semidirect(1, 0, 0, 1),  GroupSpec::semidirect(2, 1, 1, 1)};
}

CheckResult group_round_trips(const apps::GroupSpec& g, std::uint64_t seed, std::uint64_t count) {
  const std::string name = g.name() + " round trips";
  return guarded(name, [&] {
    Checker ck(name);
    std::mt19937_64 rng(seed);
    const Tokens gens = g.generators();
    const std::size_t half = gens.size() / 2;
    std::uint64_t standard = 0;
    for (std::uint64_t i = 0; i < count && !ck.failed(); ++i) {
      const apps::GroupElement x = random_group_element(g, rng);
      apps::validate(g, x);
      const BigInt len = apps::group_std_length(g, x);
      const Tokens c = apps::group_encode_compressed(g, x);
      ck.expect_lazy(apps::group_decode_compressed(g, c) == x, [&] { return apps::join_tokens(c) + " compressed"; });
      const apps::GroupSplit split = apps::group_decode_split(g, c);
      ck.expect_lazy(split.k + split.rest.size() == len, [&] { return apps::join_tokens(c) + " length"; });
      if (len < 100000) {
        ++standard;
        const Tokens s = apps::group_encode_std(g, x);
        ck.expect_lazy(BigInt(s.size()) == len && apps::group_decode_std(g, s) == x,
                       [&] { return apps::join_tokens(s) + " standard"; });
      }
      const std::size_t k = rng() % half;
      ck.expect_lazy(apps::group_act(g, apps::group_act(g, x, gens[k]), gens[k + half]) == x,
                     [&] { return gens[k] + " not undone by " + gens[k + half]; });
    }
    return ck.done(std::to_string(count) + " elements, " + std::to_string(standard) + " also through the standard form");
  });
}

CheckResult group_rate(const OrbitWalker& walker) {
  const std::string name = "group compression rate";
  return guarded(name, [&] {
    Checker ck(name);
    for (const auto& g : group_samples()) {
      for (std::size_t n = 1; n <= 5; ++n) {
        const auto s = apps::group_s_lower(g, n, &walker, 2).value;
        const auto r = towerpres::r_lower(n, walker).value;
        ck.expect_lazy(towerpres::tower_compare(s, r) != towerpres::Ordering::Less,
                       [&] { return g.name() + ": s(" + std::to_string(n) + ") = " + show(s) + " < r_lower"; });
      }
    }
    return ck.done("s(n) >= r_lower(n) for n <= 5");
  });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"props", "lemmas", "automata", "presburger", "tm", "groups"};
  return names;
}

SuiteReport run_suite(std::string_view name, const VerifyOptions& options) {
  SuiteReport rep;
  rep.suite = std::string(name);
  const auto walk = [&] {
    towerpres::WalkerOptions wo;
    wo.capacity = options.capacity;
    return towerpres::orbit_walk(options.walk_budget, wo);
  };
  if (name == "props") {
    rep.checks.push_back(check_golden_chain());
    rep.checks.push_back(check_closure_injectivity());
  } else if (name == "lemmas") {
    static const unsigned cycles[] = {3, 5, 6, 7, 9, 10, 11, 12};
    static const unsigned towers[] = {0, 1, 2, 4};
    const OrbitWalker w = walk();
    rep.checks.push_back(check_power_cycles(cycles));
    rep.checks.push_back(check_power_to_level(towers));
    rep.checks.push_back(check_base_path(w));
    rep.checks.push_back(check_power_reachability(options.seed, 200));
    rep.checks.push_back(check_fast_forward(w));
    rep.checks.push_back(check_r_monotone(w));
  } else if (name == "automata") {
    rep.checks.push_back(check_language_dfa(4, options.samples, 12, options.seed));
    rep.checks.push_back(check_graph_dfa(16, options.samples, options.seed));
  } else if (name == "presburger") {
    rep.checks.push_back(presburger_value_bound("base-2", 16));
    rep.checks.push_back(presburger_value_bound("base-4", 8));
    rep.checks.push_back(presburger_incompressible());
    rep.checks.push_back(presburger_identity());
  } else if (name == "tm") {
    const auto m = apps::TuringMachine::sample();
    const OrbitWalker w = towerpres::orbit_walk(std::min<std::uint64_t>(options.walk_budget, 200000));
    rep.checks.push_back(tm_step_automaton(m, 5));
    rep.checks.push_back(tm_round_trips(m, options.seed, 10000));
    rep.checks.push_back(tm_compressed_run(m, 100));
    rep.checks.push_back(tm_rate(m, w));
  } else if (name == "groups") {
    const OrbitWalker w = towerpres::orbit_walk(std::min<std::uint64_t>(options.walk_budget, 200000));
    std::uint64_t s = options.seed;
    for (const auto& g : group_samples()) rep.checks.push_back(group_round_trips(g, s++, 10000));
    rep.checks.push_back(group_rate(w));
  } else {
    throw Error(ErrorCode::NotFound, "unknown suite '" + std::string(name) + "'");
  }
  return rep;
}

std::string format_report(const SuiteReport& report) {
  std::string out;
  for (const auto& c : report.checks)
    out += std::string(c.passed ? "PASS " : "FAIL ") + report.suite + "/" + c.name + ": " + c.detail + "\n";
  return out;
}

}  // namespace fapres::verify
