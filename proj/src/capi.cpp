#include "fapres/fapres.h"

#include "fapres/comprate.hpp"
#include "fapres/error.hpp"
#include "fapres/groups.hpp"
#include "fapres/orbit.hpp"
#include "fapres/turing.hpp"
#include "fapres/verify.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

using namespace fapres;

struct fap_walker {
  towerpres::OrbitWalker walker;
};

struct fap_machine {
  apps::TuringMachine machine;
};

struct fap_group {
  apps::GroupSpec spec;
};

namespace {

thread_local std::string last_error;

fap_status fail(fap_status s, const std::string& what) {
  last_error = what;
  return s;
}

template <class F>
fap_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return FAP_OK;
  } catch (const Error& e) {
    return fail(static_cast<fap_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FAP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FAP_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

towerpres::TupleV parse_tuple(const std::string& text) {
  BigInt x[4];
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    const std::size_t end = i < 3 ? text.find(',', pos) : text.size();
    if (end == std::string::npos) throw Error(ErrorCode::Malformed, "expected a,b,c_exp,d but got '" + text + "'");
    x[i] = parse_bigint(text.substr(pos, end - pos));
    pos = end + 1;
  }
  if (x[3] != 0 && x[3] != 1) throw Error(ErrorCode::Malformed, "d must be 0 or 1 in '" + text + "'");
  towerpres::TupleV v{x[0], x[1], x[2], static_cast<int>(x[3])};
  if (v.c_exp < 0) throw Error(ErrorCode::Malformed, "negative c_exp in '" + text + "'");
  if (!towerpres::in_V(v))
    throw Error(ErrorCode::InvalidArgument,
                "(" + text + ") is not in V: " + towerpres::to_string(towerpres::check_V(v)));
  return v;
}

std::uint64_t budget_or_default(std::uint64_t b) { return b ? b : towerpres::kDefaultBitBudget; }

std::string table(fap_format format, const std::string& value_column,
                  const std::vector<std::tuple<std::size_t, std::string, bool, std::string>>& rows) {
  if (format == FAP_FORMAT_JSON) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& [n, v, exact, witness] : rows)
      doc.push_back({{"n", n}, {value_column, v}, {"exact", exact}, {"witness", witness}});
    return doc.dump(2) + "\n";
  }
  if (format != FAP_FORMAT_CSV) throw Error(ErrorCode::InvalidArgument, "tables are written as csv or json");
  std::string out = "n," + value_column + ",exact,witness\n";
  for (const auto& [n, v, exact, witness] : rows)
    out += std::to_string(n) + "," + v + "," + (exact ? "1" : "0") + "," + witness + "\n";
  return out;
}

std::string dfa_text(const automata::Dfa& d, fap_format format, const std::string& name) {
  if (format == FAP_FORMAT_JSON) return automata::to_json(d);
  if (format == FAP_FORMAT_DOT) {
    std::string id = name;
    for (char& c : id)
      if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return automata::to_dot(d, id);
  }
  throw Error(ErrorCode::InvalidArgument, "automata are written as json or dot");
}

std::string run_symbol_of(const apps::TuringMachine& m, const char* x) {
  if (x) return x;
  if (m.gamma().size() < 2) throw Error(ErrorCode::InvalidArgument, "machine has no non-blank symbol");
  return m.gamma()[1];
}

constexpr std::size_t kMaxStandardTokens = 1'000'000;

}  // namespace

extern "C" {

const char* fap_version(void) { return "0.1.0"; }

const char* fap_last_error(void) { return last_error.c_str(); }

const char* fap_status_name(fap_status s) {
  switch (s) {
    case FAP_OK: return "ok";
    case FAP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FAP_ERR_ALPHABET_MISMATCH: return "alphabet mismatch";
    case FAP_ERR_MALFORMED: return "malformed input";
    case FAP_ERR_BUDGET: return "budget exceeded";
    case FAP_ERR_IO: return "i/o error";
    case FAP_ERR_VERIFICATION: return "verification failed";
    case FAP_ERR_INTERNAL: return "internal error";
    case FAP_ERR_NOT_FOUND: return "not found";
  }
  return "unknown status";
}

void fap_string_free(char* s) { std::free(s); }

fap_status fap_walker_new(uint64_t capacity, fap_walker** out) {
  return guard([&] {
    require(out, "out is null");
    towerpres::WalkerOptions o;
    if (capacity) o.capacity = capacity;
    *out = new fap_walker{towerpres::OrbitWalker(o)};
  });
}

void fap_walker_free(fap_walker* w) { delete w; }

fap_status fap_walker_run(fap_walker* w, uint64_t steps, fap_trace_fn fn, void* user) {
  return guard([&] {
    require(w, "walker is null");
    if (!fn) {
      w->walker.run(steps);
      return;
    }
    if (w->walker.index() == 0) fn(user, 0, w->walker.current().to_compact().c_str(), 0);
    w->walker.run(steps, [&](std::uint64_t index, const towerpres::TupleV& v, int rule) {
      fn(user, index, v.to_compact().c_str(), rule);
    });
  });
}

uint64_t fap_walker_index(const fap_walker* w) { return w ? w->walker.index() : 0; }

int fap_walker_degraded(const fap_walker* w) { return w && w->walker.degraded() ? 1 : 0; }

fap_status fap_walker_milestones_json(const fap_walker* w, char** out) {
  return guard([&] {
    require(w && out, "null argument");
    *out = dup(towerpres::milestones_json(w->walker));
  });
}

fap_status fap_orbit_index(const char* tuple, uint64_t bit_budget, char** out) {
  return guard([&] {
    require(tuple && out, "null argument");
    *out = dup(towerpres::orbit_index_fast(parse_tuple(tuple), budget_or_default(bit_budget)).to_string());
  });
}

fap_status fap_orbit_tuple_at(const char* index, char** out) {
  return guard([&] {
    require(index && out, "null argument");
    const BigInt k = parse_bigint(index);
    require(k >= 0, "index must be nonnegative");
    *out = dup(towerpres::orbit_tuple_at(k).to_compact());
  });
}

fap_status fap_r_table(size_t n_max, const char* method, const fap_walker* walker, uint64_t bit_budget,
                       fap_format format, char** out) {
  return guard([&] {
    require(out, "out is null");
    const std::string m = method ? method : "best";
    const std::uint64_t budget = budget_or_default(bit_budget);
    std::vector<std::tuple<std::size_t, std::string, bool, std::string>> rows;
    for (std::size_t n = 0; n <= n_max; ++n) {
      towerpres::RBound r;
      if (m == "best") {
        r = towerpres::r_best(n, walker ? &walker->walker : nullptr, 3, budget);
      } else if (m == "walk") {
        require(walker, "method 'walk' needs a walker");
        r = towerpres::r_lower(n, walker->walker);
      } else if (m == "enumerate") {
        r = towerpres::r_enumerated(n, budget);
      } else if (m == "symbolic") {
        r = {towerpres::r_symbolic(n), n == 0, std::nullopt};
        if (n >= 3) r.witness = towerpres::TupleV{(BigInt(1) << (n - 1)) + 1, 1, 0, 0};
      } else {
        throw Error(ErrorCode::NotFound, "unknown method '" + m + "' (best, walk, enumerate, symbolic)");
      }
      rows.emplace_back(n, r.value.to_string(), r.exact, r.witness ? r.witness->to_string() : "");
    }
    *out = dup(table(format, "r", rows));
  });
}

fap_status fap_s_table(const char* psi, const char* psi0, size_t n_max, const char* strategy,
                       const fap_walker* walker, uint64_t bit_budget, fap_format format, char** out) {
  return guard([&] {
    require(psi && psi0 && out, "null argument");
    const comprate::Presentation p = comprate::presentation_by_name(psi);
    const comprate::Presentation p0 = comprate::presentation_by_name(psi0);
    comprate::Strategy st;
    if (strategy) {
      const auto s = comprate::strategy_from_name(strategy);
      if (!s) throw Error(ErrorCode::NotFound, std::string("unknown strategy '") + strategy + "'");
      st = *s;
    } else if (p.name == "tower") {
      st = comprate::Strategy::OrbitAssisted;
    } else if (p.max_value && p0.length_monotone) {
      st = comprate::Strategy::ValueMax;
    } else {
      st = comprate::Strategy::Exhaustive;
    }
    comprate::SOptions o;
    o.walker = walker ? &walker->walker : nullptr;
    o.bit_budget = budget_or_default(bit_budget);
    std::vector<std::tuple<std::size_t, std::string, bool, std::string>> rows;
    for (std::size_t n = 0; n <= n_max; ++n) {
      const comprate::CompressProfile c = comprate::s_of_n(n, p, p0, st, o);
      std::string witness = c.witnesses.empty() ? "" : c.witnesses.front().word;
      if (c.budget_exhausted) witness += " (budget exhausted)";
      rows.emplace_back(n, c.s_value.to_string(), c.exact, witness);
    }
    *out = dup(table(format, "s", rows));
  });
}

fap_status fap_dfa_export(const char* name, fap_format format, char** out) {
  return guard([&] {
    require(name && out, "null argument");
    const std::string n = name;
    if (n == "language") {
      *out = dup(dfa_text(towerpres::language_dfa(), format, "language"));
    } else if (n == "graph-f") {
      *out = dup(dfa_text(towerpres::graph_f_dfa(), format, "graph_f"));
    } else if (n == "tm-config") {
      *out = dup(dfa_text(apps::tm_config_dfa(apps::TuringMachine::sample()), format, "tm_config"));
    } else if (n == "tm-step") {
      *out = dup(dfa_text(apps::tm_step_relation_dfa(apps::TuringMachine::sample()), format, "tm_step"));
    } else if (const auto prim = automata::primitive_from_name(n)) {
      *out = dup(dfa_text(automata::build_primitive_relation(*prim), format, n));
    } else if (const auto colon = n.find(':'); colon != std::string::npos) {
      const comprate::Presentation p = comprate::presentation_by_name(n.substr(0, colon));
      const std::string part = n.substr(colon + 1);
      const automata::Dfa* d = nullptr;
      if (part == "language") d = &p.language;
      else if (part == "successor" && p.successor) d = &*p.successor;
      else if (part == "addition" && p.addition) d = &*p.addition;
      else if (part == "doubling" && p.doubling) d = &*p.doubling;
      else if (part == "equality" && p.equality) d = &*p.equality;
      if (!d) throw Error(ErrorCode::NotFound, p.name + " has no '" + part + "' automaton");
      *out = dup(dfa_text(*d, format, p.name + "_" + part));
    } else {
      throw Error(ErrorCode::NotFound, "unknown automaton '" + n + "'");
    }
  });
}

void fap_verify_options_init(fap_verify_options* o) {
  if (!o) return;
  const verify::VerifyOptions d;
  o->seed = d.seed;
  o->walk_budget = d.walk_budget;
  o->capacity = d.capacity;
  o->bit_budget = d.bit_budget;
  o->samples = d.samples;
}

const char* fap_verify_suites(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : verify::suite_names()) s += (s.empty() ? "" : " ") + n;
    return s;
  }();
  return names.c_str();
}

fap_status fap_verify(const char* suite, const fap_verify_options* options, char** report, int* passed) {
  return guard([&] {
    require(suite && report && passed, "null argument");
    verify::VerifyOptions o;
    if (options) {
      o.seed = options->seed;
      o.walk_budget = options->walk_budget;
      o.capacity = options->capacity ? options->capacity : o.capacity;
      o.bit_budget = budget_or_default(options->bit_budget);
      o.samples = options->samples;
    }
    const verify::SuiteReport r = verify::run_suite(suite, o);
    *report = dup(verify::format_report(r));
    *passed = r.passed() ? 1 : 0;
  });
}

fap_status fap_machine_sample(fap_machine** out) {
  return guard([&] {
    require(out, "out is null");
    *out = new fap_machine{apps::TuringMachine::sample()};
  });
}

fap_status fap_machine_from_json(const char* json, fap_machine** out) {
  return guard([&] {
    require(json && out, "null argument");
    *out = new fap_machine{apps::TuringMachine::from_json(json)};
  });
}

void fap_machine_free(fap_machine* m) { delete m; }

fap_status fap_machine_to_json(const fap_machine* m, char** out) {
  return guard([&] {
    require(m && out, "null argument");
    *out = dup(m->machine.to_json());
  });
}

fap_status fap_machine_step(const fap_machine* m, const char* config, char** out, int* halted) {
  return guard([&] {
    require(m && config && out && halted, "null argument");
    *out = nullptr;
    const auto next = apps::tm_step(m->machine, apps::parse_config(m->machine, apps::split_tokens(config)));
    *halted = next ? 0 : 1;
    if (next) *out = dup(apps::join_tokens(next->render()));
  });
}

fap_status fap_machine_encode(const fap_machine* m, const char* config, const char* run_symbol, char** out) {
  return guard([&] {
    require(m && config && out, "null argument");
    const auto cfg = apps::parse_config(m->machine, apps::split_tokens(config));
    *out = dup(apps::join_tokens(apps::tm_encode(m->machine, cfg, run_symbol_of(m->machine, run_symbol))));
  });
}

fap_status fap_machine_decode(const fap_machine* m, const char* compressed, const char* run_symbol, char** out) {
  return guard([&] {
    require(m && compressed && out, "null argument");
    const auto cfg = apps::tm_decode(m->machine, apps::split_tokens(compressed), run_symbol_of(m->machine, run_symbol));
    *out = dup(apps::join_tokens(cfg.render()));
  });
}

fap_status fap_group_new(const char* spec, fap_group** out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = new fap_group{apps::GroupSpec::parse(spec)};
  });
}

void fap_group_free(fap_group* g) { delete g; }

fap_status fap_group_name(const fap_group* g, char** out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = dup(g->spec.name());
  });
}

fap_status fap_group_generators(const fap_group* g, char** out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = dup(apps::join_tokens(g->spec.generators()));
  });
}

fap_status fap_group_encode(const fap_group* g, const char* word, char** standard, char** compressed) {
  return guard([&] {
    require(g && word && standard && compressed, "null argument");
    *standard = *compressed = nullptr;
    const apps::GroupElement x = apps::group_eval(g->spec, apps::split_tokens(word));
    const std::string c = apps::join_tokens(apps::group_encode_compressed(g->spec, x));
    std::string s;
    const bool small = apps::group_std_length(g->spec, x) <= kMaxStandardTokens;
    if (small) s = apps::join_tokens(apps::group_encode_std(g->spec, x));
    *compressed = dup(c);
    if (small) *standard = dup(s);
  });
}

fap_status fap_group_decode(const fap_group* g, const char* text, int compressed, char** out) {
  return guard([&] {
    require(g && text && out, "null argument");
    const apps::Tokens w = apps::split_tokens(text);
    if (compressed) {
      const apps::GroupElement x = apps::group_decode_compressed(g->spec, w, kMaxStandardTokens);
      *out = dup(apps::join_tokens(apps::group_encode_std(g->spec, x)));
    } else {
      *out = dup(apps::join_tokens(apps::group_encode_compressed(g->spec, apps::group_decode_std(g->spec, w))));
    }
  });
}

}  // extern "C"
