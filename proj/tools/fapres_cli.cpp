// Command-line front end. Talks to the library through the C API only.

#include "fapres/fapres.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace {

// Thrown after a failed library call; main prints it and exits with 1.
struct Failure {
  std::string message;
};

void check(fap_status s, const std::string& what) {
  if (s != FAP_OK) throw Failure{what + ": " + fap_status_name(s) + ": " + fap_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  fap_string_free(s);
  return out;
}

struct WalkerDeleter {
  void operator()(fap_walker* w) const { fap_walker_free(w); }
};
using Walker = std::unique_ptr<fap_walker, WalkerDeleter>;

struct MachineDeleter {
  void operator()(fap_machine* m) const { fap_machine_free(m); }
};
struct GroupDeleter {
  void operator()(fap_group* g) const { fap_group_free(g); }
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw Failure{"cannot open '" + path + "' for writing"};
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw Failure{"write failed"};
    }
  }

 private:
  std::ofstream file_;
};

fap_format parse_format(const std::string& f) {
  if (f == "json") return FAP_FORMAT_JSON;
  if (f == "dot") return FAP_FORMAT_DOT;
  return FAP_FORMAT_CSV;
}

Walker make_walker(std::uint64_t budget, std::uint64_t capacity) {
  fap_walker* w = nullptr;
  check(fap_walker_new(capacity, &w), "walker");
  Walker owned(w);
  check(fap_walker_run(w, budget, nullptr, nullptr), "walk");
  if (fap_walker_degraded(w))
    std::cerr << "warning: seen-map capacity reached; only milestones are indexed past that point\n";
  return owned;
}

struct Settings {
  std::uint64_t budget = 0;
  std::uint64_t bit_budget = 0;
  std::uint64_t capacity = 0;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* sub, Settings& s, bool with_format) {
  sub->add_option("--bit-budget", s.bit_budget, "Bits allowed for exact big-integer counts (0: library default)");
  sub->add_option("--capacity", s.capacity, "Entries of the orbit seen-map (0: library default)");
  sub->add_option("--seed", s.seed, "Random seed");
  sub->add_option("--out", s.out, "Output file (default stdout)");
  if (with_format)
    sub->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"csv", "json", "dot"}));
}

int cmd_walk(const Settings& s, const std::string& milestones_path) {
  fap_walker* raw = nullptr;
  check(fap_walker_new(s.capacity, &raw), "walker");
  Walker w(raw);
  Output out(s.out);
  struct Sink {
    std::ostream* os;
    std::string line;
  } sink{&out.stream(), {}};
  const auto emit = [](void* user, uint64_t index, const char* tuple, int rule) {
    auto* k = static_cast<Sink*>(user);
    k->line = std::to_string(index);
    k->line += '\t';
    k->line += tuple;
    k->line += '\t';
    k->line += rule ? std::to_string(rule) : "-";
    k->line += '\n';
    *k->os << k->line;
  };
  check(fap_walker_run(raw, s.budget, emit, &sink), "walk");
  out.close();
  if (fap_walker_degraded(raw))
    std::cerr << "warning: seen-map capacity reached after " << fap_walker_index(raw)
              << " steps; later tuples are not indexed\n";
  if (!milestones_path.empty()) {
    char* json = nullptr;
    check(fap_walker_milestones_json(raw, &json), "milestones");
    Output m(milestones_path);
    m.stream() << take(json) << "\n";
    m.close();
  }
  return 0;
}

int cmd_rn(const Settings& s, std::size_t n_max, const std::string& method) {
  Walker w;
  if (method == "walk" || (method == "best" && s.budget > 0)) w = make_walker(s.budget, s.capacity);
  char* table = nullptr;
  check(fap_r_table(n_max, method.c_str(), w.get(), s.bit_budget, parse_format(s.format), &table), "rn");
  Output out(s.out);
  out.stream() << take(table);
  out.close();
  return 0;
}

int cmd_sn(const Settings& s, std::size_t n_max, const std::string& psi, const std::string& psi0,
           const std::string& strategy) {
  Walker w;
  if (psi == "tower" && s.budget > 0) w = make_walker(s.budget, s.capacity);
  char* table = nullptr;
  check(fap_s_table(psi.c_str(), psi0.c_str(), n_max, strategy.empty() ? nullptr : strategy.c_str(), w.get(),
                    s.bit_budget, parse_format(s.format), &table),
        "sn");
  Output out(s.out);
  out.stream() << take(table);
  out.close();
  return 0;
}

int cmd_verify(const Settings& s, const std::string& suite, std::uint64_t samples) {
  fap_verify_options o;
  fap_verify_options_init(&o);
  o.seed = s.seed;
  if (s.budget) o.walk_budget = s.budget;
  if (s.capacity) o.capacity = s.capacity;
  if (s.bit_budget) o.bit_budget = s.bit_budget;
  if (samples) o.samples = samples;
  std::vector<std::string> suites;
  if (suite == "all") {
    std::istringstream names(fap_verify_suites());
    for (std::string n; names >> n;) suites.push_back(n);
  } else {
    suites.push_back(suite);
  }
  Output out(s.out);
  bool all_passed = true;
  for (const auto& name : suites) {
    std::cerr << "running " << name << "\n";
    char* report = nullptr;
    int passed = 0;
    check(fap_verify(name.c_str(), &o, &report, &passed), "verify " + name);
    out.stream() << take(report);
    out.stream().flush();
    all_passed = all_passed && passed;
  }
  out.close();
  if (!all_passed) std::cerr << "verification failed\n";
  return all_passed ? 0 : 1;
}

int cmd_dfa_export(const Settings& s, const std::string& name) {
  const std::string fmt = s.format == "csv" ? "json" : s.format;
  char* text = nullptr;
  check(fap_dfa_export(name.c_str(), parse_format(fmt), &text), "dfa-export");
  Output out(s.out);
  out.stream() << take(text);
  out.close();
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Steps the machine on configurations recovered from the compressed form and
// checks them against plain stepping.
int cmd_tm_run(const Settings& s, const std::string& machine_path, const std::string& start,
               const std::string& run_symbol) {
  fap_machine* raw = nullptr;
  if (machine_path.empty())
    check(fap_machine_sample(&raw), "machine");
  else
    check(fap_machine_from_json(read_file(machine_path).c_str(), &raw), "machine");
  std::unique_ptr<fap_machine, MachineDeleter> m(raw);
  const char* x = run_symbol.empty() ? nullptr : run_symbol.c_str();

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  Output out(s.out);
  const bool json = s.format == "json";
  if (!json) out.stream() << "step\tconfiguration\tcompressed\n";
  const auto record = [&](std::uint64_t step, const std::string& cfg, const std::string& packed) {
    if (json)
      rows.push_back({{"step", step}, {"configuration", cfg}, {"compressed", packed}});
    else
      out.stream() << step << '\t' << cfg << '\t' << packed << '\n';
  };

  std::string plain = start;
  char* enc = nullptr;
  check(fap_machine_encode(raw, plain.c_str(), x, &enc), "encode");
  std::string packed = take(enc);
  record(0, plain, packed);
  std::uint64_t step = 0;
  for (; step < s.budget; ++step) {
    char* next = nullptr;
    int halted = 0;
    check(fap_machine_step(raw, plain.c_str(), &next, &halted), "step");
    if (halted) break;
    plain = take(next);
    char* decoded = nullptr;
    check(fap_machine_decode(raw, packed.c_str(), x, &decoded), "decode");
    char* via = nullptr;
    int halted_too = 0;
    check(fap_machine_step(raw, take(decoded).c_str(), &via, &halted_too), "step");
    const std::string other = take(via);
    if (halted_too || other != plain)
      throw Failure{"compressed run diverges at step " + std::to_string(step + 1) + ": " + other + " vs " + plain};
    check(fap_machine_encode(raw, other.c_str(), x, &enc), "encode");
    packed = take(enc);
    record(step + 1, plain, packed);
  }
  if (json) out.stream() << rows.dump(2) << "\n";
  out.close();
  if (step < s.budget) std::cerr << "halted after " << step << " steps\n";
  return 0;
}

int cmd_group_encode(const Settings& s, const std::string& spec, const std::string& word,
                     const std::optional<std::string>& decode, bool compressed_input) {
  fap_group* raw = nullptr;
  check(fap_group_new(spec.c_str(), &raw), "group");
  std::unique_ptr<fap_group, GroupDeleter> g(raw);
  char* name = nullptr;
  check(fap_group_name(raw, &name), "group");
  const std::string group_name = take(name);
  std::string standard, compressed;
  bool have_standard = true;
  if (decode) {
    char* other = nullptr;
    check(fap_group_decode(raw, decode->c_str(), compressed_input ? 1 : 0, &other), "decode");
    (compressed_input ? standard : compressed) = take(other);
    (compressed_input ? compressed : standard) = *decode;
  } else {
    char *st = nullptr, *c = nullptr;
    check(fap_group_encode(raw, word.c_str(), &st, &c), "encode");
    have_standard = st != nullptr;
    standard = take(st);
    compressed = take(c);
  }
  Output out(s.out);
  if (s.format == "json") {
    nlohmann::ordered_json doc{{"group", group_name}, {"compressed", compressed}};
    doc["standard"] = have_standard ? nlohmann::ordered_json(standard) : nlohmann::ordered_json(nullptr);
    out.stream() << doc.dump(2) << "\n";
  } else {
    out.stream() << "group\t" << group_name << "\n"
                 << "standard\t" << (have_standard ? standard : "(too long)") << "\n"
                 << "compressed\t" << compressed << "\n";
  }
  out.close();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic presentations, tower-growing orbits and compression rates"};
  app.set_version_flag("--version", std::string(fap_version()));
  app.require_subcommand(1);

  Settings sw, sr, ss, sv, sd, st, sg;

  auto* walk = app.add_subcommand("walk", "Walk the orbit of (0,0,1,1); prints index<TAB>a,b,c_exp,d<TAB>rule");
  std::string milestones;
  walk->add_option("--budget", sw.budget, "Number of applications of f")->default_val(23);
  walk->add_option("--milestones", milestones, "Write the milestone list as JSON to this file");
  add_common(walk, sw, false);

  auto* rn = app.add_subcommand("rn", "Bounds on r(n) for the tower presentation");
  std::size_t n_max = 3;
  std::string method = "best";
  rn->add_option("--n-max", n_max, "Largest n")->default_val(3);
  rn->add_option("--method", method, "best, walk, enumerate or symbolic")
      ->check(CLI::IsMember({"best", "walk", "enumerate", "symbolic"}));
  rn->add_option("--budget", sr.budget, "Orbit steps walked for the walk-based bound")->default_val(1000000);
  add_common(rn, sr, true);

  auto* sn = app.add_subcommand("sn", "Compression rate s(n) of one presentation against another");
  std::string psi = "base-4", psi0 = "base-2", strategy;
  sn->add_option("--psi", psi, "Presentation measured (unary, base-<k>, loose-base-<k>, tower)");
  sn->add_option("--psi0", psi0, "Reference presentation");
  sn->add_option("--strategy", strategy, "exhaustive, value-max or orbit-assisted");
  sn->add_option("--n-max", n_max, "Largest n")->default_val(3);
  sn->add_option("--budget", ss.budget, "Orbit steps walked for the tower presentation")->default_val(1000000);
  add_common(sn, ss, true);

  auto* ver = app.add_subcommand("verify", "Run a verification suite; nonzero exit on failure");
  std::string suite;
  std::uint64_t samples = 0;
  ver->add_option("suite", suite, "props, lemmas, automata, presburger, tm, groups or all")
      ->required()
      ->check(CLI::IsMember({"props", "lemmas", "automata", "presburger", "tm", "groups", "all"}));
  ver->add_option("--budget", sv.budget, "Orbit steps for walk-based checks (0: default)");
  ver->add_option("--samples", samples, "Random cases per sampled check (0: default)");
  add_common(ver, sv, false);

  auto* dfa = app.add_subcommand("dfa-export", "Write an automaton as JSON or Graphviz dot");
  std::string dfa_name;
  dfa->add_option("name", dfa_name,
                  "language, graph-f, tm-config, tm-step, a primitive (increment, ...), or <presentation>:<relation>")
      ->required();
  add_common(dfa, sd, true);

  auto* tm = app.add_subcommand("tm-run", "Run a Turing machine through its compressed configurations");
  std::string machine_path, start = "g g g q0 _", run_symbol;
  tm->add_option("--machine", machine_path, "Machine definition (JSON); the sample counter by default");
  tm->add_option("--config", start, "Start configuration, space-separated tokens");
  tm->add_option("--run-symbol", run_symbol, "Symbol whose leading run is compressed");
  tm->add_option("--budget", st.budget, "Steps")->default_val(100);
  add_common(tm, st, true);

  auto* grp = app.add_subcommand("group-encode", "Standard and compressed strings of a group element");
  std::string spec = "bs:1,2", word;
  std::optional<std::string> decode;
  bool compressed_input = false;
  grp->add_option("--group", spec, "free-abelian:<m>, free:<m>, bs:<p>,<q> or semidirect:<a11>,<a12>,<a21>,<a22>");
  grp->add_option("--word", word, "Product of generators, e.g. \"t a a t^-1\"");
  grp->add_option("--decode", decode, "Read this string instead of a word");
  grp->add_flag("--compressed", compressed_input, "The --decode string is in compressed form");
  add_common(grp, sg, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*walk) return cmd_walk(sw, milestones);
    if (*rn) return cmd_rn(sr, n_max, method);
    if (*sn) return cmd_sn(ss, n_max, psi, psi0, strategy);
    if (*ver) return cmd_verify(sv, suite, samples);
    if (*dfa) return cmd_dfa_export(sd, dfa_name);
    if (*tm) return cmd_tm_run(st, machine_path, start, run_symbol);
    if (*grp) return cmd_group_encode(sg, spec, word, decode, compressed_input);
  } catch (const Failure& f) {
    std::cerr << "fapres: " << f.message << "\n";
    return 1;
  }
  return 2;
}
