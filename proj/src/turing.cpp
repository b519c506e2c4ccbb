#include "fapres/turing.hpp"

#include "fapres/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace fapres::apps {

using automata::AlphabetPtr;
using automata::Code;
using automata::Dfa;
using automata::TrackAlphabet;
using towerpres::TowerBound;

namespace {

void check_token(const std::string& t, const char* what) {
  if (t.empty() || t.find_first_of(" \t\r\n") != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " '" + t + "' must be a nonempty word");
  if (is_tower_token(t) || t.front() == '<')
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " '" + t + "' collides with the tower alphabet");
}

Move parse_move(const std::string& s) {
  if (s == "L") return Move::Left;
  if (s == "R") return Move::Right;
  throw Error(ErrorCode::Malformed, "move must be L or R, got '" + s + "'");
}

}  // namespace

TuringMachine::TuringMachine(std::vector<std::string> gamma, std::vector<std::string> states, std::string q0,
                             std::vector<TmRule> rules)
    : gamma_(std::move(gamma)), states_(std::move(states)), q0_(std::move(q0)), rules_(std::move(rules)) {
  if (gamma_.size() < 2) throw Error(ErrorCode::InvalidArgument, "tape alphabet needs a blank and one more symbol");
  if (states_.empty()) throw Error(ErrorCode::InvalidArgument, "no states");
  std::set<std::string> seen;
  for (const auto& g : gamma_) {
    check_token(g, "tape symbol");
    if (!seen.insert(g).second) throw Error(ErrorCode::InvalidArgument, "repeated symbol '" + g + "'");
  }
  for (const auto& q : states_) {
    check_token(q, "state");
    if (!seen.insert(q).second) throw Error(ErrorCode::InvalidArgument, "state '" + q + "' repeats or is also a tape symbol");
  }
  if (!is_state(q0_)) throw Error(ErrorCode::InvalidArgument, "initial state '" + q0_ + "' is not a state");
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const TmRule& r = rules_[i];
    if (!is_state(r.state) || !is_state(r.next) || !is_symbol(r.read) || !is_symbol(r.write))
      throw Error(ErrorCode::InvalidArgument, "rule " + std::to_string(i) + " uses unknown symbols");
    if (!index_.emplace(std::pair{r.state, r.read}, i).second)
      throw Error(ErrorCode::InvalidArgument, "two rules for (" + r.state + ", " + r.read + ")");
  }
  std::vector<std::string> all = gamma_;
  all.insert(all.end(), states_.begin(), states_.end());
  alphabet_ = TrackAlphabet::uniform(std::move(all), 1);
}

bool TuringMachine::is_symbol(const std::string& t) const {
  return std::find(gamma_.begin(), gamma_.end(), t) != gamma_.end();
}

bool TuringMachine::is_state(const std::string& t) const {
  return std::find(states_.begin(), states_.end(), t) != states_.end();
}

const TmRule* TuringMachine::rule(const std::string& state, const std::string& read) const {
  auto it = index_.find({state, read});
  return it == index_.end() ? nullptr : &rules_[it->second];
}

TuringMachine TuringMachine::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    std::vector<TmRule> rules;
    for (const auto& c : doc.at("commands"))
      rules.push_back({c.at("state").get<std::string>(), c.at("read").get<std::string>(),
                       c.at("write").get<std::string>(), parse_move(c.at("move").get<std::string>()),
                       c.at("next").get<std::string>()});
    return TuringMachine(doc.at("gamma").get<std::vector<std::string>>(),
                         doc.at("states").get<std::vector<std::string>>(), doc.at("q0").get<std::string>(),
                         std::move(rules));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("machine file: ") + e.what());
  }
}

std::string TuringMachine::to_json() const {
  nlohmann::ordered_json doc;
  doc["gamma"] = gamma_;
  doc["states"] = states_;
  doc["q0"] = q0_;
  doc["commands"] = nlohmann::ordered_json::array();
  for (const TmRule& r : rules_)
    doc["commands"].push_back({{"state", r.state},
                               {"read", r.read},
                               {"write", r.write},
                               {"move", r.move == Move::Left ? "L" : "R"},
                               {"next", r.next}});
  return doc.dump(2);
}

TuringMachine TuringMachine::sample() {
  return TuringMachine({"_", "g", "0", "1"}, {"q0", "q1"}, "q0",
                       {
                           {"q0", "g", "g", Move::Right, "q0"},
                           {"q0", "1", "0", Move::Right, "q0"},
                           {"q0", "0", "1", Move::Left, "q1"},
                           {"q0", "_", "1", Move::Left, "q1"},
                           {"q1", "0", "0", Move::Left, "q1"},
                           {"q1", "1", "1", Move::Left, "q1"},
                           {"q1", "g", "g", Move::Right, "q0"},
                       });
}

Tokens TmConfig::render() const {
  Tokens out(tape.begin(), tape.begin() + static_cast<std::ptrdiff_t>(std::min(head, tape.size())));
  out.push_back(state);
  out.insert(out.end(), tape.begin() + static_cast<std::ptrdiff_t>(std::min(head, tape.size())), tape.end());
  return out;
}

TmConfig parse_config(const TuringMachine& m, std::span<const std::string> tokens) {
  TmConfig cfg;
  bool have_state = false;
  for (const std::string& t : tokens) {
    if (m.is_state(t)) {
      if (have_state) throw Error(ErrorCode::Malformed, "configuration has two states");
      have_state = true;
      cfg.state = t;
      cfg.head = cfg.tape.size();
    } else if (m.is_symbol(t)) {
      cfg.tape.push_back(t);
    } else {
      throw Error(ErrorCode::Malformed, "unknown token '" + t + "'");
    }
  }
  if (!have_state) throw Error(ErrorCode::Malformed, "configuration has no state");
  return cfg;
}

std::optional<TmConfig> tm_step(const TuringMachine& m, const TmConfig& cfg) {
  const bool beyond = cfg.head >= cfg.tape.size();
  const TmRule* r = m.rule(cfg.state, beyond ? m.blank() : cfg.tape[cfg.head]);
  if (!r) return std::nullopt;
  if (r->move == Move::Left && cfg.head == 0) return std::nullopt;
  TmConfig out = cfg;
  if (beyond)
    out.tape.push_back(r->write);
  else
    out.tape[cfg.head] = r->write;
  out.head = r->move == Move::Left ? cfg.head - 1 : cfg.head + 1;
  out.state = r->next;
  return out;
}

automata::ConvolutionString config_string(const TuringMachine& m, const TmConfig& cfg) {
  const AlphabetPtr& alpha = m.config_alphabet();
  std::vector<Code> cols;
  for (const std::string& t : cfg.render()) cols.push_back(alpha->digit_of(0, t));
  return automata::ConvolutionString(alpha, std::move(cols));
}

TmConfig config_from_string(const TuringMachine& m, const automata::ConvolutionString& w) {
  Tokens tokens;
  for (Code c : w.columns()) tokens.push_back(w.alphabet()->name(c));
  return parse_config(m, tokens);
}

Dfa tm_config_dfa(const TuringMachine& m) {
  const AlphabetPtr& alpha = m.config_alphabet();
  const std::size_t g = m.gamma().size();
  return automata::minimize(automata::explore(
      alpha, 0,
      [&](int seen_state, Code c) -> std::optional<int> {
        if (c < g) return seen_state;
        if (seen_state) return std::nullopt;
        return 1;
      },
      [](int seen_state) { return seen_state == 1; }));
}

namespace {

enum class Phase { Before, RightPending, LeftPending1, LeftPending2, Copy, Done };

struct RelState {
  Phase phase = Phase::Before;
  int x = -1;  // RightPending: q, b   LeftPending1: e, p   LeftPending2: q, p
  int y = -1;
  auto operator<=>(const RelState&) const = default;
};

}  // namespace

Dfa tm_step_relation_dfa(const TuringMachine& m) {
  const AlphabetPtr& inner = m.config_alphabet();
  const AlphabetPtr pair = TrackAlphabet::nested(inner, 2);
  const int g = static_cast<int>(m.gamma().size());
  const int pad = static_cast<int>(inner->size());
  auto symbol = [&](int i) -> const std::string& {
    return i < g ? m.gamma()[static_cast<std::size_t>(i)] : m.states()[static_cast<std::size_t>(i - g)];
  };
  auto is_gamma = [&](int i) { return i >= 0 && i < g; };
  auto is_q = [&](int i) { return i >= g && i < pad; };
  // rule (q, read) with read = blank when alpha has ended
  auto matches = [&](int q, int read, int write, Move move, int next) {
    const TmRule* r = m.rule(symbol(q), read == pad ? m.blank() : symbol(read));
    return r && r->move == move && r->write == symbol(write) && r->next == symbol(next);
  };

  return automata::minimize(automata::explore(
      pair, RelState{},
      [&](RelState s, Code c) -> std::optional<RelState> {
        const int a = static_cast<int>(pair->digit(c, 0));
        const int b = static_cast<int>(pair->digit(c, 1));
        switch (s.phase) {
          case Phase::Before:
            if (is_gamma(a) && a == b) return s;
            if (is_q(a) && is_gamma(b)) return RelState{Phase::RightPending, a, b};
            if (is_gamma(a) && is_q(b)) return RelState{Phase::LeftPending1, a, b};
            return std::nullopt;
          case Phase::RightPending:
            if (!(is_gamma(a) || a == pad) || !is_q(b)) return std::nullopt;
            if (!matches(s.x, a, s.y, Move::Right, b)) return std::nullopt;
            return RelState{a == pad ? Phase::Done : Phase::Copy, -1, -1};
          case Phase::LeftPending1:
            if (!is_q(a) || b != s.x) return std::nullopt;
            return RelState{Phase::LeftPending2, a, s.y};
          case Phase::LeftPending2:
            if (!(is_gamma(a) || a == pad) || !is_gamma(b)) return std::nullopt;
            if (!matches(s.x, a, b, Move::Left, s.y)) return std::nullopt;
            return RelState{a == pad ? Phase::Done : Phase::Copy, -1, -1};
          case Phase::Copy:
            if (is_gamma(a) && a == b) return s;
            return std::nullopt;
          case Phase::Done:
            return std::nullopt;
        }
        return std::nullopt;
      },
      [](const RelState& s) { return s.phase == Phase::Copy || s.phase == Phase::Done; }));
}

namespace {

void check_gamma(const TuringMachine& m, const std::string& gamma_symbol) {
  if (!m.is_symbol(gamma_symbol) || gamma_symbol == m.blank())
    throw Error(ErrorCode::InvalidArgument, "run symbol must be a nonblank tape symbol");
}

}  // namespace

Tokens tm_encode(const TuringMachine& m, const TmConfig& cfg, const std::string& gamma_symbol) {
  check_gamma(m, gamma_symbol);
  const Tokens plain = cfg.render();
  parse_config(m, plain);
  std::size_t k = 0;
  while (k < plain.size() && plain[k] == gamma_symbol) ++k;
  Tokens out = tower_tokens(k);
  out.insert(out.end(), plain.begin() + static_cast<std::ptrdiff_t>(k), plain.end());
  return out;
}

TmSplit tm_decode_split(const TuringMachine& m, std::span<const std::string> w, const std::string& gamma_symbol) {
  check_gamma(m, gamma_symbol);
  auto [k, run] = read_tower_prefix(w);
  TmSplit out{std::move(k), Tokens(w.begin() + static_cast<std::ptrdiff_t>(run), w.end())};
  if (!out.rest.empty() && out.rest.front() == gamma_symbol)
    throw Error(ErrorCode::Malformed, "the run of " + gamma_symbol + " must be folded into the prefix");
  parse_config(m, out.rest);
  return out;
}

TmConfig tm_decode(const TuringMachine& m, std::span<const std::string> w, const std::string& gamma_symbol,
                   std::uint64_t max_run) {
  const TmSplit split = tm_decode_split(m, w, gamma_symbol);
  if (split.k > max_run) throw Error(ErrorCode::Budget, "run of " + split.k.str() + " symbols is too long to expand");
  Tokens plain(static_cast<std::size_t>(split.k), gamma_symbol);
  plain.insert(plain.end(), split.rest.begin(), split.rest.end());
  return parse_config(m, plain);
}

TmRate tm_s_lower(const TuringMachine& m, std::size_t n, const towerpres::OrbitWalker* walker,
                  std::size_t enumerate_limit) {
  TmRate out{TowerBound::exact(0), true, {}};
  if (n < 2) return out;
  bool have = false;
  for (std::size_t j = 1; j < n; ++j) {
    const towerpres::RBound r = towerpres::r_best(j, walker, enumerate_limit);
    if (!r.exact) out.exact = false;
    // T(h) + (n - j) is still at least T(h)
    const TowerBound v = r.value.is_exact() ? TowerBound::exact(r.value.value() + (n - j)) : r.value;
    if (!have || !(towerpres::stronger_lower_bound(out.value, v) == out.value)) {
      out.value = v;
      out.witness.clear();
      if (r.witness) {
        const automata::ConvolutionString u = towerpres::encode_tuple(*r.witness);
        for (automata::Code c : u.columns()) out.witness.push_back("<" + u.alphabet()->name(c) + ">");
        out.witness.push_back(m.q0());
        out.witness.resize(out.witness.size() + (n - 1 - towerpres::encoding_length(*r.witness).convert_to<std::size_t>()),
                           m.blank());
      }
      have = true;
    }
  }
  return out;
}

}  // namespace fapres::apps
