#include "fapres/automata.hpp"

#include <json.hpp>

#include <map>
#include <sstream>

namespace fapres::automata {

namespace {

using nlohmann::json;

json alphabet_json(const TrackAlphabet& alphabet) {
  json j;
  j["tracks"] = alphabet.track_count();
  if (alphabet.inner()) {
    j["inner"] = alphabet_json(*alphabet.inner());
  } else {
    json symbols = json::array();
    for (std::size_t t = 0; t < alphabet.track_count(); ++t) symbols.push_back(alphabet.base_symbols(t));
    j["symbols"] = symbols;
  }
  return j;
}

AlphabetPtr alphabet_from_json(const json& j) {
  const std::size_t tracks = j.at("tracks").get<std::size_t>();
  if (j.contains("inner")) return TrackAlphabet::nested(alphabet_from_json(j.at("inner")), tracks);
  auto symbols = j.at("symbols").get<std::vector<std::vector<std::string>>>();
  if (symbols.size() != tracks) throw Error(ErrorCode::Malformed, "symbols list does not match track count");
  return TrackAlphabet::make(std::move(symbols));
}

}  // namespace

std::string to_json(const Dfa& d) {
  json j = alphabet_json(*d.alphabet());
  j["states"] = d.state_count();
  j["start"] = d.start();
  json accepting = json::array();
  for (StateId s = 0; s < d.state_count(); ++s)
    if (d.is_accepting(s)) accepting.push_back(s);
  j["accepting"] = accepting;
  const auto sink = d.sink();
  j["sink"] = sink ? json(*sink) : json(nullptr);
  json transitions = json::array();
  for (StateId s = 0; s < d.state_count(); ++s) {
    if (sink && s == *sink) continue;
    auto row = d.row(s);
    for (Code c = 0; c < row.size(); ++c) {
      if (sink && row[c] == *sink) continue;
      transitions.push_back(json::array({s, c, row[c]}));
    }
  }
  j["transitions"] = transitions;
  return j.dump();
}

Dfa from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("automaton JSON: ") + e.what());
  }
  try {
    auto alphabet = alphabet_from_json(j);
    const std::size_t states = j.at("states").get<std::size_t>();
    if (states == 0) throw Error(ErrorCode::Malformed, "automaton without states");
    const std::size_t width = alphabet->size();
    constexpr StateId kUnset = ~StateId{0};
    std::vector<StateId> table(states * width, kUnset);
    std::vector<bool> accepting(states, false);
    for (const auto& s : j.at("accepting")) {
      const auto id = s.get<std::size_t>();
      if (id >= states) throw Error(ErrorCode::Malformed, "accepting state out of range");
      accepting[id] = true;
    }
    std::optional<StateId> sink;
    if (!j.at("sink").is_null()) sink = j.at("sink").get<StateId>();
    if (sink && *sink >= states) throw Error(ErrorCode::Malformed, "sink state out of range");
    for (const auto& t : j.at("transitions")) {
      const auto from = t.at(0).get<std::size_t>();
      const auto code = t.at(1).get<std::size_t>();
      const auto to = t.at(2).get<StateId>();
      if (from >= states || code >= width || to >= states)
        throw Error(ErrorCode::Malformed, "transition out of range");
      table[from * width + code] = to;
    }
    for (StateId& t : table) {
      if (t != kUnset) continue;
      if (!sink) throw Error(ErrorCode::Malformed, "missing transitions and no sink state");
      t = *sink;
    }
    return Dfa(alphabet, j.at("start").get<StateId>(), std::move(table), std::move(accepting));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("automaton JSON: ") + e.what());
  }
}

std::string to_dot(const Dfa& d, std::string_view graph_name) {
  constexpr std::size_t kMaxLabels = 8;
  const auto& alphabet = *d.alphabet();
  const auto sink = d.sink();
  std::ostringstream out;
  out << "digraph " << graph_name << " {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (StateId s = 0; s < d.state_count(); ++s) {
    if (sink && s == *sink) continue;
    out << "  q" << s << " [shape=" << (d.is_accepting(s) ? "doublecircle" : "circle") << "];\n";
  }
  out << "  __start -> q" << d.start() << ";\n";
  for (StateId s = 0; s < d.state_count(); ++s) {
    if (sink && s == *sink) continue;
    std::map<StateId, std::vector<Code>> edges;
    auto row = d.row(s);
    for (Code c = 0; c < row.size(); ++c)
      if (!sink || row[c] != *sink) edges[row[c]].push_back(c);
    for (const auto& [to, codes] : edges) {
      out << "  q" << s << " -> q" << to << " [label=\"";
      for (std::size_t i = 0; i < codes.size() && i < kMaxLabels; ++i) {
        if (i) out << ", ";
        out << alphabet.name(codes[i]);
      }
      if (codes.size() > kMaxLabels) out << ", ... (+" << codes.size() - kMaxLabels << ")";
      out << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace fapres::automata
