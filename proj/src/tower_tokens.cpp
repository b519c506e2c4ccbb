#include "fapres/tower_tokens.hpp"

#include "fapres/error.hpp"
#include "fapres/orbit.hpp"

#include <map>
#include <sstream>

namespace fapres::apps {

namespace {

const std::map<std::string, automata::Code, std::less<>>& token_codes() {
  static const auto codes = [] {
    std::map<std::string, automata::Code, std::less<>> m;
    const auto& alpha = towerpres::tuple_alphabet();
    for (automata::Code c = 0; c < alpha->size(); ++c) m.emplace("<" + alpha->name(c) + ">", c);
    return m;
  }();
  return codes;
}

}  // namespace

Tokens tower_tokens(const BigInt& k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "u_k needs k >= 0");
  const auto w = towerpres::encode_tuple(towerpres::orbit_tuple_at(k));
  Tokens out;
  for (automata::Code c : w.columns()) out.push_back("<" + w.alphabet()->name(c) + ">");
  return out;
}

bool is_tower_token(std::string_view token) { return token_codes().contains(token); }

const Tokens& tower_token_alphabet() {
  static const Tokens all = [] {
    Tokens t;
    const auto& alpha = towerpres::tuple_alphabet();
    for (automata::Code c = 0; c < alpha->size(); ++c) t.push_back("<" + alpha->name(c) + ">");
    return t;
  }();
  return all;
}

std::pair<BigInt, std::size_t> read_tower_prefix(std::span<const std::string> tokens) {
  std::vector<automata::Code> cols;
  for (const std::string& t : tokens) {
    auto it = token_codes().find(t);
    if (it == token_codes().end()) break;
    cols.push_back(it->second);
  }
  if (cols.empty()) throw Error(ErrorCode::Malformed, "missing tower prefix");
  if (!automata::ConvolutionString::well_formed(*towerpres::tuple_alphabet(), cols))
    throw Error(ErrorCode::Malformed, "tower prefix is not a convolution");
  const std::size_t run = cols.size();
  const auto v = towerpres::decode_string(automata::ConvolutionString(towerpres::tuple_alphabet(), std::move(cols)));
  if (!v) throw Error(ErrorCode::Malformed, "tower prefix does not encode a tuple");
  const towerpres::TowerBound k = towerpres::orbit_index_fast(*v);
  if (!k.is_exact()) throw Error(ErrorCode::Budget, "run length " + k.to_string() + " is too large to hold");
  return {k.value(), run};
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Tokens split_tokens(std::string_view text) {
  std::istringstream in{std::string(text)};
  Tokens out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace fapres::apps
