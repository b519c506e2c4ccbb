#pragma once

// u_k, the tower-presentation string of k, written as a run of column tokens
// "<a|b|c|d>" so it can prefix strings over other alphabets.

#include "fapres/bigint.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fapres::apps {

using Tokens = std::vector<std::string>;

Tokens tower_tokens(const BigInt& k);
bool is_tower_token(std::string_view token);
// Every token a tower column, in the column order of the tuple alphabet.
const Tokens& tower_token_alphabet();

// Reads the maximal run of tower tokens at the front of `tokens` and returns
// (k, run length). Throws Malformed when the run is empty or is not some u_k,
// Budget when k is too large to hold exactly.
std::pair<BigInt, std::size_t> read_tower_prefix(std::span<const std::string> tokens);

// Space-separated.
std::string join_tokens(std::span<const std::string> tokens);
Tokens split_tokens(std::string_view text);

}  // namespace fapres::apps
