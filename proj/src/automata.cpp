#include "fapres/automata.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

namespace fapres::automata {

namespace {

constexpr std::size_t kMaxAlphabet = std::size_t{1} << 24;

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void require_same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) throw Error(ErrorCode::AlphabetMismatch, "automata over different alphabets");
}

}  // namespace

// ---------------------------------------------------------------------------
// TrackAlphabet

AlphabetPtr TrackAlphabet::make(std::vector<std::vector<std::string>> base_per_track) {
  if (base_per_track.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet needs at least one track");
  for (const auto& track : base_per_track) {
    if (track.empty()) throw Error(ErrorCode::InvalidArgument, "track with no base symbols");
    std::set<std::string> seen;
    for (const auto& s : track) {
      if (s == kPadding) throw Error(ErrorCode::InvalidArgument, "padding symbol used as a base symbol");
      if (!seen.insert(s).second) throw Error(ErrorCode::InvalidArgument, "duplicate base symbol '" + s + "'");
    }
  }
  auto alphabet = std::shared_ptr<TrackAlphabet>(new TrackAlphabet());
  alphabet->base_ = std::move(base_per_track);
  alphabet->finish();
  return alphabet;
}

AlphabetPtr TrackAlphabet::uniform(std::vector<std::string> base, std::size_t tracks) {
  return make(std::vector<std::vector<std::string>>(tracks, base));
}

AlphabetPtr TrackAlphabet::nested(AlphabetPtr inner, std::size_t outer_tracks) {
  if (!inner) throw Error(ErrorCode::InvalidArgument, "nested alphabet without inner alphabet");
  if (inner->inner()) throw Error(ErrorCode::InvalidArgument, "only one level of nesting is supported");
  std::vector<std::string> names;
  names.reserve(inner->size());
  for (Code c = 0; c < inner->size(); ++c) names.push_back("[" + inner->name(c) + "]");
  auto alphabet = std::shared_ptr<TrackAlphabet>(new TrackAlphabet());
  alphabet->base_.assign(outer_tracks, names);
  alphabet->inner_ = std::move(inner);
  alphabet->finish();
  return alphabet;
}

void TrackAlphabet::finish() {
  std::size_t total = 1;
  for (const auto& track : base_) {
    total *= track.size() + 1;
    if (total > kMaxAlphabet) throw Error(ErrorCode::Budget, "composite alphabet too large");
  }
  size_ = total - 1;
  const std::size_t k = base_.size();
  digits_.assign(size_ * k, 0);
  for (Code c = 0; c < size_; ++c) {
    std::size_t rest = c;
    for (std::size_t t = k; t-- > 0;) {
      const std::size_t radix = base_[t].size() + 1;
      digits_[c * k + t] = static_cast<std::uint32_t>(rest % radix);
      rest /= radix;
    }
  }
  if (inner_) {
    const std::size_t ik = inner_->track_count();
    flat_base_.clear();
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < ik; ++j) flat_base_.push_back(inner_->base_symbols(j));
    flat_digits_.assign(size_ * k * ik, 0);
    for (Code c = 0; c < size_; ++c) {
      for (std::size_t t = 0; t < k; ++t) {
        const std::uint32_t outer = digits_[c * k + t];
        for (std::size_t j = 0; j < ik; ++j) {
          const std::uint32_t d = outer == inner_->size() ? static_cast<std::uint32_t>(inner_->base_size(j))
                                                          : inner_->digit(outer, j);
          flat_digits_[c * k * ik + t * ik + j] = d;
        }
      }
    }
  } else {
    flat_base_ = base_;
    flat_digits_ = digits_;
  }
}

Code TrackAlphabet::compose(std::span<const std::uint32_t> digits) const {
  if (digits.size() != track_count()) throw Error(ErrorCode::Malformed, "column has wrong track count");
  std::size_t code = 0;
  bool all_pad = true;
  for (std::size_t t = 0; t < digits.size(); ++t) {
    const std::size_t radix = base_[t].size() + 1;
    if (digits[t] >= radix) throw Error(ErrorCode::Malformed, "symbol outside the base set");
    all_pad = all_pad && digits[t] == base_[t].size();
    code = code * radix + digits[t];
  }
  if (all_pad) throw Error(ErrorCode::Malformed, "all-padding column");
  return static_cast<Code>(code);
}

std::uint32_t TrackAlphabet::digit_of(std::size_t track, std::string_view name) const {
  const auto& symbols = base_.at(track);
  if (name == kPadding) return static_cast<std::uint32_t>(symbols.size());
  auto it = std::find(symbols.begin(), symbols.end(), name);
  if (it == symbols.end())
    throw Error(ErrorCode::Malformed, "symbol '" + std::string(name) + "' outside the base set");
  return static_cast<std::uint32_t>(it - symbols.begin());
}

std::string TrackAlphabet::name(Code c) const {
  std::vector<std::string> parts;
  for (std::size_t t = 0; t < track_count(); ++t) {
    const std::uint32_t d = digit(c, t);
    parts.push_back(d == base_[t].size() ? std::string(kPadding) : base_[t][d]);
  }
  return join(parts, "|");
}

bool TrackAlphabet::operator==(const TrackAlphabet& other) const {
  if (base_ != other.base_) return false;
  if (static_cast<bool>(inner_) != static_cast<bool>(other.inner_)) return false;
  return !inner_ || *inner_ == *other.inner_;
}

AlphabetPtr binary_tracks(std::size_t tracks) {
  static std::vector<AlphabetPtr> cache;
  static std::mutex guard;
  std::lock_guard lock(guard);
  if (cache.size() <= tracks) cache.resize(tracks + 1);
  if (!cache[tracks]) cache[tracks] = TrackAlphabet::uniform({"0", "1"}, tracks);
  return cache[tracks];
}

// ---------------------------------------------------------------------------
// ConvolutionString

ConvolutionString::ConvolutionString(AlphabetPtr alphabet, std::vector<Code> columns)
    : alphabet_(std::move(alphabet)), columns_(std::move(columns)) {
  if (!alphabet_) throw Error(ErrorCode::InvalidArgument, "convolution string without alphabet");
  for (Code c : columns_)
    if (c >= alphabet_->size()) throw Error(ErrorCode::Malformed, "column code out of range");
  if (!well_formed(*alphabet_, columns_)) throw Error(ErrorCode::Malformed, "padding is not a suffix on some track");
}

bool ConvolutionString::well_formed(const TrackAlphabet& alphabet, std::span<const Code> columns) {
  const std::size_t k = alphabet.flat_track_count();
  std::uint64_t padded = 0;
  for (Code c : columns) {
    if (c >= alphabet.size()) return false;
    for (std::size_t t = 0; t < k; ++t) {
      const bool pad = alphabet.flat_digit(c, t) == alphabet.flat_base_size(t);
      const std::uint64_t bit = std::uint64_t{1} << t;
      if (pad) {
        padded |= bit;
      } else if (padded & bit) {
        return false;
      }
    }
  }
  return true;
}

std::size_t ConvolutionString::track_length(std::size_t track) const {
  std::size_t n = 0;
  for (Code c : columns_)
    if (!alphabet_->is_padding(c, track)) ++n;
  return n;
}

std::vector<std::vector<std::uint32_t>> ConvolutionString::deconvolve() const {
  std::vector<std::vector<std::uint32_t>> tracks(alphabet_->track_count());
  for (Code c : columns_)
    for (std::size_t t = 0; t < tracks.size(); ++t)
      if (!alphabet_->is_padding(c, t)) tracks[t].push_back(alphabet_->digit(c, t));
  return tracks;
}

std::string ConvolutionString::to_string() const {
  std::vector<std::string> parts;
  for (Code c : columns_) parts.push_back(alphabet_->name(c));
  return join(parts, " ");
}

bool ConvolutionString::operator==(const ConvolutionString& other) const {
  return columns_ == other.columns_ && (alphabet_ == other.alphabet_ || *alphabet_ == *other.alphabet_);
}

ConvolutionString convolve(const AlphabetPtr& alphabet, const std::vector<std::vector<std::uint32_t>>& tracks) {
  if (tracks.empty()) throw Error(ErrorCode::InvalidArgument, "empty track list");
  if (tracks.size() != alphabet->track_count())
    throw Error(ErrorCode::InvalidArgument, "track count does not match the alphabet");
  std::size_t len = 0;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    len = std::max(len, tracks[t].size());
    for (std::uint32_t d : tracks[t])
      if (d >= alphabet->base_size(t)) throw Error(ErrorCode::Malformed, "symbol outside the base set");
  }
  std::vector<Code> columns;
  columns.reserve(len);
  std::vector<std::uint32_t> digits(tracks.size());
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t t = 0; t < tracks.size(); ++t)
      digits[t] = j < tracks[t].size() ? tracks[t][j] : static_cast<std::uint32_t>(alphabet->base_size(t));
    columns.push_back(alphabet->compose(digits));
  }
  return ConvolutionString(alphabet, std::move(columns));
}

ConvolutionString convolve(const AlphabetPtr& alphabet, const std::vector<std::string>& tracks) {
  std::vector<std::vector<std::uint32_t>> digits(tracks.size());
  if (tracks.size() != alphabet->track_count())
    throw Error(ErrorCode::InvalidArgument, "track count does not match the alphabet");
  for (std::size_t t = 0; t < tracks.size(); ++t)
    for (char ch : tracks[t]) digits[t].push_back(alphabet->digit_of(t, std::string_view(&ch, 1)));
  for (std::size_t t = 0; t < tracks.size(); ++t)
    for (std::uint32_t d : digits[t])
      if (d >= alphabet->base_size(t)) throw Error(ErrorCode::Malformed, "padding inside a track string");
  return convolve(alphabet, digits);
}

ConvolutionString convolve(const AlphabetPtr& nested_alphabet, const std::vector<ConvolutionString>& parts) {
  if (!nested_alphabet->inner()) throw Error(ErrorCode::InvalidArgument, "alphabet is not nested");
  std::vector<std::vector<std::uint32_t>> tracks;
  for (const auto& part : parts) {
    require_same_alphabet(part.alphabet(), nested_alphabet->inner());
    tracks.emplace_back(part.columns().begin(), part.columns().end());
  }
  return convolve(nested_alphabet, tracks);
}

std::vector<std::string> deconvolve_chars(const ConvolutionString& w) {
  const auto& alphabet = *w.alphabet();
  std::vector<std::string> out;
  auto tracks = w.deconvolve();
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    std::string s;
    for (std::uint32_t d : tracks[t]) s += alphabet.base_symbols(t)[d];
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(AlphabetPtr alphabet, StateId start, std::vector<StateId> table, std::vector<bool> accepting)
    : alphabet_(std::move(alphabet)), start_(start), table_(std::move(table)), accepting_(std::move(accepting)) {
  if (!alphabet_) throw Error(ErrorCode::InvalidArgument, "automaton without alphabet");
  width_ = alphabet_->size();
  if (accepting_.empty()) throw Error(ErrorCode::InvalidArgument, "automaton without states");
  if (table_.size() != accepting_.size() * width_) throw Error(ErrorCode::InvalidArgument, "transition table is not total");
  if (start_ >= accepting_.size()) throw Error(ErrorCode::InvalidArgument, "start state out of range");
  for (StateId t : table_)
    if (t >= accepting_.size()) throw Error(ErrorCode::InvalidArgument, "transition target out of range");
}

bool Dfa::accepts(const ConvolutionString& w) const {
  require_same_alphabet(alphabet_, w.alphabet());
  return accepts_columns(w.columns());
}

bool Dfa::accepts_columns(std::span<const Code> columns) const {
  StateId s = start_;
  for (Code c : columns) {
    if (c >= width_) throw Error(ErrorCode::AlphabetMismatch, "column code outside the alphabet");
    s = next(s, c);
  }
  return accepting_[s];
}

bool Dfa::operator==(const Dfa& other) const {
  return *alphabet_ == *other.alphabet_ && start_ == other.start_ && table_ == other.table_ &&
         accepting_ == other.accepting_;
}

bool Dfa::is_empty() const {
  std::vector<bool> seen(state_count(), false);
  std::vector<StateId> queue{start_};
  seen[start_] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const StateId s = queue[i];
    if (accepting_[s]) return false;
    for (StateId t : row(s)) {
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  return true;
}

std::optional<StateId> Dfa::sink() const {
  for (StateId s = 0; s < state_count(); ++s) {
    if (accepting_[s]) continue;
    auto r = row(s);
    if (std::all_of(r.begin(), r.end(), [s](StateId t) { return t == s; })) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constructions

Dfa well_formed_dfa(const AlphabetPtr& alphabet) {
  const std::size_t k = alphabet->flat_track_count();
  if (k > 64) throw Error(ErrorCode::Budget, "too many flat tracks");
  return explore(
      alphabet, std::uint64_t{0},
      [&](std::uint64_t padded, Code c) -> std::optional<std::uint64_t> {
        for (std::size_t t = 0; t < k; ++t) {
          const std::uint64_t bit = std::uint64_t{1} << t;
          if (alphabet->flat_digit(c, t) == alphabet->flat_base_size(t)) {
            padded |= bit;
          } else if (padded & bit) {
            return std::nullopt;
          }
        }
        return padded;
      },
      [](std::uint64_t) { return true; });
}

Dfa universal_dfa(const AlphabetPtr& alphabet) {
  return Dfa(alphabet, 0, std::vector<StateId>(alphabet->size(), 0), {true});
}

Dfa empty_dfa(const AlphabetPtr& alphabet) {
  return Dfa(alphabet, 0, std::vector<StateId>(alphabet->size(), 0), {false});
}

namespace {

template <typename Combine>
Dfa product(const Dfa& a, const Dfa& b, Combine combine) {
  require_same_alphabet(a.alphabet(), b.alphabet());
  const std::size_t width = a.alphabet()->size();
  const std::size_t nb = b.state_count();
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::uint64_t> pending;
  std::vector<StateId> table;
  std::vector<bool> accepting;
  auto intern = [&](StateId x, StateId y) {
    const std::uint64_t key = static_cast<std::uint64_t>(x) * nb + y;
    auto [it, inserted] = ids.emplace(key, static_cast<StateId>(pending.size()));
    if (inserted) {
      pending.push_back(key);
      accepting.push_back(combine(a.is_accepting(x), b.is_accepting(y)));
    }
    return it->second;
  };
  intern(a.start(), b.start());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const StateId x = static_cast<StateId>(pending[i] / nb);
    const StateId y = static_cast<StateId>(pending[i] % nb);
    auto ra = a.row(x);
    auto rb = b.row(y);
    table.resize((i + 1) * width);
    for (std::size_t c = 0; c < width; ++c) table[i * width + c] = intern(ra[c], rb[c]);
  }
  return Dfa(a.alphabet(), 0, std::move(table), std::move(accepting));
}

}  // namespace

Dfa intersect(const Dfa& a, const Dfa& b) {
  return minimize(product(a, b, [](bool x, bool y) { return x && y; }));
}

Dfa unite(const Dfa& a, const Dfa& b) {
  return minimize(product(a, b, [](bool x, bool y) { return x || y; }));
}

Dfa complement(const Dfa& d) {
  std::vector<StateId> table(d.state_count() * d.alphabet()->size());
  std::vector<bool> accepting(d.state_count());
  for (StateId s = 0; s < d.state_count(); ++s) {
    auto r = d.row(s);
    std::copy(r.begin(), r.end(), table.begin() + static_cast<std::ptrdiff_t>(s * r.size()));
    accepting[s] = !d.is_accepting(s);
  }
  Dfa flipped(d.alphabet(), d.start(), std::move(table), std::move(accepting));
  return intersect(flipped, well_formed_dfa(d.alphabet()));
}

Dfa minimize(const Dfa& d) {
  const std::size_t width = d.alphabet()->size();
  // Reachable states.
  std::vector<StateId> order{d.start()};
  std::vector<std::int64_t> index(d.state_count(), -1);
  index[d.start()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (StateId t : d.row(order[i])) {
      if (index[t] < 0) {
        index[t] = static_cast<std::int64_t>(order.size());
        order.push_back(t);
      }
    }
  }
  const std::size_t n = order.size();
  // Moore refinement over signatures (own class, successor classes).
  std::vector<std::uint32_t> cls(n);
  for (std::size_t i = 0; i < n; ++i) cls[i] = d.is_accepting(order[i]) ? 1 : 0;
  std::size_t classes = 0;
  {
    std::set<std::uint32_t> distinct(cls.begin(), cls.end());
    classes = distinct.size();
    if (classes == 1)
      std::fill(cls.begin(), cls.end(), 0);
  }
  struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (std::uint32_t x : v) {
        h ^= x;
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };
  std::vector<std::uint32_t> sig(width + 1);
  while (true) {
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> ids;
    std::vector<std::uint32_t> next_cls(n);
    for (std::size_t i = 0; i < n; ++i) {
      sig[0] = cls[i];
      auto r = d.row(order[i]);
      for (std::size_t c = 0; c < width; ++c) sig[c + 1] = cls[static_cast<std::size_t>(index[r[c]])];
      auto [it, inserted] = ids.emplace(sig, static_cast<std::uint32_t>(ids.size()));
      next_cls[i] = it->second;
    }
    const std::size_t refined = ids.size();
    cls.swap(next_cls);
    if (refined == classes) break;
    classes = refined;
  }
  // Quotient, renumbered breadth-first from the start in code order.
  std::vector<std::size_t> representative(classes, n);
  for (std::size_t i = 0; i < n; ++i)
    if (representative[cls[i]] == n) representative[cls[i]] = i;
  std::vector<std::int64_t> renumber(classes, -1);
  std::vector<std::uint32_t> bfs{cls[0]};
  renumber[cls[0]] = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    auto r = d.row(order[representative[bfs[i]]]);
    for (std::size_t c = 0; c < width; ++c) {
      const std::uint32_t k = cls[static_cast<std::size_t>(index[r[c]])];
      if (renumber[k] < 0) {
        renumber[k] = static_cast<std::int64_t>(bfs.size());
        bfs.push_back(k);
      }
    }
  }
  std::vector<StateId> table(bfs.size() * width);
  std::vector<bool> accepting(bfs.size());
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    const StateId original = order[representative[bfs[i]]];
    accepting[i] = d.is_accepting(original);
    auto r = d.row(original);
    for (std::size_t c = 0; c < width; ++c)
      table[i * width + c] =
          static_cast<StateId>(renumber[cls[static_cast<std::size_t>(index[r[c]])]]);
  }
  return Dfa(d.alphabet(), 0, std::move(table), std::move(accepting));
}

bool equivalent(const Dfa& a, const Dfa& b) {
  require_same_alphabet(a.alphabet(), b.alphabet());
  return minimize(a) == minimize(b);
}

Dfa lift(const Dfa& d, const AlphabetPtr& target, std::span<const std::size_t> flat_track_map) {
  const auto& source = *d.alphabet();
  if (source.inner()) throw Error(ErrorCode::InvalidArgument, "cannot lift an automaton over a nested alphabet");
  if (flat_track_map.size() != source.track_count())
    throw Error(ErrorCode::InvalidArgument, "track map size does not match the automaton");
  for (std::size_t i = 0; i < flat_track_map.size(); ++i) {
    if (flat_track_map[i] >= target->flat_track_count())
      throw Error(ErrorCode::InvalidArgument, "track map points outside the target alphabet");
    if (source.base_symbols(i) != target->flat_base_symbols(flat_track_map[i]))
      throw Error(ErrorCode::AlphabetMismatch, "lifted track has different base symbols");
  }
  constexpr Code kStay = ~Code{0};
  std::vector<Code> sub(target->size());
  std::vector<std::uint32_t> digits(source.track_count());
  for (Code c = 0; c < target->size(); ++c) {
    bool all_pad = true;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      digits[i] = target->flat_digit(c, flat_track_map[i]);
      all_pad = all_pad && digits[i] == source.base_size(i);
    }
    sub[c] = all_pad ? kStay : source.compose(digits);
  }
  const std::size_t width = target->size();
  std::vector<StateId> table(d.state_count() * width);
  std::vector<bool> accepting(d.state_count());
  for (StateId s = 0; s < d.state_count(); ++s) {
    accepting[s] = d.is_accepting(s);
    for (Code c = 0; c < width; ++c) table[s * width + c] = sub[c] == kStay ? s : d.next(s, sub[c]);
  }
  return minimize(Dfa(target, d.start(), std::move(table), std::move(accepting)));
}

Dfa project(const Dfa& d, std::span<const std::size_t> keep) {
  const auto& source = *d.alphabet();
  const std::size_t k = source.track_count();
  std::vector<bool> kept(k, false);
  for (std::size_t t : keep) {
    if (t >= k || kept[t]) throw Error(ErrorCode::InvalidArgument, "bad projection track list");
    kept[t] = true;
  }
  if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "projection must keep a track");
  AlphabetPtr result;
  if (source.inner())
    result = keep.size() == 1 ? source.inner() : TrackAlphabet::nested(source.inner(), keep.size());
  else {
    std::vector<std::vector<std::string>> base;
    for (std::size_t t : keep) base.push_back(source.base_symbols(t));
    result = TrackAlphabet::make(std::move(base));
  }

  // Source codes grouped by the kept part: by_result[r] for result symbol r,
  // tail for columns whose kept tracks are all padding.
  std::vector<std::vector<Code>> by_result(result->size());
  std::vector<Code> tail;
  std::vector<std::uint32_t> sub(keep.size());
  for (Code c = 0; c < source.size(); ++c) {
    bool all_pad = true;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      sub[i] = source.digit(c, keep[i]);
      all_pad = all_pad && sub[i] == source.base_size(keep[i]);
    }
    if (all_pad)
      tail.push_back(c);
    else
      by_result[result->compose(sub)].push_back(c);
  }

  // States that reach acceptance through tail columns only.
  const std::size_t n = d.state_count();
  std::vector<bool> finishing(n, false);
  for (StateId s = 0; s < n; ++s) finishing[s] = d.is_accepting(s);
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (finishing[s]) continue;
      for (Code c : tail)
        if (finishing[d.next(s, c)]) {
          finishing[s] = true;
          changed = true;
          break;
        }
    }
  }

  using Subset = std::vector<StateId>;
  Dfa out = explore(
      result, Subset{d.start()},
      [&](const Subset& set, Code r) -> std::optional<Subset> {
        std::vector<bool> mark(n, false);
        Subset next;
        for (StateId s : set)
          for (Code c : by_result[r]) {
            const StateId t = d.next(s, c);
            if (!mark[t]) {
              mark[t] = true;
              next.push_back(t);
            }
          }
        if (next.empty()) return std::nullopt;
        std::sort(next.begin(), next.end());
        return next;
      },
      [&](const Subset& set) {
        return std::any_of(set.begin(), set.end(), [&](StateId s) { return static_cast<bool>(finishing[s]); });
      });
  return minimize(out);
}

// ---------------------------------------------------------------------------
// Enumeration

Enumeration::Enumeration(const Dfa& d, std::size_t max_len) : dfa_(&d), max_len_(max_len) {
  const std::size_t n = d.state_count();
  live_.assign(max_len + 1, std::vector<bool>(n, false));
  for (StateId s = 0; s < n; ++s) live_[0][s] = d.is_accepting(s);
  for (std::size_t r = 1; r <= max_len; ++r) {
    for (StateId s = 0; s < n; ++s) {
      for (StateId t : d.row(s)) {
        if (live_[r - 1][t]) {
          live_[r][s] = true;
          break;
        }
      }
    }
  }
}

bool Enumeration::advance_to_length(std::size_t len) {
  stack_.clear();
  word_.clear();
  length_ = len;
  return len <= max_len_;
}

std::optional<ConvolutionString> Enumeration::next() {
  const std::size_t width = dfa_->alphabet()->size();
  while (!done_) {
    if (stack_.empty()) {
      if (started_) {
        if (!advance_to_length(length_ + 1)) {
          done_ = true;
          break;
        }
      }
      started_ = true;
      if (!live_[length_][dfa_->start()]) continue;
      if (length_ == 0) return ConvolutionString(dfa_->alphabet(), {});
      stack_.push_back({dfa_->start(), 0});
    }
    Frame& top = stack_.back();
    const std::size_t remaining = length_ - word_.size();
    Code c = top.next_code;
    StateId target = 0;
    for (; c < width; ++c) {
      target = dfa_->next(top.state, c);
      if (live_[remaining - 1][target]) break;
    }
    if (c == width) {
      stack_.pop_back();
      if (!stack_.empty()) word_.pop_back();
      continue;
    }
    top.next_code = c + 1;
    if (remaining == 1) {
      std::vector<Code> out = word_;
      out.push_back(c);
      return ConvolutionString(dfa_->alphabet(), std::move(out));
    }
    word_.push_back(c);
    stack_.push_back({target, 0});
  }
  return std::nullopt;
}

void for_each_accepted(const Dfa& d, std::size_t max_len,
                       const std::function<bool(std::span<const Code>)>& visit) {
  Enumeration stream(d, max_len);
  while (auto w = stream.next())
    if (!visit(w->columns())) return;
}

// ---------------------------------------------------------------------------
// Reverse-binary primitives

namespace {

// Per-track reader for canonical base-k numerals with a padding suffix.
struct NumeralTrack {
  std::uint8_t len = 0;  // 0, 1, 2 (= two or more)
  std::uint8_t last = 0;
  bool padded = false;

  // Returns false when a digit follows padding.
  bool feed(std::uint32_t digit, std::uint32_t base) {
    if (digit == base) {
      padded = true;
      return true;
    }
    if (padded) return false;
    len = static_cast<std::uint8_t>(std::min(2, len + 1));
    last = static_cast<std::uint8_t>(digit != 0);
    return true;
  }
  bool valid() const { return len >= 1 && (last != 0 || len == 1); }
  auto operator<=>(const NumeralTrack&) const = default;
};

std::uint32_t value_digit(std::uint32_t digit, std::uint32_t base) { return digit == base ? 0 : digit; }

struct BinaryRelState {
  NumeralTrack x, y;
  std::uint8_t carry = 0;
  auto operator<=>(const BinaryRelState&) const = default;
};

// v = u + 1 on tracks (in, out).
Dfa increment_dfa(std::size_t in, std::size_t out) {
  const auto alphabet = binary_tracks(2);
  return explore(
      alphabet, BinaryRelState{NumeralTrack{}, NumeralTrack{}, 1},
      [&](BinaryRelState s, Code c) -> std::optional<BinaryRelState> {
        const std::uint32_t dx = alphabet->digit(c, in), dy = alphabet->digit(c, out);
        if (!s.x.feed(dx, 2) || !s.y.feed(dy, 2)) return std::nullopt;
        const std::uint32_t sum = value_digit(dx, 2) + s.carry;
        if (sum % 2 != value_digit(dy, 2)) return std::nullopt;
        s.carry = static_cast<std::uint8_t>(sum / 2);
        return s;
      },
      [](const BinaryRelState& s) { return s.x.valid() && s.y.valid() && s.carry == 0; });
}

// v = 2u on tracks (in, out): out is in delayed by one column.
Dfa double_dfa(std::size_t in, std::size_t out) {
  const auto alphabet = binary_tracks(2);
  return explore(
      alphabet, BinaryRelState{},
      [&](BinaryRelState s, Code c) -> std::optional<BinaryRelState> {
        const std::uint32_t dx = alphabet->digit(c, in), dy = alphabet->digit(c, out);
        if (!s.x.feed(dx, 2) || !s.y.feed(dy, 2)) return std::nullopt;
        if (value_digit(dy, 2) != s.carry) return std::nullopt;
        s.carry = static_cast<std::uint8_t>(value_digit(dx, 2));
        return s;
      },
      [](const BinaryRelState& s) { return s.x.valid() && s.y.valid() && s.carry == 0; });
}

Dfa equal_dfa() {
  const auto alphabet = binary_tracks(2);
  return explore(
      alphabet, BinaryRelState{},
      [&](BinaryRelState s, Code c) -> std::optional<BinaryRelState> {
        const std::uint32_t dx = alphabet->digit(c, 0), dy = alphabet->digit(c, 1);
        if (!s.x.feed(dx, 2) || !s.y.feed(dy, 2)) return std::nullopt;
        if (value_digit(dx, 2) != value_digit(dy, 2)) return std::nullopt;
        return s;
      },
      [](const BinaryRelState& s) { return s.x.valid() && s.y.valid(); });
}

struct PowerState {
  NumeralTrack x;
  std::uint8_t ones = 0;
  auto operator<=>(const PowerState&) const = default;
};

Dfa power_of_two_dfa() {
  const auto alphabet = binary_tracks(1);
  return explore(
      alphabet, PowerState{},
      [&](PowerState s, Code c) -> std::optional<PowerState> {
        const std::uint32_t d = alphabet->digit(c, 0);
        if (!s.x.feed(d, 2)) return std::nullopt;
        if (d == 1) {
          if (s.ones) return std::nullopt;
          s.ones = 1;
        }
        return s;
      },
      [](const PowerState& s) { return s.x.valid() && s.ones == 1; });
}

std::vector<std::uint32_t> reverse_binary_digits(unsigned value) {
  if (value == 0) return {0};
  std::vector<std::uint32_t> out;
  for (; value; value >>= 1) out.push_back(value & 1u);
  return out;
}

struct LiteralState {
  NumeralTrack x;
  std::uint8_t pos = 0;
  bool mismatch = false;
  auto operator<=>(const LiteralState&) const = default;
};

Dfa literal_dfa(unsigned value, bool negate) {
  const auto alphabet = binary_tracks(1);
  const auto target = reverse_binary_digits(value);
  return explore(
      alphabet, LiteralState{},
      [&](LiteralState s, Code c) -> std::optional<LiteralState> {
        const std::uint32_t d = alphabet->digit(c, 0);
        if (!s.x.feed(d, 2)) return std::nullopt;
        if (d == 2) return s;
        if (s.pos >= target.size() || target[s.pos] != d) s.mismatch = true;
        if (s.pos <= target.size()) ++s.pos;
        return s;
      },
      [&](const LiteralState& s) {
        const bool equal = !s.mismatch && s.pos == target.size();
        return s.x.valid() && (equal != negate);
      });
}

}  // namespace

Dfa numeral_dfa() {
  const auto alphabet = binary_tracks(1);
  return explore(
      alphabet, NumeralTrack{},
      [&](NumeralTrack s, Code c) -> std::optional<NumeralTrack> {
        if (!s.feed(alphabet->digit(c, 0), 2)) return std::nullopt;
        return s;
      },
      [](const NumeralTrack& s) { return s.valid(); });
}

Dfa numeral_equals(unsigned value) { return minimize(literal_dfa(value, false)); }
Dfa numeral_not_equals(unsigned value) { return minimize(literal_dfa(value, true)); }

std::optional<Primitive> primitive_from_name(std::string_view name) {
  static const std::pair<std::string_view, Primitive> table[] = {
      {"increment", Primitive::Increment}, {"decrement", Primitive::Decrement},
      {"double", Primitive::Double},       {"halve", Primitive::Halve},
      {"equal", Primitive::Equal},         {"is_power_of_two", Primitive::IsPowerOfTwo},
      {"copy", Primitive::Copy},
  };
  for (const auto& [n, p] : table)
    if (n == name) return p;
  return std::nullopt;
}

std::string_view primitive_name(Primitive p) {
  switch (p) {
    case Primitive::Increment: return "increment";
    case Primitive::Decrement: return "decrement";
    case Primitive::Double: return "double";
    case Primitive::Halve: return "halve";
    case Primitive::Equal: return "equal";
    case Primitive::IsPowerOfTwo: return "is_power_of_two";
    case Primitive::Copy: return "copy";
  }
  return "?";
}

Dfa build_primitive_relation(Primitive kind) {
  switch (kind) {
    case Primitive::Increment: return minimize(increment_dfa(0, 1));
    case Primitive::Decrement: return minimize(increment_dfa(1, 0));
    case Primitive::Double: return minimize(double_dfa(0, 1));
    case Primitive::Halve: return minimize(double_dfa(1, 0));
    case Primitive::Equal:
    case Primitive::Copy: return minimize(equal_dfa());
    case Primitive::IsPowerOfTwo: return minimize(power_of_two_dfa());
  }
  throw Error(ErrorCode::InvalidArgument, "unknown primitive relation");
}

// ---------------------------------------------------------------------------
// Pumping constants

namespace {

std::vector<std::size_t> track_lengths(const TrackAlphabet& alphabet, std::span<const Code> columns) {
  std::vector<std::size_t> lengths(alphabet.track_count(), 0);
  for (Code c : columns)
    for (std::size_t t = 0; t < lengths.size(); ++t)
      if (!alphabet.is_padding(c, t)) ++lengths[t];
  return lengths;
}

}  // namespace

std::size_t observed_gap(const Dfa& d, std::size_t output_track, std::size_t n_check) {
  const auto& alphabet = *d.alphabet();
  if (output_track >= alphabet.track_count()) throw Error(ErrorCode::InvalidArgument, "output track out of range");
  std::size_t gap = 0;
  for_each_accepted(d, n_check, [&](std::span<const Code> w) {
    const auto lengths = track_lengths(alphabet, w);
    for (std::size_t t = 0; t < lengths.size(); ++t)
      if (lengths[t] > lengths[output_track]) gap = std::max(gap, lengths[t] - lengths[output_track]);
    return true;
  });
  return gap;
}

std::size_t functional_gap_bound(const Dfa& d, std::size_t output_track, std::size_t n_check) {
  const auto& alphabet = *d.alphabet();
  if (output_track >= alphabet.track_count()) throw Error(ErrorCode::InvalidArgument, "output track out of range");
  const std::size_t c = d.state_count();
  for_each_accepted(d, n_check, [&](std::span<const Code> w) {
    const auto lengths = track_lengths(alphabet, w);
    for (std::size_t t = 0; t < lengths.size(); ++t) {
      if (lengths[t] > lengths[output_track] + c) {
        ConvolutionString witness(d.alphabet(), std::vector<Code>(w.begin(), w.end()));
        throw Error(ErrorCode::Verification,
                    "relation not functionally bounded; witness " + witness.to_string());
      }
    }
    return true;
  });
  return c;
}

}  // namespace fapres::automata
