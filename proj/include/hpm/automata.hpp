// SPDX-License-Identifier: MIT
//
// Core automata types: alphabets, words, NFA/DFA, and the asynchronous
// automaton (an NFA whose transitions additionally carry a direction index,
// so the machine consumes letters from k separate words).
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hpm {

using LetterId = uint32_t;
using StateId = uint32_t;

/// Thrown when an operation refuses to run because a resource guard
/// (enumeration size, word length, subset count) would be exceeded.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by skip-table precomputation when the automaton accepts nothing.
class EmptyLanguageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool valid_letter_token(const std::string& tok) {
  if (tok.empty()) return false;
  for (char c : tok) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',') return false;
  }
  return true;
}

// Interning table for letter tokens. Tokens are opaque byte strings; they
// may not contain whitespace, commas, or newlines (reserved as delimiters
// by the file formats). Words may legally contain letters that appear on no
// transition, so the table can keep growing while input is loaded; all
// automata built earlier simply never match the new ids.
class Alphabet {
 public:
  Alphabet() = default;

  LetterId intern(const std::string& tok) {
    auto it = index_.find(tok);
    if (it != index_.end()) return it->second;
    if (!valid_letter_token(tok))
      throw std::invalid_argument("invalid letter token: \"" + tok + "\"");
    LetterId id = static_cast<LetterId>(tokens_.size());
    tokens_.push_back(tok);
    index_.emplace(tok, id);
    return id;
  }

  std::optional<LetterId> find(const std::string& tok) const {
    auto it = index_.find(tok);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& token(LetterId id) const { return tokens_.at(id); }
  uint32_t size() const { return static_cast<uint32_t>(tokens_.size()); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, LetterId> index_;
};

// A word is a finite letter sequence. Positions are 1-based everywhere a
// position crosses an API boundary; the empty slice at position i is written
// (i, i-1).
struct Word {
  std::vector<LetterId> letters;

  uint32_t size() const { return static_cast<uint32_t>(letters.size()); }
  /// 1-based letter access.
  LetterId at(uint32_t pos) const { return letters[pos - 1]; }

  bool operator==(const Word& o) const { return letters == o.letters; }
};

// Word ids are positions in input order; that order also breaks ties in the
// trial queue.
struct WordSet {
  std::vector<Word> words;

  uint32_t size() const { return static_cast<uint32_t>(words.size()); }
  const Word& operator[](uint32_t wid) const { return words[wid]; }
  uint32_t max_len() const {
    uint32_t m = 0;
    for (const auto& w : words) m = std::max(m, w.size());
    return m;
  }
  uint64_t total_len() const {
    uint64_t t = 0;
    for (const auto& w : words) t += w.size();
    return t;
  }
};

struct NfaTrans {
  StateId from;
  LetterId letter;
  StateId to;
};

struct Nfa {
  Alphabet alphabet;
  std::vector<std::string> state_names;
  std::vector<StateId> initial;
  std::vector<uint8_t> accepting;  // indexed by state
  std::vector<NfaTrans> transitions;

  uint32_t num_states() const { return static_cast<uint32_t>(state_names.size()); }
};

struct NaaTrans {
  StateId from;
  LetterId letter;
  uint32_t dir;  // 0-based direction index
  StateId to;

  bool operator==(const NaaTrans& o) const {
    return from == o.from && letter == o.letter && dir == o.dir && to == o.to;
  }
};

// Asynchronous automaton over k directions. Each transition consumes one
// letter from the word assigned to its direction.
struct Naa {
  Alphabet alphabet;
  uint32_t num_directions = 0;
  std::vector<std::string> state_names;
  std::vector<StateId> initial;
  std::vector<uint8_t> accepting;
  std::vector<NaaTrans> transitions;
  std::vector<std::vector<NaaTrans>> out;  // adjacency by from-state

  uint32_t num_states() const { return static_cast<uint32_t>(state_names.size()); }

  StateId state_id(const std::string& name) const {
    for (StateId s = 0; s < num_states(); ++s)
      if (state_names[s] == name) return s;
    throw std::invalid_argument("unknown state name: " + name);
  }

  /// Builds the adjacency index and checks structural invariants.
  void finalize() {
    if (num_directions < 1) throw std::invalid_argument("automaton needs at least one direction");
    accepting.resize(state_names.size(), 0);
    for (StateId s : initial)
      if (s >= num_states()) throw std::invalid_argument("initial state out of range");
    out.assign(num_states(), {});
    for (const NaaTrans& t : transitions) {
      if (t.from >= num_states() || t.to >= num_states())
        throw std::invalid_argument("transition endpoint out of range");
      if (t.dir >= num_directions) throw std::invalid_argument("transition direction out of range");
      if (t.letter >= alphabet.size()) throw std::invalid_argument("transition letter out of range");
      out[t.from].push_back(t);
    }
  }
};

struct DirectedLetter {
  LetterId letter;
  uint32_t dir;  // 0-based
};

// One matched slice: word id plus a 1-based inclusive range. end == begin-1
// encodes the empty slice at begin.
struct Slice {
  uint32_t word;
  uint32_t begin;
  uint32_t end;

  bool operator==(const Slice& o) const {
    return word == o.word && begin == o.begin && end == o.end;
  }
  bool operator<(const Slice& o) const {
    if (word != o.word) return word < o.word;
    if (begin != o.begin) return begin < o.begin;
    return end < o.end;
  }
};

struct MatchTuple {
  std::vector<Slice> entries;  // one per direction, in direction order

  bool operator==(const MatchTuple& o) const { return entries == o.entries; }
  bool operator<(const MatchTuple& o) const {
    return std::lexicographical_compare(entries.begin(), entries.end(), o.entries.begin(),
                                        o.entries.end());
  }
};

using MatchSet = std::set<MatchTuple>;

// ---------------------------------------------------------------------------
// Complete DFA with an explicit dead sink, produced by the subset
// construction below. The transition table is total over the letter width it
// was built with; letters interned later go to the sink.

struct Dfa {
  uint32_t num_states = 0;
  uint32_t width = 0;  // letter universe size at construction
  StateId initial = 0;
  StateId sink = 0;
  std::vector<uint8_t> accepting;
  std::vector<StateId> table;  // num_states x width

  StateId step(StateId s, LetterId a) const {
    return a < width ? table[static_cast<size_t>(s) * width + a] : sink;
  }

  template <typename It>
  bool accepts(It first, It last) const {
    StateId s = initial;
    for (It it = first; it != last; ++it) s = step(s, *it);
    return accepting[s] != 0;
  }
};

// ---------------------------------------------------------------------------
// Operations

/// Reinterprets every transition as a plain NFA transition over the extended
/// alphabet of (letter, direction) pairs, rendered as "tok@dir" tokens.
inline Nfa underlying_nfa(const Naa& naa) {
  Nfa nfa;
  nfa.state_names = naa.state_names;
  nfa.initial = naa.initial;
  nfa.accepting = naa.accepting;
  for (LetterId a = 0; a < naa.alphabet.size(); ++a)
    for (uint32_t d = 0; d < naa.num_directions; ++d)
      nfa.alphabet.intern(naa.alphabet.token(a) + "@" + std::to_string(d + 1));
  for (const NaaTrans& t : naa.transitions)
    nfa.transitions.push_back({t.from, t.letter * naa.num_directions + t.dir, t.to});
  return nfa;
}

inline Word project_extended_word(const std::vector<DirectedLetter>& ext, uint32_t dir) {
  Word w;
  for (const DirectedLetter& dl : ext)
    if (dl.dir == dir) w.letters.push_back(dl.letter);
  return w;
}

/// Acceptance of a k-tuple of words, by reachability over the product space
/// (consumed-prefix lengths, state).
inline bool naa_accepts_tuple(const Naa& naa, const std::vector<Word>& tuple) {
  const uint32_t k = naa.num_directions;
  if (tuple.size() != k)
    throw std::invalid_argument("tuple arity does not match direction count");
  uint64_t space = naa.num_states();
  for (const Word& w : tuple) {
    space *= w.size() + 1;
    if (space > 50u * 1000 * 1000)
      throw GuardError("tuple acceptance product space too large");
  }
  if (naa.num_states() == 0) return false;

  // Node encoding: (((j_1 * (L_2+1)) + j_2) ... ) * n + state.
  std::vector<uint8_t> visited(space, 0);
  std::vector<uint64_t> stack;
  std::vector<uint64_t> dim_stride(k);
  uint64_t stride = naa.num_states();
  for (int m = static_cast<int>(k) - 1; m >= 0; --m) {
    dim_stride[m] = stride;
    stride *= tuple[m].size() + 1;
  }
  auto push = [&](uint64_t node) {
    if (!visited[node]) {
      visited[node] = 1;
      stack.push_back(node);
    }
  };
  for (StateId s : naa.initial) push(s);

  std::vector<uint32_t> j(k);
  while (!stack.empty()) {
    uint64_t node = stack.back();
    stack.pop_back();
    StateId s = static_cast<StateId>(node % naa.num_states());
    uint64_t rest = node / naa.num_states();
    bool all_consumed = true;
    for (int m = static_cast<int>(k) - 1; m >= 0; --m) {
      j[m] = static_cast<uint32_t>(rest % (tuple[m].size() + 1));
      rest /= tuple[m].size() + 1;
      if (j[m] != tuple[m].size()) all_consumed = false;
    }
    if (all_consumed && naa.accepting[s]) return true;
    for (const NaaTrans& t : naa.out[s]) {
      if (j[t.dir] < tuple[t.dir].size() && tuple[t.dir].letters[j[t.dir]] == t.letter)
        push(node - s + t.to + dim_stride[t.dir]);
    }
  }
  return false;
}

/// States from which some accepting state is reachable.
inline std::vector<uint8_t> coaccessible_states(const Nfa& nfa) {
  std::vector<std::vector<StateId>> rev(nfa.num_states());
  for (const NfaTrans& t : nfa.transitions) rev[t.to].push_back(t.from);
  std::vector<uint8_t> co(nfa.num_states(), 0);
  std::vector<StateId> stack;
  for (StateId s = 0; s < nfa.num_states(); ++s)
    if (nfa.accepting[s]) {
      co[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : rev[s])
      if (!co[p]) {
        co[p] = 1;
        stack.push_back(p);
      }
  }
  return co;
}

/// Length of a shortest accepted word, or nullopt when the language is empty.
inline std::optional<uint32_t> shortest_accepted_length(const Nfa& nfa) {
  constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> dist(nfa.num_states(), kInf);
  std::vector<std::vector<StateId>> succ(nfa.num_states());
  for (const NfaTrans& t : nfa.transitions) succ[t.from].push_back(t.to);
  std::queue<StateId> q;
  for (StateId s : nfa.initial) {
    if (dist[s] == kInf) {
      dist[s] = 0;
      q.push(s);
    }
  }
  while (!q.empty()) {
    StateId s = q.front();
    q.pop();
    if (nfa.accepting[s]) return dist[s];
    for (StateId n : succ[s])
      if (dist[n] == kInf) {
        dist[n] = dist[s] + 1;
        q.push(n);
      }
  }
  return std::nullopt;
}

namespace detail {

// Epsilon closure where "epsilon" means any transition of a direction other
// than `dir`; used by the per-direction projection.
inline void projection_closure(const Naa& naa, uint32_t dir, std::vector<StateId>& states) {
  std::vector<uint8_t> in(naa.num_states(), 0);
  for (StateId s : states) in[s] = 1;
  std::vector<StateId> stack = states;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const NaaTrans& t : naa.out[s])
      if (t.dir != dir && !in[t.to]) {
        in[t.to] = 1;
        stack.push_back(t.to);
      }
  }
  states.clear();
  for (StateId s = 0; s < naa.num_states(); ++s)
    if (in[s]) states.push_back(s);
}

}  // namespace detail

/// Deterministic automaton for the direction-`dir` projection of the accepted
/// extended-word language. Transitions of other directions act as epsilon
/// moves; the subset construction removes them. The result is complete:
/// missing moves go to an explicit dead sink.
inline Dfa project_naa(const Naa& naa, uint32_t dir, uint64_t max_subsets = 0) {
  if (dir >= naa.num_directions) throw std::invalid_argument("unknown direction");
  const uint32_t width = naa.alphabet.size();
  if (max_subsets == 0)
    max_subsets = naa.num_states() >= 20 ? (1ull << 20) : (1ull << naa.num_states());

  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> subsets;
  auto subset_id = [&](std::vector<StateId> subset) {
    auto it = ids.find(subset);
    if (it != ids.end()) return it->second;
    if (subsets.size() >= max_subsets)
      throw GuardError("projection subset construction exceeded its subset cap");
    StateId id = static_cast<StateId>(subsets.size());
    ids.emplace(subset, id);
    subsets.push_back(std::move(subset));
    return id;
  };

  std::vector<StateId> start = naa.initial;
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  detail::projection_closure(naa, dir, start);

  StateId sink = subset_id({});          // id 0: the dead sink
  StateId init = subset_id(start);       // may coincide with the sink
  std::vector<std::vector<StateId>> rows;
  for (StateId cur = 0; cur < subsets.size(); ++cur) {
    std::vector<StateId> row(width, sink);
    for (LetterId a = 0; a < width; ++a) {
      std::vector<StateId> moved;
      std::vector<uint8_t> seen(naa.num_states(), 0);
      for (StateId s : subsets[cur])
        for (const NaaTrans& t : naa.out[s])
          if (t.dir == dir && t.letter == a && !seen[t.to]) {
            seen[t.to] = 1;
            moved.push_back(t.to);
          }
      if (!moved.empty()) {
        std::sort(moved.begin(), moved.end());
        detail::projection_closure(naa, dir, moved);
        row[a] = subset_id(std::move(moved));
      }
    }
    rows.push_back(std::move(row));
  }

  Dfa dfa;
  dfa.num_states = static_cast<uint32_t>(subsets.size());
  dfa.width = width;
  dfa.initial = init;
  dfa.sink = sink;
  dfa.accepting.assign(dfa.num_states, 0);
  for (StateId q = 0; q < dfa.num_states; ++q)
    for (StateId s : subsets[q])
      if (naa.accepting[s]) dfa.accepting[q] = 1;
  dfa.table.assign(static_cast<size_t>(dfa.num_states) * width, sink);
  for (StateId q = 0; q < dfa.num_states; ++q)
    for (LetterId a = 0; a < width; ++a) dfa.table[static_cast<size_t>(q) * width + a] = rows[q][a];
  return dfa;
}

}  // namespace hpm
