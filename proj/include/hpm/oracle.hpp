// SPDX-License-Identifier: MIT
//
// Brute-force reference implementations. Everything here is written for
// independence from the matching engines, not for speed; hard guards refuse
// instances that would be too large to enumerate honestly.
#pragma once

#include <utility>

#include "hpm/automata.hpp"

namespace hpm {

struct Cnf {
  uint32_t num_vars = 0;
  std::vector<std::vector<int32_t>> clauses;  // literals: +j / -j, 1 <= j <= num_vars
};

/// The complete match set, by definitional evaluation: for every tuple of
/// begin positions (one (word, position) choice per direction) explore all
/// reachable (consumed counts, state) configurations and record the accepting
/// ones. Equivalent to enumerating every slice tuple and testing acceptance,
/// since an accepting configuration at consumed counts c with begins b is
/// exactly an accepting run over the slice tuple (b_m, b_m + c_m - 1).
inline MatchSet brute_force_match_set(const Naa& naa, const WordSet& ws) {
  const uint32_t k = naa.num_directions;
  const uint32_t n = naa.num_states();

  long double budget = 1.0L;
  for (uint32_t m = 0; m < k; ++m) {
    long double per_dir = 0.0L;
    for (const Word& w : ws.words)
      per_dir += static_cast<long double>(w.size()) * (w.size() + 3) / 2.0L;
    budget *= per_dir;
    if (budget > 1e7L) throw GuardError("oracle instance too large");
  }

  MatchSet out;
  if (n == 0) return out;
  std::vector<std::pair<uint32_t, uint32_t>> opts;  // (wid, begin)
  for (uint32_t wid = 0; wid < ws.size(); ++wid)
    for (uint32_t pos = 1; pos <= ws[wid].size(); ++pos) opts.emplace_back(wid, pos);
  if (opts.empty()) return out;

  std::vector<uint32_t> choice(k, 0);
  std::vector<uint32_t> wid(k), begin(k), rem(k);
  std::vector<uint64_t> stride(k);
  std::vector<uint8_t> visited;
  std::vector<uint64_t> stack;
  std::vector<uint32_t> c(k);

  while (true) {
    uint64_t space = n;
    for (int m = static_cast<int>(k) - 1; m >= 0; --m) {
      wid[m] = opts[choice[m]].first;
      begin[m] = opts[choice[m]].second;
      rem[m] = ws[wid[m]].size() - begin[m] + 1;
      stride[m] = space;
      space *= rem[m] + 1;
    }
    visited.assign(space, 0);
    stack.clear();
    for (StateId s : naa.initial) {
      if (!visited[s]) {
        visited[s] = 1;
        stack.push_back(s);
      }
    }
    while (!stack.empty()) {
      uint64_t node = stack.back();
      stack.pop_back();
      StateId s = static_cast<StateId>(node % n);
      uint64_t rest = node / n;
      for (int m = static_cast<int>(k) - 1; m >= 0; --m) {
        c[m] = static_cast<uint32_t>(rest % (rem[m] + 1));
        rest /= rem[m] + 1;
      }
      if (naa.accepting[s]) {
        MatchTuple t;
        t.entries.resize(k);
        for (uint32_t m = 0; m < k; ++m) t.entries[m] = {wid[m], begin[m], begin[m] + c[m] - 1};
        out.insert(std::move(t));
      }
      for (const NaaTrans& tr : naa.out[s]) {
        uint32_t m = tr.dir;
        if (c[m] < rem[m] && ws[wid[m]].at(begin[m] + c[m]) == tr.letter) {
          uint64_t next = node - s + tr.to + stride[m];
          if (!visited[next]) {
            visited[next] = 1;
            stack.push_back(next);
          }
        }
      }
    }

    int m = static_cast<int>(k) - 1;
    for (; m >= 0; --m) {
      if (++choice[m] < opts.size()) break;
      choice[m] = 0;
    }
    if (m < 0) break;
  }
  return out;
}

/// All 1-based indices lying inside some accepted subword: the union of
/// [i, j] over pairs with w|i..j in L(dfa). Quadratic scan, guarded.
inline std::set<uint32_t> relevant_indices_oracle(const Dfa& dfa, const Word& w) {
  if (w.size() > 64) throw GuardError("relevant-index oracle limited to words of length 64");
  std::set<uint32_t> out;
  for (uint32_t i = 1; i <= w.size(); ++i) {
    StateId s = dfa.initial;
    for (uint32_t j = i; j <= w.size(); ++j) {
      s = dfa.step(s, w.at(j));
      if (dfa.accepting[s])
        for (uint32_t h = i; h <= j; ++h) out.insert(h);
      if (s == dfa.sink) break;
    }
  }
  return out;
}

/// Satisfiability reduction target: one state per clause boundary, one
/// direction per variable. Reading c letters of polarity sigma in direction j
/// commits variable j to sigma; clause i is crossed by consuming one letter
/// matching one of its literals.
inline std::pair<Naa, WordSet> naa_from_cnf(const Cnf& cnf) {
  if (cnf.num_vars < 1) throw std::invalid_argument("reduction needs at least one variable");
  Naa naa;
  LetterId top = naa.alphabet.intern("T");
  LetterId bot = naa.alphabet.intern("F");
  naa.num_directions = cnf.num_vars;
  const uint32_t n = static_cast<uint32_t>(cnf.clauses.size());
  for (uint32_t i = 0; i <= n; ++i) naa.state_names.push_back("l" + std::to_string(i));
  naa.initial = {0};
  naa.accepting.assign(n + 1, 0);
  naa.accepting[n] = 1;
  for (uint32_t i = 0; i < n; ++i)
    for (int32_t lit : cnf.clauses[i]) {
      uint32_t var = static_cast<uint32_t>(lit < 0 ? -lit : lit);
      naa.transitions.push_back({i, lit > 0 ? top : bot, var - 1, i + 1});
    }
  naa.finalize();

  WordSet ws;
  for (LetterId sigma : {top, bot})
    for (uint32_t len = 1; len <= n; ++len) {
      Word w;
      w.letters.assign(len, sigma);
      ws.words.push_back(std::move(w));
    }
  return {std::move(naa), std::move(ws)};
}

inline bool sat_brute_force(const Cnf& cnf) {
  if (cnf.num_vars > 20) throw GuardError("truth-table evaluation limited to 20 variables");
  const uint64_t total = 1ull << cnf.num_vars;
  for (uint64_t assign = 0; assign < total; ++assign) {
    bool ok = true;
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      for (int32_t lit : clause) {
        uint32_t var = static_cast<uint32_t>(lit < 0 ? -lit : lit);
        bool val = (assign >> (var - 1)) & 1;
        if ((lit > 0) == val) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace hpm
