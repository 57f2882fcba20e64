// SPDX-License-Identifier: MIT
//
// Skip tables for the FJS-style engine. Two mechanisms, both expressed as
// begin-position invalidations so they compose with the shared queue:
//
//  - quick search: direction m of any match consumes at least sm_dir[m]
//    letters, so the letter sm_dir[m]-1 past a candidate begin must be one
//    that can occur at that offset in some accepted word. On failure the
//    letter one further past bounds how far the begin can shift.
//  - prefix reuse: after a trial, each state the trial reached tells us how
//    many of the following begin positions are incompatible with every word
//    leading to that state.
#pragma once

#include <deque>

#include "hpm/automata.hpp"
#include "hpm/engine.hpp"

namespace hpm {

struct QsTable {
  uint32_t sm = 0;                              // shortest accepted extended word
  std::vector<uint32_t> sm_dir;                 // shortest per-direction projection
  std::vector<std::vector<uint8_t>> last_qs;    // [dir][letter]: may end the window
  std::vector<std::vector<uint32_t>> delta_qs;  // [dir][letter]: shift amount
  uint32_t width = 0;                           // letters covered by the tables

  // Letters interned after table construction (log-only letters) can never
  // occur in an accepted word: not in last_qs, maximal shift.
  bool in_last(uint32_t dir, LetterId a) const { return a < width && last_qs[dir][a]; }
  uint32_t delta(uint32_t dir, LetterId a) const {
    return a < width ? delta_qs[dir][a] : sm_dir[dir] + 1;
  }
};

struct KmpTable {
  std::vector<std::vector<uint32_t>> delta;  // [dir][state]
};

namespace detail {

/// Co-accessibility over the transition graph, letters ignored.
inline std::vector<uint8_t> naa_coaccessible(const Naa& naa) {
  std::vector<std::vector<StateId>> rev(naa.num_states());
  for (const NaaTrans& t : naa.transitions) rev[t.to].push_back(t.from);
  std::vector<uint8_t> co(naa.num_states(), 0);
  std::vector<StateId> stack;
  for (StateId s = 0; s < naa.num_states(); ++s)
    if (naa.accepting[s]) {
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

/// Minimum number of direction-dir letters on any path from an initial state,
/// per state (0-1 BFS; other-direction letters are free).
inline std::vector<uint32_t> min_dir_letters(const Naa& naa, uint32_t dir) {
  constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> dist(naa.num_states(), kInf);
  std::deque<StateId> dq;
  for (StateId s : naa.initial) {
    if (dist[s] != 0) {
      dist[s] = 0;
      dq.push_back(s);
    }
  }
  while (!dq.empty()) {
    StateId s = dq.front();
    dq.pop_front();
    for (const NaaTrans& t : naa.out[s]) {
      uint32_t w = t.dir == dir ? 1 : 0;
      if (dist[s] + w < dist[t.to]) {
        dist[t.to] = dist[s] + w;
        if (w == 0)
          dq.push_front(t.to);
        else
          dq.push_back(t.to);
      }
    }
  }
  return dist;
}

inline void closure_other_dirs(const Naa& naa, uint32_t dir, std::vector<uint8_t>& mask) {
  std::vector<StateId> stack;
  for (StateId s = 0; s < naa.num_states(); ++s)
    if (mask[s]) stack.push_back(s);
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const NaaTrans& t : naa.out[s])
      if (t.dir != dir && !mask[t.to]) {
        mask[t.to] = 1;
        stack.push_back(t.to);
      }
  }
}

// The per-direction projection, made total for suffix reasoning: direction-dir
// transitions become letters, everything else epsilon, and state `n` absorbs
// acceptance (any continuation after an accepted prefix).
struct ProjView {
  uint32_t raw;                                                    // raw state count
  std::vector<std::vector<std::pair<LetterId, StateId>>> letters;  // size raw+1
  std::vector<std::vector<StateId>> eps;                           // size raw+1
  uint32_t top() const { return raw; }
  uint32_t size() const { return raw + 1; }
};

inline ProjView make_proj_view(const Naa& naa, uint32_t dir, const std::vector<uint8_t>& accept) {
  ProjView v;
  v.raw = naa.num_states();
  v.letters.assign(v.raw + 1, {});
  v.eps.assign(v.raw + 1, {});
  for (const NaaTrans& t : naa.transitions) {
    if (t.dir == dir)
      v.letters[t.from].push_back({t.letter, t.to});
    else
      v.eps[t.from].push_back(t.to);
  }
  for (StateId s = 0; s < v.raw; ++s)
    if (accept[s]) v.eps[s].push_back(v.top());
  for (LetterId a = 0; a < naa.alphabet.size(); ++a) v.letters[v.top()].push_back({a, v.top()});
  return v;
}

inline void eps_close(const ProjView& v, std::vector<uint8_t>& mask) {
  std::vector<StateId> stack;
  for (StateId s = 0; s < v.size(); ++s)
    if (mask[s]) stack.push_back(s);
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId n : v.eps[s])
      if (!mask[n]) {
        mask[n] = 1;
        stack.push_back(n);
      }
  }
}

/// One any-letter step followed by epsilon closure. The absorbing state also
/// advances on letters outside the pattern alphabet (log words may contain
/// such letters), hence the unconditional self-step.
inline std::vector<uint8_t> step_any_letter(const ProjView& v, const std::vector<uint8_t>& mask) {
  std::vector<uint8_t> next(v.size(), 0);
  if (mask[v.top()]) next[v.top()] = 1;
  for (StateId s = 0; s < v.size(); ++s)
    if (mask[s])
      for (const auto& [a, to] : v.letters[s]) {
        (void)a;
        next[to] = 1;
      }
  eps_close(v, next);
  return next;
}

inline uint32_t reachable_count(const ProjView& v, const std::vector<StateId>& init) {
  std::vector<uint8_t> seen(v.size(), 0);
  std::vector<StateId> stack;
  for (StateId s : init)
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId n : v.eps[s])
      if (!seen[n]) {
        seen[n] = 1;
        stack.push_back(n);
      }
    for (const auto& [a, n] : v.letters[s]) {
      (void)a;
      if (!seen[n]) {
        seen[n] = 1;
        stack.push_back(n);
      }
    }
  }
  uint32_t c = 0;
  for (uint8_t b : seen) c += b;
  return c;
}

/// Smallest shift n >= 1 such that some word reaching `target_state` and some
/// accepted word are letter-compatible when the latter starts n positions
/// later. Searches up to the product-size bound and returns the bound when
/// nothing smaller qualifies (invalidating below the bound stays sound: shift
/// compatibility is necessary for a match to begin there).
inline uint32_t kmp_delta_for_state(const Naa& naa, uint32_t dir, StateId target_state,
                                    const ProjView& accept_view, uint32_t accept_reach) {
  std::vector<uint8_t> target_accept(naa.num_states(), 0);
  target_accept[target_state] = 1;
  ProjView v1 = make_proj_view(naa, dir, target_accept);
  const uint32_t s1 = v1.size(), s2 = accept_view.size();

  // Backward reachability of (top, top) in the product: pairs of states that
  // admit a common continuation accepted by both sides.
  std::vector<std::vector<uint32_t>> rev(static_cast<size_t>(s1) * s2);
  uint32_t width = naa.alphabet.size();
  std::vector<std::vector<std::pair<StateId, StateId>>> by_letter1(width), by_letter2(width);
  for (StateId p = 0; p < s1; ++p)
    for (const auto& [a, to] : v1.letters[p]) by_letter1[a].push_back({p, to});
  for (StateId q = 0; q < s2; ++q)
    for (const auto& [a, to] : accept_view.letters[q]) by_letter2[a].push_back({q, to});
  for (uint32_t a = 0; a < width; ++a)
    for (const auto& [p, pn] : by_letter1[a])
      for (const auto& [q, qn] : by_letter2[a])
        rev[static_cast<size_t>(pn) * s2 + qn].push_back(p * s2 + q);
  for (StateId p = 0; p < s1; ++p)
    for (StateId pn : v1.eps[p])
      for (StateId q = 0; q < s2; ++q)
        rev[static_cast<size_t>(pn) * s2 + q].push_back(p * s2 + q);
  for (StateId q = 0; q < s2; ++q)
    for (StateId qn : accept_view.eps[q])
      for (StateId p = 0; p < s1; ++p)
        rev[static_cast<size_t>(p) * s2 + qn].push_back(p * s2 + q);

  std::vector<uint8_t> in_g(static_cast<size_t>(s1) * s2, 0);
  std::vector<uint32_t> stack;
  uint32_t root = v1.top() * s2 + accept_view.top();
  in_g[root] = 1;
  stack.push_back(root);
  while (!stack.empty()) {
    uint32_t node = stack.back();
    stack.pop_back();
    for (uint32_t prev : rev[node])
      if (!in_g[prev]) {
        in_g[prev] = 1;
        stack.push_back(prev);
      }
  }

  // Good left-states: paired with some fresh start of the accepted side.
  std::vector<uint8_t> good(s1, 0);
  for (StateId p = 0; p < s1; ++p)
    for (StateId q0 : naa.initial)
      if (in_g[static_cast<size_t>(p) * s2 + q0]) {
        good[p] = 1;
        break;
      }

  uint32_t bound = reachable_count(v1, naa.initial) * accept_reach + 1;

  std::vector<uint8_t> layer(s1, 0);
  for (StateId s : naa.initial) layer[s] = 1;
  eps_close(v1, layer);
  for (uint32_t n = 1; n < bound; ++n) {
    layer = step_any_letter(v1, layer);
    bool empty = true;
    for (StateId p = 0; p < s1; ++p) {
      if (!layer[p]) continue;
      empty = false;
      if (good[p]) return n;
    }
    if (empty) break;  // no longer word reaches the state at all
  }
  return bound;
}

}  // namespace detail

inline QsTable compute_qs_table(const Naa& naa) {
  auto sm = shortest_accepted_length(underlying_nfa(naa));
  if (!sm) throw EmptyLanguageError("empty pattern language");

  QsTable t;
  t.sm = *sm;
  const uint32_t k = naa.num_directions;
  const uint32_t width = naa.alphabet.size();
  t.width = width;
  t.sm_dir.assign(k, 0);
  t.last_qs.assign(k, std::vector<uint8_t>(width, 0));
  t.delta_qs.assign(k, {});

  std::vector<uint8_t> co = detail::naa_coaccessible(naa);
  for (uint32_t m = 0; m < k; ++m) {
    std::vector<uint32_t> dist = detail::min_dir_letters(naa, m);
    uint32_t best = std::numeric_limits<uint32_t>::max();
    for (StateId s = 0; s < naa.num_states(); ++s)
      if (naa.accepting[s]) best = std::min(best, dist[s]);
    t.sm_dir[m] = best;  // finite: the language is non-empty

    // letters_at[t][a]: a can be the t-th direction-m letter of an accepted
    // word. Layered reachability counting only direction-m steps.
    std::vector<std::vector<uint8_t>> letters_at(t.sm_dir[m] + 1,
                                                 std::vector<uint8_t>(width, 0));
    std::vector<uint8_t> layer(naa.num_states(), 0);
    for (StateId s : naa.initial) layer[s] = 1;
    detail::closure_other_dirs(naa, m, layer);
    for (uint32_t step = 1; step <= t.sm_dir[m]; ++step) {
      std::vector<uint8_t> next(naa.num_states(), 0);
      for (StateId s = 0; s < naa.num_states(); ++s) {
        if (!layer[s]) continue;
        for (const NaaTrans& tr : naa.out[s]) {
          if (tr.dir != m) continue;
          next[tr.to] = 1;
          if (co[tr.to]) letters_at[step][tr.letter] = 1;
        }
      }
      detail::closure_other_dirs(naa, m, next);
      layer = std::move(next);
    }
    if (t.sm_dir[m] >= 1) t.last_qs[m] = letters_at[t.sm_dir[m]];
    t.delta_qs[m].assign(width, t.sm_dir[m] + 1);
    for (uint32_t step = 1; step <= t.sm_dir[m]; ++step)
      for (uint32_t a = 0; a < width; ++a)
        if (letters_at[step][a]) t.delta_qs[m][a] = t.sm_dir[m] + 1 - step;
  }
  return t;
}

inline KmpTable compute_kmp_table(const Naa& naa) {
  if (!shortest_accepted_length(underlying_nfa(naa)))
    throw EmptyLanguageError("empty pattern language");
  KmpTable t;
  t.delta.assign(naa.num_directions, std::vector<uint32_t>(naa.num_states(), 1));
  for (uint32_t m = 0; m < naa.num_directions; ++m) {
    detail::ProjView accept_view = detail::make_proj_view(naa, m, naa.accepting);
    uint32_t accept_reach = detail::reachable_count(accept_view, naa.initial);
    for (StateId s = 0; s < naa.num_states(); ++s)
      t.delta[m][s] = detail::kmp_delta_for_state(naa, m, s, accept_view, accept_reach);
  }
  return t;
}

struct FjsSkip {
  static constexpr bool enabled = true;
  QsTable qs;
  KmpTable kmp;

  bool qs_fail(const WordSet& ws, uint32_t wid, uint32_t pos, uint32_t dir) const {
    uint32_t smd = qs.sm_dir[dir];
    if (smd == 0) return false;  // empty slices possible: window test unusable
    const Word& w = ws[wid];
    uint32_t probe = pos + smd - 1;
    if (probe > w.size()) return false;
    return !qs.in_last(dir, w.at(probe));
  }

  /// Inclusive begin-position range ruled out by a failed window test.
  std::pair<uint32_t, uint32_t> qs_range(const WordSet& ws, uint32_t wid, uint32_t pos,
                                         uint32_t dir) const {
    const Word& w = ws[wid];
    uint32_t next = pos + qs.sm_dir[dir];  // letter one past the window
    if (next > w.size()) return {pos, pos};
    return {pos, pos + qs.delta(dir, w.at(next)) - 1};
  }

  uint32_t kmp_delta(uint32_t dir, StateId s) const { return kmp.delta[dir][s]; }
};

inline FjsSkip make_fjs_skip(const Naa& naa) {
  return {compute_qs_table(naa), compute_kmp_table(naa)};
}

inline std::pair<MatchSet, TrialStats> hpm_fjs(const Naa& naa, const WordSet& ws,
                                               const EngineOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  QueueSpec q = make_naive_queue(naa, ws);
  std::pair<MatchSet, TrialStats> result;
  try {
    FjsSkip skip = make_fjs_skip(naa);
    result = run_engine(naa, ws, q, skip, opt);
  } catch (const EmptyLanguageError&) {
    // Nothing can be skipped for an empty pattern language; behave naively.
    result = run_engine(naa, ws, q, NoSkip{}, opt);
  }
  result.second.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

/// Text rendering of all skip tables, one value per line, directions in
/// order. Letters follow alphabet order, states declaration order.
inline std::string dump_skip_tables(const Naa& naa) {
  QsTable qs = compute_qs_table(naa);
  KmpTable kmp = compute_kmp_table(naa);
  std::string out = "sm " + std::to_string(qs.sm) + "\n";
  for (uint32_t m = 0; m < naa.num_directions; ++m) {
    out += "direction " + std::to_string(m + 1) + "\n";
    out += "sm_dir " + std::to_string(qs.sm_dir[m]) + "\n";
    out += "last_qs";
    for (uint32_t a = 0; a < qs.width; ++a)
      if (qs.last_qs[m][a]) out += " " + naa.alphabet.token(a);
    out += "\n";
    for (uint32_t a = 0; a < qs.width; ++a)
      out += "delta_qs " + naa.alphabet.token(a) + " " + std::to_string(qs.delta_qs[m][a]) + "\n";
    for (StateId s = 0; s < naa.num_states(); ++s)
      out += "delta_kmp " + naa.state_names[s] + " " + std::to_string(kmp.delta[m][s]) + "\n";
  }
  return out;
}

}  // namespace hpm
