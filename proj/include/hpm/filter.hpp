// SPDX-License-Identifier: MIT
//
// Projection pruning. Each direction of the automaton projects to a DFA over
// single words; any begin position that cannot start (filtered mode: belong
// to) a projected match cannot start a full match either, so the trial queue
// shrinks to the surviving positions.
#pragma once

#include <map>

#include "hpm/automata.hpp"
#include "hpm/engine.hpp"
#include "hpm/skip.hpp"

namespace hpm {

/// All slices of `w` accepted by the DFA, as inclusive 1-based (begin, end)
/// pairs sorted lexicographically. When the DFA accepts the empty word the
/// empty slices (i, i-1) for every begin i in [1, |w|] are included.
inline std::vector<std::pair<uint32_t, uint32_t>> dfa_pattern_match(const Dfa& dfa,
                                                                    const Word& w) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  bool eps = dfa.num_states > 0 && dfa.accepting[dfa.initial];
  for (uint32_t i = 1; i <= w.size(); ++i) {
    if (eps) out.push_back({i, i - 1});
    StateId s = dfa.initial;
    for (uint32_t j = i; j <= w.size(); ++j) {
      s = dfa.step(s, w.at(j));
      if (s == dfa.sink) break;
      if (dfa.accepting[s]) out.push_back({i, j});
    }
  }
  return out;
}

/// Keep mask over positions of `w` (index p-1 for position p): a position is
/// kept iff it lies inside some non-empty accepted slice. Single left-to-right
/// pass carrying, per DFA state, the earliest begin position of a live run
/// currently in that state; every accepting state at step j then certifies
/// the interval [earliest begin, j] at once. `updates` (optional) counts how
/// often any carried begin value changed.
inline std::vector<uint8_t> filter_irrelevant(const Dfa& dfa, const Word& w,
                                              uint64_t* updates = nullptr) {
  constexpr uint32_t kBot = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> c(dfa.num_states, kBot), next(dfa.num_states, kBot);
  std::vector<int32_t> diff(w.size() + 1, 0);
  uint64_t nup = 0;

  for (uint32_t j = 1; j <= w.size(); ++j) {
    if (j < c[dfa.initial]) {
      c[dfa.initial] = j;  // a fresh run may begin at position j
      ++nup;
    }
    std::fill(next.begin(), next.end(), kBot);
    LetterId a = w.at(j);
    for (StateId s = 0; s < dfa.num_states; ++s) {
      if (c[s] == kBot) continue;
      StateId to = dfa.step(s, a);
      if (c[s] < next[to]) {
        next[to] = c[s];
        ++nup;
      }
    }
    c.swap(next);
    uint32_t lo = kBot;
    for (StateId s = 0; s < dfa.num_states; ++s)
      if (dfa.accepting[s] && c[s] < lo) lo = c[s];
    if (lo != kBot) {
      ++diff[lo - 1];
      --diff[j];
    }
  }
  if (updates) *updates = nup;

  std::vector<uint8_t> keep(w.size(), 0);
  int32_t acc = 0;
  for (uint32_t p = 0; p < w.size(); ++p) {
    acc += diff[p];
    keep[p] = acc > 0;
  }
  return keep;
}

struct ProjectionFilter {
  std::vector<Dfa> dfas;                             // per direction
  std::vector<uint8_t> accepts_empty;                // per direction
  std::vector<std::vector<std::vector<uint8_t>>> keep;  // [dir][wid][pos-1]
};

inline ProjectionFilter compute_projection_filter(const Naa& naa, const WordSet& ws) {
  ProjectionFilter f;
  for (uint32_t m = 0; m < naa.num_directions; ++m) {
    Dfa dfa = project_naa(naa, m);
    f.accepts_empty.push_back(dfa.accepting[dfa.initial]);
    std::vector<std::vector<uint8_t>> per_word;
    for (uint32_t wid = 0; wid < ws.size(); ++wid)
      per_word.push_back(filter_irrelevant(dfa, ws[wid]));
    f.keep.push_back(std::move(per_word));
    f.dfas.push_back(std::move(dfa));
  }
  return f;
}

/// Filtered words, one line per (direction, word): kept positions show their
/// letter, dropped positions an underscore.
inline std::string dump_filtered(const Naa& naa, const WordSet& ws, const Alphabet& alpha) {
  ProjectionFilter f = compute_projection_filter(naa, ws);
  std::string out;
  for (uint32_t m = 0; m < naa.num_directions; ++m) {
    out += "direction " + std::to_string(m + 1) + "\n";
    for (uint32_t wid = 0; wid < ws.size(); ++wid) {
      out += "word " + std::to_string(wid);
      for (uint32_t pos = 1; pos <= ws[wid].size(); ++pos)
        out += " " + (f.keep[m][wid][pos - 1] ? alpha.token(ws[wid].at(pos)) : "_");
      out += "\n";
    }
  }
  return out;
}

enum class QueueMode { kFiltered, kExact };

// Begin positions that survive projection, per direction. Exact mode keeps
// precisely the begins of projected matches; filtered mode keeps positions
// inside some projected match (cheaper, coarser). Either way, when a
// direction's projection accepts the empty word every position stays valid:
// an empty slice may begin anywhere, covered or not.
inline QueueSpec init_queue_projected(const Naa& naa, const WordSet& ws, QueueMode mode) {
  QueueSpec q;
  q.dirs.resize(naa.num_directions);
  for (uint32_t m = 0; m < naa.num_directions; ++m) {
    Dfa dfa = project_naa(naa, m);
    bool eps = dfa.accepting[dfa.initial];
    std::map<uint32_t, std::vector<uint32_t>> by_pos;
    for (uint32_t wid = 0; wid < ws.size(); ++wid) {
      const Word& w = ws[wid];
      std::vector<uint8_t> valid(w.size() + 1, 0);
      if (eps) {
        std::fill(valid.begin() + 1, valid.end(), 1);
      } else if (mode == QueueMode::kExact) {
        for (const auto& [i, j] : dfa_pattern_match(dfa, w)) valid[i] = 1;
      } else {
        std::vector<uint8_t> keep = filter_irrelevant(dfa, w);
        for (uint32_t pos = 1; pos <= w.size(); ++pos) valid[pos] = keep[pos - 1];
      }
      for (uint32_t pos = 1; pos <= w.size(); ++pos)
        if (valid[pos]) by_pos[pos].push_back(wid);
    }
    for (auto& [pos, wids] : by_pos) {
      q.dirs[m].positions.push_back(pos);
      q.dirs[m].wids.push_back(std::move(wids));
    }
  }
  return q;
}

inline std::pair<MatchSet, TrialStats> hpm_proj(const Naa& naa, const WordSet& ws,
                                                const EngineOptions& opt = {},
                                                QueueMode mode = QueueMode::kFiltered) {
  auto t0 = std::chrono::steady_clock::now();
  QueueSpec q = init_queue_projected(naa, ws, mode);
  auto result = run_engine(naa, ws, q, NoSkip{}, opt);
  result.second.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

inline std::pair<MatchSet, TrialStats> hpm_fjs_proj(const Naa& naa, const WordSet& ws,
                                                    const EngineOptions& opt = {},
                                                    QueueMode mode = QueueMode::kFiltered) {
  auto t0 = std::chrono::steady_clock::now();
  QueueSpec q = init_queue_projected(naa, ws, mode);
  std::pair<MatchSet, TrialStats> result;
  try {
    FjsSkip skip = make_fjs_skip(naa);
    result = run_engine(naa, ws, q, skip, opt);
  } catch (const EmptyLanguageError&) {
    result = run_engine(naa, ws, q, NoSkip{}, opt);
  }
  result.second.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace hpm
