// SPDX-License-Identifier: MIT
//
// The matching engine: a lazy trial queue enumerated in lexicographic order
// (begin positions major, word-id tuples minor), a per-trial configuration
// search, and a commit-in-order pipeline that keeps results byte-identical
// for any worker count.
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <memory>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "hpm/automata.hpp"

namespace hpm {

struct TrialStart {
  std::vector<uint32_t> pos;  // 1-based begin per direction
  std::vector<uint32_t> wid;  // word id per direction

  bool operator==(const TrialStart& o) const { return pos == o.pos && wid == o.wid; }
};

struct TrialStats {
  uint64_t trials = 0;               // trial starts actually executed
  uint64_t configurations_peak = 0;  // max live configuration count seen in any trial
  uint64_t detections = 0;           // raw accepting-configuration sightings (pre-dedup)
  uint64_t skipped_qs = 0;           // queue entries eliminated by quick-search skipping
  uint64_t skipped_kmp = 0;          // queue entries eliminated by prefix-reuse skipping
  uint64_t pruned_by_projection = 0; // queue entries never generated thanks to projection
  double elapsed_ms = 0.0;
};

enum : uint8_t { kCauseQs = 1, kCauseKmp = 2 };

struct InvalidationRecord {
  uint32_t dir;
  uint32_t wid;
  uint32_t pos;
  uint8_t cause;
};

struct EngineOptions {
  uint32_t workers = 1;
  bool keep_nonwaiting = false;   // disable dead-configuration pruning (testing)
  bool check_soundness = false;   // re-verify every found tuple against the automaton
  std::vector<InvalidationRecord>* invalidation_log = nullptr;  // testing hook
};

// ---------------------------------------------------------------------------
// Trial queue

// Per direction: which (position, word) begins exist. The naive queue admits
// every position of every word; projection-pruned queues pass a subset.
// Every listed position must have a non-empty word list.
struct QueueSpec {
  struct DirSpec {
    std::vector<uint32_t> positions;          // ascending
    std::vector<std::vector<uint32_t>> wids;  // per position, ascending word ids
  };
  std::vector<DirSpec> dirs;

  uint64_t total_candidates() const {
    uint64_t total = 1;
    for (const auto& d : dirs) {
      uint64_t sum = 0;
      for (const auto& w : d.wids) sum += w.size();
      if (sum != 0 && total > std::numeric_limits<uint64_t>::max() / sum)
        return std::numeric_limits<uint64_t>::max();
      total *= sum;
    }
    return total;
  }
};

inline QueueSpec make_naive_queue(const Naa& naa, const WordSet& ws) {
  QueueSpec q;
  QueueSpec::DirSpec d;
  for (uint32_t pos = 1; pos <= ws.max_len(); ++pos) {
    std::vector<uint32_t> wids;
    for (uint32_t w = 0; w < ws.size(); ++w)
      if (ws[w].size() >= pos) wids.push_back(w);
    d.positions.push_back(pos);
    d.wids.push_back(std::move(wids));
  }
  q.dirs.assign(naa.num_directions, d);
  return q;
}

/// Streams every candidate of a QueueSpec in lexicographic order: the tuple
/// of begin positions is the major key, the word-id tuple the minor key.
class QueueStream {
 public:
  explicit QueueStream(const QueueSpec& spec) : spec_(&spec), k_(static_cast<uint32_t>(spec.dirs.size())) {
    pos_idx_.assign(k_, 0);
    wid_idx_.assign(k_, 0);
    done_ = k_ == 0;
    for (const auto& d : spec.dirs)
      if (d.positions.empty()) done_ = true;
  }

  bool next(TrialStart& out) {
    if (done_) return false;
    out.pos.resize(k_);
    out.wid.resize(k_);
    for (uint32_t m = 0; m < k_; ++m) {
      const auto& d = spec_->dirs[m];
      out.pos[m] = d.positions[pos_idx_[m]];
      out.wid[m] = d.wids[pos_idx_[m]][wid_idx_[m]];
    }
    advance();
    return true;
  }

 private:
  void advance() {
    for (int m = static_cast<int>(k_) - 1; m >= 0; --m) {
      if (++wid_idx_[m] < spec_->dirs[m].wids[pos_idx_[m]].size()) return;
      wid_idx_[m] = 0;
    }
    for (int m = static_cast<int>(k_) - 1; m >= 0; --m) {
      if (++pos_idx_[m] < spec_->dirs[m].positions.size()) return;
      pos_idx_[m] = 0;
    }
    done_ = true;
  }

  const QueueSpec* spec_;
  uint32_t k_;
  std::vector<uint32_t> pos_idx_, wid_idx_;
  bool done_ = false;
};

// ---------------------------------------------------------------------------
// Spec-level configuration stepping (value types; used by tests and as the
// reference semantics for the packed representation below)

struct Configuration {
  std::vector<Word> buffers;  // unconsumed letters per direction
  StateId state = 0;

  bool operator==(const Configuration& o) const { return state == o.state && buffers == o.buffers; }
  bool operator<(const Configuration& o) const {
    if (state != o.state) return state < o.state;
    for (size_t m = 0; m < buffers.size(); ++m)
      if (!(buffers[m] == o.buffers[m])) return buffers[m].letters < o.buffers[m].letters;
    return false;
  }
};

/// All configurations one consumption step away: each enabled transition eats
/// the first letter of its direction's buffer.
inline std::set<Configuration> successors(const Naa& naa, const Configuration& c) {
  std::set<Configuration> out;
  for (const NaaTrans& t : naa.out[c.state]) {
    const Word& buf = c.buffers[t.dir];
    if (!buf.letters.empty() && buf.letters.front() == t.letter) {
      Configuration n = c;
      n.buffers[t.dir].letters.erase(n.buffers[t.dir].letters.begin());
      n.state = t.to;
      out.insert(std::move(n));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trial execution

struct TrialResult {
  std::vector<MatchTuple> found;  // may repeat tuples; callers deduplicate
  std::vector<uint64_t> reached;  // bitset over states visited by the trial
  uint64_t peak = 0;
  uint64_t detections = 0;

  void reset(uint32_t num_states) {
    found.clear();
    reached.assign((num_states + 63) / 64, 0);
    peak = 0;
    detections = 0;
  }
  bool reached_state(StateId s) const { return (reached[s >> 6] >> (s & 63)) & 1; }
};

// Runs single trials with reusable scratch memory. A configuration is packed
// as (state, consumed-count per direction): buffer m is then the word slice
// from begin+consumed to the last read position, so appends are O(1) shared
// bookkeeping. Dead (non-waiting) configurations stay in the dedup set after
// removal; re-deriving them is pointless since their buffer fronts never
// change again.
class TrialRunner {
 public:
  TrialRunner(const Naa& naa, const WordSet& ws, bool keep_nonwaiting)
      : naa_(naa),
        ws_(ws),
        keep_(keep_nonwaiting),
        k_(naa.num_directions),
        stride_(naa.num_directions + 1),
        set_(64, Hash{this}, Eq{this}) {}

  TrialRunner(const TrialRunner&) = delete;
  TrialRunner& operator=(const TrialRunner&) = delete;

  void run(const TrialStart& start, TrialResult& out) {
    out.reset(naa_.num_states());
    arena_.clear();
    set_.clear();
    alive_.clear();
    worklist_.clear();
    start_ = &start;
    read_.assign(k_, 1);
    len_.resize(k_);
    for (uint32_t m = 0; m < k_; ++m) len_[m] = ws_[start.wid[m]].size();

    tmp_counts_.assign(k_, 0);
    for (StateId s : naa_.initial) insert(s, tmp_counts_.data(), out);
    saturate(out);
    out.peak = std::max<uint64_t>(out.peak, alive_.size());
    prune();

    while (!alive_.empty()) {
      bool progressed = false;
      for (uint32_t m = 0; m < k_ && !alive_.empty(); ++m) {
        if (start.pos[m] + read_[m] - 1 >= len_[m]) continue;  // word m exhausted
        ++read_[m];
        progressed = true;
        worklist_ = alive_;  // the new letter may enable any live configuration
        saturate(out);
        out.peak = std::max<uint64_t>(out.peak, alive_.size());
        prune();
      }
      if (!progressed) break;
    }
  }

 private:
  struct Hash {
    TrialRunner* r;
    size_t operator()(uint32_t b) const {
      const uint32_t* p = r->arena_.data() + static_cast<size_t>(b) * r->stride_;
      uint64_t h = 1469598103934665603ull;
      for (uint32_t i = 0; i < r->stride_; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
      }
      return static_cast<size_t>(h);
    }
  };
  struct Eq {
    TrialRunner* r;
    bool operator()(uint32_t a, uint32_t b) const {
      return std::memcmp(r->arena_.data() + static_cast<size_t>(a) * r->stride_,
                         r->arena_.data() + static_cast<size_t>(b) * r->stride_,
                         r->stride_ * sizeof(uint32_t)) == 0;
    }
  };

  const uint32_t* block(uint32_t b) const { return arena_.data() + static_cast<size_t>(b) * stride_; }

  // Deduplicates, tracks reached states, and emits a match right away when
  // the state is accepting: a configuration's consumed counts never change,
  // so its slice ends are final at creation time.
  void insert(StateId state, const uint32_t* counts, TrialResult& out) {
    uint32_t b = static_cast<uint32_t>(arena_.size() / stride_);
    arena_.push_back(state);
    arena_.insert(arena_.end(), counts, counts + k_);
    if (!set_.insert(b).second) {
      arena_.resize(arena_.size() - stride_);
      return;
    }
    alive_.push_back(b);
    worklist_.push_back(b);
    out.reached[state >> 6] |= 1ull << (state & 63);
    if (naa_.accepting[state]) {
      MatchTuple t;
      t.entries.resize(k_);
      for (uint32_t m = 0; m < k_; ++m)
        t.entries[m] = {start_->wid[m], start_->pos[m], start_->pos[m] + counts[m] - 1};
      out.found.push_back(std::move(t));
      ++out.detections;
    }
  }

  void saturate(TrialResult& out) {
    while (!worklist_.empty()) {
      uint32_t b = worklist_.back();
      worklist_.pop_back();
      StateId s = block(b)[0];
      for (const NaaTrans& t : naa_.out[s]) {
        uint32_t m = t.dir;
        uint32_t cm = block(b)[1 + m];
        if (cm < read_[m] && ws_[start_->wid[m]].at(start_->pos[m] + cm) == t.letter) {
          std::copy(block(b) + 1, block(b) + 1 + k_, tmp_counts_.begin());
          tmp_counts_[m] = cm + 1;
          insert(t.to, tmp_counts_.data(), out);
        }
      }
    }
  }

  void prune() {
    if (keep_) return;
    size_t kept = 0;
    for (uint32_t b : alive_) {
      const uint32_t* p = block(b);
      bool waiting = false;
      for (uint32_t m = 0; m < k_; ++m)
        if (p[1 + m] == read_[m]) {
          waiting = true;
          break;
        }
      if (waiting) alive_[kept++] = b;
    }
    alive_.resize(kept);
  }

  const Naa& naa_;
  const WordSet& ws_;
  bool keep_;
  uint32_t k_;
  uint32_t stride_;
  const TrialStart* start_ = nullptr;
  std::vector<uint32_t> read_, len_, tmp_counts_;
  std::vector<uint32_t> arena_;
  std::unordered_set<uint32_t, Hash, Eq> set_;
  std::vector<uint32_t> alive_, worklist_;
};

/// Single-trial entry point: the matches found from this begin tuple plus the
/// set of states the trial visited.
inline std::pair<std::vector<MatchTuple>, std::vector<StateId>> run_trial(const Naa& naa,
                                                                          const WordSet& ws,
                                                                          const TrialStart& start) {
  TrialRunner runner(naa, ws, false);
  TrialResult r;
  runner.run(start, r);
  std::vector<StateId> reached;
  for (StateId s = 0; s < naa.num_states(); ++s)
    if (r.reached_state(s)) reached.push_back(s);
  return {std::move(r.found), std::move(reached)};
}

// ---------------------------------------------------------------------------
// Position invalidation (skipping support)

class InvalidationBitmaps {
 public:
  InvalidationBitmaps(uint32_t k, const WordSet& ws) : nwords_(ws.size()) {
    base_.resize(static_cast<size_t>(k) * nwords_, 0);
    size_t total = 0;
    for (uint32_t d = 0; d < k; ++d)
      for (uint32_t w = 0; w < nwords_; ++w) {
        base_[static_cast<size_t>(d) * nwords_ + w] = total;
        total += (ws[w].size() + 63) / 64;
      }
    bits_ = std::make_unique<std::atomic<uint64_t>[]>(total);
    for (size_t i = 0; i < total; ++i) bits_[i].store(0, std::memory_order_relaxed);
  }

  bool test(uint32_t d, uint32_t w, uint32_t pos) const {
    size_t bit = pos - 1;
    uint64_t word =
        bits_[base_[static_cast<size_t>(d) * nwords_ + w] + bit / 64].load(std::memory_order_relaxed);
    return (word >> (bit % 64)) & 1;
  }

  /// Returns true when the bit was not set before.
  bool set(uint32_t d, uint32_t w, uint32_t pos) {
    size_t bit = pos - 1;
    uint64_t mask = 1ull << (bit % 64);
    uint64_t old = bits_[base_[static_cast<size_t>(d) * nwords_ + w] + bit / 64].fetch_or(
        mask, std::memory_order_relaxed);
    return !(old & mask);
  }

 private:
  uint32_t nwords_;
  std::vector<size_t> base_;
  std::unique_ptr<std::atomic<uint64_t>[]> bits_;
};

struct NoSkip {
  static constexpr bool enabled = false;
};

// ---------------------------------------------------------------------------
// Engine core

namespace detail {

inline uint64_t naive_candidate_count(uint32_t k, const WordSet& ws) {
  uint64_t sum = ws.total_len();
  uint64_t total = 1;
  for (uint32_t m = 0; m < k; ++m) {
    if (sum != 0 && total > std::numeric_limits<uint64_t>::max() / sum)
      return std::numeric_limits<uint64_t>::max();
    total *= sum;
  }
  return total;
}

inline void check_sound(const Naa& naa, const WordSet& ws, const MatchTuple& t) {
  std::vector<Word> tuple(t.entries.size());
  for (size_t m = 0; m < t.entries.size(); ++m) {
    const Slice& sl = t.entries[m];
    const Word& w = ws[sl.word];
    for (uint32_t p = sl.begin; p <= sl.end; ++p) tuple[m].letters.push_back(w.at(p));
  }
  if (!naa_accepts_tuple(naa, tuple))
    throw std::logic_error("engine produced a tuple the automaton rejects");
}

}  // namespace detail

// Runs the queue through the pipeline. All bitmap writes, statistics, and
// match merges happen in strict queue order inside commit(); worker threads
// only speculate on trial execution, so any worker count yields the same
// matches and the same statistics.
template <class Skipper>
std::pair<MatchSet, TrialStats> run_engine(const Naa& naa, const WordSet& ws,
                                           const QueueSpec& queue, const Skipper& skip,
                                           const EngineOptions& opt) {
  const uint32_t k = naa.num_directions;
  for (const Word& w : ws.words)
    if (w.size() == 0) throw std::invalid_argument("words must be non-empty");

  MatchSet matches;
  TrialStats stats;
  stats.pruned_by_projection = detail::naive_candidate_count(k, ws) - queue.total_candidates();

  InvalidationBitmaps bm(k, ws);
  // Cause of each invalidated position, written only by the committer.
  std::vector<size_t> cause_base(static_cast<size_t>(k) * ws.size(), 0);
  std::vector<uint8_t> causes;
  {
    size_t total = 0;
    for (uint32_t d = 0; d < k; ++d)
      for (uint32_t w = 0; w < ws.size(); ++w) {
        cause_base[static_cast<size_t>(d) * ws.size() + w] = total;
        total += ws[w].size();
      }
    causes.assign(total, 0);
  }

  TrialRunner commit_runner(naa, ws, opt.keep_nonwaiting);
  TrialResult commit_result;

  auto cause_at = [&](uint32_t d, uint32_t w, uint32_t pos) -> uint8_t& {
    return causes[cause_base[static_cast<size_t>(d) * ws.size() + w] + pos - 1];
  };
  auto invalidate = [&](uint32_t d, uint32_t w, uint32_t lo, uint32_t hi, uint8_t cause) {
    uint32_t len = ws[w].size();
    if (hi > len) hi = len;
    for (uint32_t p = std::max<uint32_t>(lo, 1); p <= hi; ++p)
      if (bm.set(d, w, p)) {
        cause_at(d, w, p) = cause;
        if (opt.invalidation_log) opt.invalidation_log->push_back({d, w, p, cause});
      }
  };

  auto commit = [&](const TrialStart& cand, const TrialResult* pre) {
    for (uint32_t m = 0; m < k; ++m)
      if (bm.test(m, cand.wid[m], cand.pos[m])) {
        if (cause_at(m, cand.wid[m], cand.pos[m]) == kCauseQs)
          ++stats.skipped_qs;
        else
          ++stats.skipped_kmp;
        return;
      }
    if constexpr (Skipper::enabled) {
      bool any_fail = false;
      for (uint32_t m = 0; m < k; ++m)
        if (skip.qs_fail(ws, cand.wid[m], cand.pos[m], m)) {
          any_fail = true;
          auto range = skip.qs_range(ws, cand.wid[m], cand.pos[m], m);
          invalidate(m, cand.wid[m], range.first, range.second, kCauseQs);
        }
      if (any_fail) {
        ++stats.skipped_qs;
        return;
      }
    }
    const TrialResult* r = pre;
    if (!r) {
      commit_runner.run(cand, commit_result);
      r = &commit_result;
    }
    ++stats.trials;
    stats.configurations_peak = std::max(stats.configurations_peak, r->peak);
    stats.detections += r->detections;
    for (const MatchTuple& t : r->found) {
      if (opt.check_soundness) detail::check_sound(naa, ws, t);
      matches.insert(t);
    }
    if constexpr (Skipper::enabled) {
      for (StateId s = 0; s < naa.num_states(); ++s) {
        if (!r->reached_state(s)) continue;
        for (uint32_t m = 0; m < k; ++m) {
          uint32_t delta = skip.kmp_delta(m, s);
          if (delta > 1) invalidate(m, cand.wid[m], cand.pos[m] + 1, cand.pos[m] + delta - 1, kCauseKmp);
        }
      }
    }
  };

  if (opt.workers <= 1) {
    QueueStream stream(queue);
    TrialStart cand;
    while (stream.next(cand)) commit(cand, nullptr);
    return {std::move(matches), stats};
  }

  // Speculative dispatch: workers fill batches ahead, pre-filtering with a
  // stale bitmap view (invalidations only grow, so a stale hit implies a
  // commit-time hit and the skipped computation is never needed).
  struct Batch {
    std::vector<TrialStart> cands;
    std::vector<uint8_t> has;
    std::vector<TrialResult> results;
    uint64_t seq = 0;
    int state = 0;  // 0 empty, 1 ready, 2 running, 3 done
  };
  constexpr uint32_t kBatch = 32;
  const size_t ring_size = static_cast<size_t>(opt.workers) * 4;
  std::vector<Batch> ring(ring_size);
  std::mutex mtx;
  std::condition_variable cv_work, cv_done;
  bool shutdown = false;

  QueueStream stream(queue);
  bool exhausted = false;
  uint64_t next_fill = 0, next_commit = 0;

  auto fill_slot = [&](Batch& b, uint64_t seq) {
    b.cands.clear();
    b.seq = seq;
    TrialStart cand;
    while (b.cands.size() < kBatch && stream.next(cand)) b.cands.push_back(cand);
    if (b.cands.size() < kBatch) exhausted = true;
    b.has.assign(b.cands.size(), 0);
    if (b.results.size() < b.cands.size()) b.results.resize(b.cands.size());
  };

  auto worker_fn = [&]() {
    TrialRunner runner(naa, ws, opt.keep_nonwaiting);
    std::unique_lock<std::mutex> lock(mtx);
    while (true) {
      Batch* pick = nullptr;
      for (auto& b : ring)
        if (b.state == 1 && (!pick || b.seq < pick->seq)) pick = &b;
      if (!pick) {
        if (shutdown) return;
        cv_work.wait(lock);
        continue;
      }
      pick->state = 2;
      lock.unlock();
      for (size_t i = 0; i < pick->cands.size(); ++i) {
        const TrialStart& cand = pick->cands[i];
        bool hit = false;
        for (uint32_t m = 0; m < k && !hit; ++m)
          if (bm.test(m, cand.wid[m], cand.pos[m])) hit = true;
        if constexpr (Skipper::enabled) {
          for (uint32_t m = 0; m < k && !hit; ++m)
            if (skip.qs_fail(ws, cand.wid[m], cand.pos[m], m)) hit = true;
        }
        if (hit) continue;
        runner.run(cand, pick->results[i]);
        pick->has[i] = 1;
      }
      lock.lock();
      pick->state = 3;
      cv_done.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(opt.workers);
  for (uint32_t i = 0; i < opt.workers; ++i) pool.emplace_back(worker_fn);

  {
    std::unique_lock<std::mutex> lock(mtx);
    while (true) {
      bool filled = false;
      for (auto& b : ring) {
        if (exhausted) break;
        if (b.state != 0) continue;
        fill_slot(b, next_fill);
        if (b.cands.empty()) break;
        b.state = 1;
        ++next_fill;
        filled = true;
      }
      if (filled) cv_work.notify_all();
      if (next_commit == next_fill && exhausted) break;
      Batch* oldest = nullptr;
      for (auto& b : ring)
        if (b.state != 0 && b.seq == next_commit) oldest = &b;
      if (!oldest) continue;  // slot not yet filled; loop fills it
      cv_done.wait(lock, [&] { return oldest->state == 3; });
      lock.unlock();
      for (size_t i = 0; i < oldest->cands.size(); ++i)
        commit(oldest->cands[i], oldest->has[i] ? &oldest->results[i] : nullptr);
      lock.lock();
      oldest->state = 0;
      ++next_commit;
    }
    shutdown = true;
    cv_work.notify_all();
  }
  for (auto& t : pool) t.join();
  return {std::move(matches), stats};
}

inline std::pair<MatchSet, TrialStats> hpm_naive(const Naa& naa, const WordSet& ws,
                                                 const EngineOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  QueueSpec q = make_naive_queue(naa, ws);
  auto result = run_engine(naa, ws, q, NoSkip{}, opt);
  result.second.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

/// Stats line, fixed field order. `elapsed_ms` is appended only on request so
/// default output stays byte-reproducible.
inline std::string format_stats(const std::string& algorithm, const TrialStats& st,
                                uint64_t matches, bool timings) {
  std::string line = "algorithm=" + algorithm + " trials=" + std::to_string(st.trials) +
                     " configurations_peak=" + std::to_string(st.configurations_peak) +
                     " detections=" + std::to_string(st.detections) +
                     " matches=" + std::to_string(matches) +
                     " skipped_qs=" + std::to_string(st.skipped_qs) +
                     " skipped_kmp=" + std::to_string(st.skipped_kmp) +
                     " pruned_by_projection=" + std::to_string(st.pruned_by_projection);
  if (timings) {
    char buf[48];
    std::snprintf(buf, sizeof buf, " elapsed_ms=%.3f", st.elapsed_ms);
    line += buf;
  }
  return line;
}

}  // namespace hpm
