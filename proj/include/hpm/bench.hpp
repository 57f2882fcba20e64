// SPDX-License-Identifier: MIT
//
// Benchmark and test instance generation: fixed automaton families plus
// seeded word generators. Everything here is deterministic in the seed; the
// generator is xorshift64* so logs can be reproduced outside this codebase.
#pragma once

#include <deque>

#include "hpm/automata.hpp"
#include "hpm/engine.hpp"
#include "hpm/filter.hpp"
#include "hpm/oracle.hpp"
#include "hpm/skip.hpp"

namespace hpm {

/// xorshift64*: x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * M.
/// A zero seed (invalid for xorshift) is remapped to 0x9E3779B97F4A7C15.
class Xorshift64s {
 public:
  explicit Xorshift64s(uint64_t seed) : x_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  uint64_t next() {
    x_ ^= x_ >> 12;
    x_ ^= x_ << 25;
    x_ ^= x_ >> 27;
    return x_ * 2685821657736338717ull;
  }

  /// Uniform-ish draw in [0, n): next() % n.
  uint32_t below(uint32_t n) { return static_cast<uint32_t>(next() % n); }

 private:
  uint64_t x_;
};

inline WordSet random_words(uint32_t alphabet_size, uint32_t len, uint32_t count,
                            Xorshift64s& rng) {
  WordSet ws;
  for (uint32_t c = 0; c < count; ++c) {
    Word w;
    for (uint32_t i = 0; i < len; ++i) w.letters.push_back(rng.below(alphabet_size));
    ws.words.push_back(std::move(w));
  }
  return ws;
}

// ---------------------------------------------------------------------------
// Fixed families

/// Two synchronized counters: direction 1 reads one bracket, direction 2 one
/// bracket, then the a/b loop forces equally many a's (dir 1) as b's (dir 2),
/// closed by a final dir-1 bracket.
inline Naa build_counting_naa() {
  Naa naa;
  LetterId bow = naa.alphabet.intern("⋈");
  LetterId a = naa.alphabet.intern("a");
  LetterId b = naa.alphabet.intern("b");
  naa.num_directions = 2;
  naa.state_names = {"l0", "l1", "l2", "l3", "lf"};
  naa.initial = {0};
  naa.accepting = {0, 0, 0, 0, 1};
  naa.transitions = {{0, bow, 0, 1}, {1, bow, 1, 2}, {2, a, 0, 3}, {3, b, 1, 2}, {2, bow, 0, 4}};
  naa.finalize();
  return naa;
}

/// Two traces agree letter for letter until the last step, where the second
/// trace flips the value of the same variable ("interference"). Letters x0/x1
/// are the two values of variable x.
inline Naa build_interference_naa() {
  Naa naa;
  for (const char* t : {"a0", "a1", "b0", "b1"}) naa.alphabet.intern(t);
  naa.num_directions = 2;
  for (uint32_t i = 0; i <= 10; ++i) naa.state_names.push_back("s" + std::to_string(i));
  naa.initial = {0};
  naa.accepting.assign(11, 0);
  naa.accepting[10] = 1;
  for (LetterId y = 0; y < 4; ++y) {
    LetterId flipped = y ^ 1;  // same variable, other value
    naa.transitions.push_back({0, y, 0, 1 + y});
    naa.transitions.push_back({1 + y, y, 1, 5});
    naa.transitions.push_back({5, y, 0, 6 + y});
    naa.transitions.push_back({6 + y, y, 1, 5});
    naa.transitions.push_back({6 + y, flipped, 1, 10});
  }
  naa.finalize();
  return naa;
}

/// Robust-cleanness witness: two traces whose stutter-reduced inputs agree up
/// to a point where the second trace outputs the opposite value for the same
/// input variable. Letters are (variable, value) pairs aT/aF/bT/bF. Tier-1
/// states track the first letter, tier-2 hubs the letter both traces agree
/// on, tier-3 the next letter of trace one; self-loops absorb stuttering.
inline Naa build_robustness_naa() {
  Naa naa;
  for (const char* t : {"aT", "aF", "bT", "bF"}) naa.alphabet.intern(t);
  naa.num_directions = 2;
  const char* lab[4] = {"aT", "aF", "bT", "bF"};
  naa.state_names.push_back("init");
  for (uint32_t y = 0; y < 4; ++y) naa.state_names.push_back(std::string("t1_") + lab[y]);
  for (uint32_t y = 0; y < 4; ++y) naa.state_names.push_back(std::string("t2_") + lab[y]);
  std::vector<std::vector<StateId>> t3(4, std::vector<StateId>(4, 0));
  for (uint32_t y = 0; y < 4; ++y)
    for (uint32_t x = 0; x < 4; ++x) {
      if (x == y) continue;
      t3[y][x] = static_cast<StateId>(naa.state_names.size());
      naa.state_names.push_back(std::string("t3_") + lab[y] + "_" + lab[x]);
    }
  StateId acc = static_cast<StateId>(naa.state_names.size());
  naa.state_names.push_back("acc");
  naa.initial = {0};
  naa.accepting.assign(naa.state_names.size(), 0);
  naa.accepting[acc] = 1;

  auto flip = [](LetterId y) { return y ^ 1; };
  auto var = [](LetterId y) { return y >> 1; };
  for (LetterId y = 0; y < 4; ++y) {
    StateId t1 = 1 + y, t2 = 5 + y;
    naa.transitions.push_back({0, y, 0, t1});
    naa.transitions.push_back({t1, y, 0, t1});       // stuttering in trace one
    naa.transitions.push_back({t1, y, 1, t2});       // trace two catches up
    naa.transitions.push_back({t2, y, 1, t2});       // stuttering in trace two
    naa.transitions.push_back({t1, flip(y), 1, acc});  // divergence on the first letter
  }
  for (LetterId x = 0; x < 4; ++x)
    for (LetterId y = 0; y < 4; ++y) {
      if (x == y) continue;
      StateId s = t3[y][x];
      naa.transitions.push_back({static_cast<StateId>(5 + x), y, 0, s});
      naa.transitions.push_back({s, y, 0, s});
      naa.transitions.push_back({s, y, 1, static_cast<StateId>(5 + y)});
      if (var(y) != var(x)) naa.transitions.push_back({s, flip(y), 1, acc});
    }
  naa.finalize();
  return naa;
}

/// Request/response pairing over one interleaved log read twice: direction 1
/// follows a query section sQ Q* eQ, direction 2 the paired response section
/// sP P* eP with two responses per query; self-loops let each direction step
/// over the other stream's letters inside its section.
inline Naa build_packet_pairs_naa() {
  Naa naa;
  for (const char* t : {"sQ", "Q", "eQ", "sP", "P", "eP"}) naa.alphabet.intern(t);
  constexpr LetterId sQ = 0, Q = 1, eQ = 2, sP = 3, P = 4, eP = 5;
  naa.num_directions = 2;
  naa.state_names = {"l0", "l1", "l2", "l3", "l4", "l5", "lf"};
  naa.initial = {0};
  naa.accepting = {0, 0, 0, 0, 0, 0, 1};
  naa.transitions = {{0, sQ, 0, 1}, {1, sP, 1, 2}, {2, Q, 0, 3}, {3, P, 1, 4},
                     {4, P, 1, 2},  {2, eQ, 0, 5}, {5, eP, 1, 6}};
  for (StateId s : {2u, 3u, 4u}) {
    for (LetterId a : {sP, P, eP}) naa.transitions.push_back({s, a, 0, s});
    for (LetterId a : {sQ, Q, eQ}) naa.transitions.push_back({s, a, 1, s});
  }
  naa.finalize();
  return naa;
}

/// Interleaved query/response log matching the packet-pairs automaton. Two
/// FIFO streams; whenever both are empty, a query of nq in [0,4) payload
/// letters and its response of 2*nq payloads are enqueued (one rng draw);
/// otherwise one rng draw picks the stream to pop from (the other stream if
/// the picked one is empty). Stops once `len` letters are emitted.
inline Word generate_packet_pairs_log(uint32_t len, Xorshift64s& rng) {
  constexpr LetterId sQ = 0, Q = 1, eQ = 2, sP = 3, P = 4, eP = 5;
  std::deque<LetterId> req, resp;
  Word w;
  while (w.size() < len) {
    if (req.empty() && resp.empty()) {
      uint32_t nq = rng.below(4);
      req.push_back(sQ);
      for (uint32_t i = 0; i < nq; ++i) req.push_back(Q);
      req.push_back(eQ);
      resp.push_back(sP);
      for (uint32_t i = 0; i < 2 * nq; ++i) resp.push_back(P);
      resp.push_back(eP);
    } else {
      uint32_t pick = rng.below(2);
      std::deque<LetterId>* q = pick == 0 ? &req : &resp;
      if (q->empty()) q = pick == 0 ? &resp : &req;
      w.letters.push_back(q->front());
      q->pop_front();
    }
  }
  return w;
}

/// Worst case for begin enumeration: k chained blocks, block i consuming
/// a_i a_i a_i b in direction i. Projection collapses the queue to the single
/// begin tuple where each block fits.
inline Naa build_blowup_naa(uint32_t k) {
  if (k < 1) throw std::invalid_argument("blowup family needs k >= 1");
  Naa naa;
  for (uint32_t i = 1; i <= k; ++i) naa.alphabet.intern("a" + std::to_string(i));
  LetterId b = naa.alphabet.intern("b");
  naa.num_directions = k;
  for (uint32_t i = 1; i <= k; ++i)
    for (uint32_t j = 1; j <= 4; ++j)
      naa.state_names.push_back("s" + std::to_string(j) + "_" + std::to_string(i));
  naa.state_names.push_back("lf");
  naa.initial = {0};
  naa.accepting.assign(naa.state_names.size(), 0);
  naa.accepting[4 * k] = 1;
  for (uint32_t i = 0; i < k; ++i) {
    StateId base = 4 * i;
    for (uint32_t j = 0; j < 3; ++j) naa.transitions.push_back({base + j, i, i, base + j + 1});
    naa.transitions.push_back({base + 3, b, i, base + 4});
  }
  naa.finalize();
  return naa;
}

/// The blowup family's words are fixed: word i is a_i repeated `len` times
/// followed by one b, so each direction matches exactly one slice.
inline WordSet blowup_words(uint32_t k, uint32_t len) {
  WordSet ws;
  for (LetterId i = 0; i < k; ++i) {
    Word w;
    w.letters.assign(len, i);
    w.letters.push_back(k);  // the shared terminator letter
    ws.words.push_back(std::move(w));
  }
  return ws;
}

/// Direction-count stress: an opening bracket on every direction in turn, a
/// round-robin loop with one private letter per direction, and a dir-1
/// closing bracket. k = 2 coincides with the counting automaton's shape.
inline Naa build_many_dirs_naa(uint32_t k) {
  if (k < 2 || k > 26) throw std::invalid_argument("many-dirs family needs 2 <= k <= 26");
  Naa naa;
  LetterId bow = naa.alphabet.intern("⋈");
  for (uint32_t j = 0; j < k; ++j) naa.alphabet.intern(std::string(1, static_cast<char>('a' + j)));
  naa.num_directions = k;
  for (uint32_t j = 0; j <= k; ++j) naa.state_names.push_back("m" + std::to_string(j));
  for (uint32_t j = 1; j < k; ++j) naa.state_names.push_back("u" + std::to_string(j));
  StateId acc = static_cast<StateId>(naa.state_names.size());
  naa.state_names.push_back("acc");
  naa.initial = {0};
  naa.accepting.assign(naa.state_names.size(), 0);
  naa.accepting[acc] = 1;
  for (uint32_t j = 0; j < k; ++j) naa.transitions.push_back({j, bow, j, j + 1});
  StateId mk = k;
  auto u = [&](uint32_t j) { return static_cast<StateId>(k + j); };  // u_j, j in [1,k-1]
  naa.transitions.push_back({mk, 1, 0, u(1)});
  for (uint32_t j = 2; j < k; ++j) naa.transitions.push_back({u(j - 1), j, j - 1, u(j)});
  naa.transitions.push_back({u(k - 1), k, k - 1, mk});
  naa.transitions.push_back({mk, bow, 0, acc});
  naa.finalize();
  return naa;
}

// ---------------------------------------------------------------------------
// Random instances for differential testing

/// Small random automaton: 1-5 states, 1-3 directions, alphabet a..c (1-3
/// letters), up to 12 random transitions, at least one initial state.
inline Naa random_test_naa(Xorshift64s& rng) {
  Naa naa;
  uint32_t asz = 1 + rng.below(3);
  const char* toks[3] = {"a", "b", "c"};
  for (uint32_t i = 0; i < asz; ++i) naa.alphabet.intern(toks[i]);
  uint32_t n = 1 + rng.below(5);
  naa.num_directions = 1 + rng.below(3);
  for (uint32_t i = 0; i < n; ++i) naa.state_names.push_back("q" + std::to_string(i));
  uint32_t ntr = rng.below(13);
  for (uint32_t t = 0; t < ntr; ++t)
    naa.transitions.push_back(
        {rng.below(n), rng.below(asz), rng.below(naa.num_directions), rng.below(n)});
  for (StateId s = 0; s < n; ++s)
    if (rng.below(2) == 0) naa.initial.push_back(s);
  if (naa.initial.empty()) naa.initial.push_back(rng.below(n));
  naa.accepting.assign(n, 0);
  for (StateId s = 0; s < n; ++s)
    if (rng.below(3) == 0) naa.accepting[s] = 1;
  naa.finalize();
  return naa;
}

/// 1-2 random words of length 1-6 over the first `alphabet_size` letters.
inline WordSet random_test_words(uint32_t alphabet_size, Xorshift64s& rng) {
  uint32_t count = 1 + rng.below(2);
  WordSet ws;
  for (uint32_t c = 0; c < count; ++c) {
    Word w;
    uint32_t len = 1 + rng.below(6);
    for (uint32_t i = 0; i < len; ++i) w.letters.push_back(rng.below(alphabet_size));
    ws.words.push_back(std::move(w));
  }
  return ws;
}

/// Random CNF instance: 1-4 variables, 1-4 clauses of 1-3 literals each.
inline Cnf random_cnf(Xorshift64s& rng) {
  Cnf cnf;
  cnf.num_vars = 1 + rng.below(4);
  uint32_t nclauses = 1 + rng.below(4);
  for (uint32_t c = 0; c < nclauses; ++c) {
    std::vector<int32_t> clause;
    uint32_t size = 1 + rng.below(3);
    for (uint32_t l = 0; l < size; ++l) {
      int32_t var = static_cast<int32_t>(1 + rng.below(cnf.num_vars));
      clause.push_back(rng.below(2) == 0 ? var : -var);
    }
    cnf.clauses.push_back(std::move(clause));
  }
  return cnf;
}

// ---------------------------------------------------------------------------
// Family dispatch

struct Instance {
  Naa naa;
  WordSet words;
  Alphabet alpha;  // rendering alphabet for the words
};

/// Families with randomized words take `len`/`count`/`seed`; blowup's words
/// are fixed by (k, len) and many-dirs/blowup take `k`. The cnf family is
/// separate (see random_cnf / naa_from_cnf).
inline Instance generate_family(const std::string& family, uint32_t k, uint32_t len,
                                uint32_t count, uint64_t seed) {
  Xorshift64s rng(seed);
  Instance inst;
  if (family == "counting") {
    inst.naa = build_counting_naa();
    inst.words = random_words(inst.naa.alphabet.size(), len, count, rng);
  } else if (family == "interference") {
    inst.naa = build_interference_naa();
    inst.words = random_words(inst.naa.alphabet.size(), len, count, rng);
  } else if (family == "robustness") {
    inst.naa = build_robustness_naa();
    inst.words = random_words(inst.naa.alphabet.size(), len, count, rng);
  } else if (family == "packet-pairs") {
    inst.naa = build_packet_pairs_naa();
    for (uint32_t c = 0; c < count; ++c)
      inst.words.words.push_back(generate_packet_pairs_log(len, rng));
  } else if (family == "many-dirs") {
    inst.naa = build_many_dirs_naa(k);
    inst.words = random_words(inst.naa.alphabet.size(), len, count, rng);
  } else if (family == "blowup") {
    inst.naa = build_blowup_naa(k);
    inst.words = blowup_words(k, len);
  } else {
    throw std::invalid_argument("unknown family: " + family);
  }
  inst.alpha = inst.naa.alphabet;
  return inst;
}

/// Engine dispatch by CLI name.
inline std::pair<MatchSet, TrialStats> run_algorithm(const std::string& name, const Naa& naa,
                                                     const WordSet& ws, const EngineOptions& opt,
                                                     QueueMode mode = QueueMode::kFiltered) {
  if (name == "naive") return hpm_naive(naa, ws, opt);
  if (name == "fjs") return hpm_fjs(naa, ws, opt);
  if (name == "proj") return hpm_proj(naa, ws, opt, mode);
  if (name == "fjs-proj") return hpm_fjs_proj(naa, ws, opt, mode);
  throw std::invalid_argument("unknown algorithm: " + name);
}

}  // namespace hpm
