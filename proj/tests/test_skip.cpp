// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "hpm/bench.hpp"
#include "hpm/oracle.hpp"
#include "hpm/skip.hpp"

using namespace hpm;

namespace {

Word make_word(Alphabet& alpha, std::initializer_list<const char*> toks) {
  Word w;
  for (const char* t : toks) w.letters.push_back(alpha.intern(t));
  return w;
}

std::vector<uint8_t> last_set(const Naa& naa, const QsTable& t,
                              std::initializer_list<const char*> toks) {
  std::vector<uint8_t> want(t.width, 0);
  for (const char* tok : toks) want[*naa.alphabet.find(tok)] = 1;
  return want;
}

uint32_t dqs(const Naa& naa, const QsTable& t, uint32_t dir, const char* tok) {
  return t.delta_qs[dir][*naa.alphabet.find(tok)];
}

uint32_t dkmp(const Naa& naa, const KmpTable& t, uint32_t dir, const char* state) {
  return t.delta[dir][naa.state_id(state)];
}

}  // namespace

TEST_CASE("window tables for the counting automaton") {
  Naa naa = build_counting_naa();
  QsTable t = compute_qs_table(naa);

  CHECK(t.sm == 3);
  CHECK(t.sm_dir == std::vector<uint32_t>{2, 1});

  CHECK(t.last_qs[0] == last_set(naa, t, {"⋈", "a"}));
  CHECK(dqs(naa, t, 0, "⋈") == 1);
  CHECK(dqs(naa, t, 0, "a") == 1);
  CHECK(dqs(naa, t, 0, "b") == 3);

  CHECK(t.last_qs[1] == last_set(naa, t, {"⋈"}));
  CHECK(dqs(naa, t, 1, "⋈") == 1);
  CHECK(dqs(naa, t, 1, "a") == 2);
  CHECK(dqs(naa, t, 1, "b") == 2);

  // letters interned after construction shift maximally and never end a window
  CHECK_FALSE(t.in_last(0, 99));
  CHECK(t.delta(0, 99) == 3);
  CHECK(t.delta(1, 99) == 2);
}

TEST_CASE("prefix-reuse tables for the counting automaton") {
  Naa naa = build_counting_naa();
  KmpTable t = compute_kmp_table(naa);

  for (const char* s : {"l0", "l1", "l2", "lf"}) {
    CHECK(dkmp(naa, t, 0, s) == 1);
    CHECK(dkmp(naa, t, 1, s) == 1);
  }
  // after an unmatched a, no accepted first-tape word starts mid-count
  CHECK(dkmp(naa, t, 0, "l3") == 2);
  CHECK(dkmp(naa, t, 1, "l3") == 1);
}

TEST_CASE("skip table dump is stable") {
  Naa naa = build_counting_naa();
  CHECK(dump_skip_tables(naa) ==
        "sm 3\n"
        "direction 1\n"
        "sm_dir 2\n"
        "last_qs ⋈ a\n"
        "delta_qs ⋈ 1\n"
        "delta_qs a 1\n"
        "delta_qs b 3\n"
        "delta_kmp l0 1\n"
        "delta_kmp l1 1\n"
        "delta_kmp l2 1\n"
        "delta_kmp l3 2\n"
        "delta_kmp lf 1\n"
        "direction 2\n"
        "sm_dir 1\n"
        "last_qs ⋈\n"
        "delta_qs ⋈ 1\n"
        "delta_qs a 2\n"
        "delta_qs b 2\n"
        "delta_kmp l0 1\n"
        "delta_kmp l1 1\n"
        "delta_kmp l2 1\n"
        "delta_kmp l3 1\n"
        "delta_kmp lf 1\n");
}

TEST_CASE("window tables for the packet-pairs automaton") {
  Naa naa = build_packet_pairs_naa();
  QsTable t = compute_qs_table(naa);

  CHECK(t.sm == 4);
  CHECK(t.sm_dir == std::vector<uint32_t>{2, 2});

  // the request stream never revisits its opening letter
  CHECK(t.last_qs[0] == last_set(naa, t, {"Q", "eQ", "sP", "P", "eP"}));
  CHECK(dqs(naa, t, 0, "sQ") == 2);
  for (const char* tok : {"Q", "eQ", "sP", "P", "eP"}) CHECK(dqs(naa, t, 0, tok) == 1);

  CHECK(t.last_qs[1] == last_set(naa, t, {"sQ", "Q", "eQ", "P", "eP"}));
  CHECK(dqs(naa, t, 1, "sP") == 2);
  for (const char* tok : {"sQ", "Q", "eQ", "P", "eP"}) CHECK(dqs(naa, t, 1, tok) == 1);

  KmpTable k = compute_kmp_table(naa);
  for (const char* s : {"l0", "l1", "l2"}) CHECK(dkmp(naa, k, 0, s) == 1);
  for (const char* s : {"l3", "l4", "l5", "lf"}) CHECK(dkmp(naa, k, 0, s) == 2);
  for (const char* s : {"l0", "l1", "l2", "l3", "l5"}) CHECK(dkmp(naa, k, 1, s) == 1);
  for (const char* s : {"l4", "lf"}) CHECK(dkmp(naa, k, 1, s) == 2);
}

TEST_CASE("interference and robustness automata admit no skips") {
  Naa inter = build_interference_naa();
  QsTable qi = compute_qs_table(inter);
  CHECK(qi.sm == 4);
  CHECK(qi.sm_dir == std::vector<uint32_t>{2, 2});
  KmpTable ki = compute_kmp_table(inter);
  for (uint32_t m = 0; m < 2; ++m) {
    for (LetterId a = 0; a < qi.width; ++a) {
      CHECK(qi.last_qs[m][a] == 1);  // every letter can end a window
      CHECK(qi.delta_qs[m][a] == 1);
    }
    for (StateId s = 0; s < inter.num_states(); ++s) CHECK(ki.delta[m][s] == 1);
  }

  Naa rob = build_robustness_naa();
  QsTable qr = compute_qs_table(rob);
  CHECK(qr.sm == 2);
  CHECK(qr.sm_dir == std::vector<uint32_t>{1, 1});
  KmpTable kr = compute_kmp_table(rob);
  for (uint32_t m = 0; m < 2; ++m) {
    for (LetterId a = 0; a < qr.width; ++a) {
      CHECK(qr.last_qs[m][a] == 1);
      CHECK(qr.delta_qs[m][a] == 1);
    }
    for (StateId s = 0; s < rob.num_states(); ++s) CHECK(kr.delta[m][s] == 1);
  }
}

TEST_CASE("empty pattern languages cannot be tabled") {
  Naa naa = build_counting_naa();
  naa.accepting.assign(naa.num_states(), 0);
  naa.finalize();
  CHECK_THROWS_AS(compute_qs_table(naa), EmptyLanguageError);
  CHECK_THROWS_AS(compute_kmp_table(naa), EmptyLanguageError);

  // the skipping engine falls back to the naive loop and still agrees
  Alphabet alpha = naa.alphabet;
  WordSet ws;
  ws.words.push_back(make_word(alpha, {"⋈", "a", "⋈", "b"}));
  auto [mf, sf] = hpm_fjs(naa, ws);
  auto [mn, sn] = hpm_naive(naa, ws);
  CHECK(mf == mn);
  CHECK(mf.empty());
  CHECK(sf.trials == sn.trials);
  CHECK(sf.skipped_qs == 0);
  CHECK(sf.skipped_kmp == 0);
}

TEST_CASE("skipping engine matches the naive engine on the pinned logs") {
  Naa naa = build_counting_naa();
  Alphabet alpha = naa.alphabet;

  WordSet w0;
  w0.words.push_back(make_word(alpha, {"⋈", "a", "⋈", "b"}));
  auto [mn0, sn0] = hpm_naive(naa, w0);
  auto [mf0, sf0] = hpm_fjs(naa, w0);
  CHECK(mf0 == mn0);
  CHECK(sf0.trials == 4);
  CHECK(sf0.skipped_qs == 8);
  CHECK(sf0.skipped_kmp == 4);
  CHECK(sf0.trials + sf0.skipped_qs + sf0.skipped_kmp == sn0.trials);

  WordSet wbig;
  wbig.words.push_back(
      make_word(alpha, {"d", "⋈", "a", "a", "⋈", "b", "b", "b", "⋈", "a", "a", "a", "⋈", "⋈", "e"}));
  auto [mnb, snb] = hpm_naive(naa, wbig);
  auto [mfb, sfb] = hpm_fjs(naa, wbig);
  CHECK(mfb == mnb);
  CHECK(mfb.size() == 7);
  CHECK(sfb.trials == 45);
  CHECK(sfb.skipped_qs == 150);
  CHECK(sfb.skipped_kmp == 30);
  CHECK(sfb.trials + sfb.skipped_qs + sfb.skipped_kmp == snb.trials);
}

TEST_CASE("worker count changes nothing for the skipping engine") {
  Naa naa = build_counting_naa();
  Alphabet alpha = naa.alphabet;
  WordSet ws;
  ws.words.push_back(
      make_word(alpha, {"d", "⋈", "a", "a", "⋈", "b", "b", "b", "⋈", "a", "a", "a", "⋈", "⋈", "e"}));

  auto [m1, s1] = hpm_fjs(naa, ws);
  for (uint32_t workers : {2u, 4u}) {
    EngineOptions opt;
    opt.workers = workers;
    auto [m, s] = hpm_fjs(naa, ws, opt);
    INFO("workers " << workers);
    CHECK(m == m1);
    CHECK(s.trials == s1.trials);
    CHECK(s.skipped_qs == s1.skipped_qs);
    CHECK(s.skipped_kmp == s1.skipped_kmp);
    CHECK(s.configurations_peak == s1.configurations_peak);
    CHECK(s.detections == s1.detections);
  }
}

TEST_CASE("skips never invalidate a real match begin") {
  int with_skips = 0;
  auto audit = [&](const Naa& naa, const WordSet& ws, const char* label, int i) {
    std::vector<InvalidationRecord> log;
    EngineOptions opt;
    opt.invalidation_log = &log;
    auto [got, st] = hpm_fjs(naa, ws, opt);

    MatchSet want = brute_force_match_set(naa, ws);
    INFO(label << " instance " << i);
    CHECK(got == want);

    if (!log.empty()) ++with_skips;
    for (const MatchTuple& t : want)
      for (uint32_t m = 0; m < t.entries.size(); ++m)
        for (const InvalidationRecord& r : log) {
          bool hits = r.dir == m && r.wid == t.entries[m].word && r.pos == t.entries[m].begin;
          if (hits) {
            INFO(label << " instance " << i << " dir " << m << " wid " << r.wid << " pos " << r.pos
                       << " cause " << int(r.cause));
            CHECK_FALSE(hits);
          }
        }
  };

  Xorshift64s rng(7);
  for (int i = 0; i < 150; ++i) {
    Naa naa = random_test_naa(rng);
    WordSet ws = random_test_words(naa.alphabet.size(), rng);
    audit(naa, ws, "random", i);
  }

  // random automata rarely admit skips, so drive the property through
  // structured patterns over noisy logs as well
  Naa counting = build_counting_naa();
  {
    Alphabet alpha = counting.alphabet;
    alpha.intern("d");  // log-only padding letter
    for (int i = 0; i < 30; ++i) {
      WordSet ws;
      uint32_t nwords = 1 + rng.below(2);
      for (uint32_t c = 0; c < nwords; ++c) {
        Word w;
        uint32_t len = 1 + rng.below(10);
        for (uint32_t p = 0; p < len; ++p) w.letters.push_back(rng.below(alpha.size()));
        ws.words.push_back(std::move(w));
      }
      audit(counting, ws, "counting", i);
    }
  }

  Naa pairs = build_packet_pairs_naa();
  for (int i = 0; i < 10; ++i) {
    WordSet ws;
    ws.words.push_back(generate_packet_pairs_log(20 + rng.below(21), rng));
    audit(pairs, ws, "packet-pairs", i);
  }

  CHECK(with_skips > 30);  // the property must actually be exercised
}
