// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "hpm/bench.hpp"
#include "hpm/filter.hpp"
#include "hpm/oracle.hpp"

using namespace hpm;

namespace {

Word make_word(Alphabet& alpha, std::initializer_list<const char*> toks) {
  Word w;
  for (const char* t : toks) w.letters.push_back(alpha.intern(t));
  return w;
}

using Ranges = std::vector<std::pair<uint32_t, uint32_t>>;

Dfa random_dfa(Xorshift64s& rng) {
  Dfa d;
  d.num_states = 1 + rng.below(4);
  d.width = 1 + rng.below(3);
  d.sink = 0;
  d.initial = rng.below(d.num_states);
  d.accepting.assign(d.num_states, 0);
  for (StateId s = 1; s < d.num_states; ++s) d.accepting[s] = rng.below(3) == 0;
  d.table.assign(static_cast<size_t>(d.num_states) * d.width, 0);
  for (StateId s = 1; s < d.num_states; ++s)
    for (LetterId a = 0; a < d.width; ++a) d.table[s * d.width + a] = rng.below(d.num_states);
  return d;
}

}  // namespace

TEST_CASE("projected pattern matching lists all accepted ranges") {
  Naa naa = build_counting_naa();
  Alphabet alpha = naa.alphabet;
  Word w0 = make_word(alpha, {"⋈", "a", "⋈", "b"});

  Dfa d1 = project_naa(naa, 0);
  CHECK(dfa_pattern_match(d1, w0) == Ranges{{1, 3}});

  Dfa d2 = project_naa(naa, 1);
  CHECK(dfa_pattern_match(d2, w0) == Ranges{{1, 1}, {3, 3}, {3, 4}});
}

TEST_CASE("a projection accepting the empty word matches everywhere") {
  // single accepting state looping on letter 0: every range over an all-zero
  // word matches, including the empty range at each begin
  Dfa d;
  d.num_states = 2;
  d.width = 1;
  d.sink = 1;
  d.initial = 0;
  d.accepting = {1, 0};
  d.table = {0, 1};

  Word w;
  w.letters.assign(2, 0);
  CHECK(dfa_pattern_match(d, w) == Ranges{{1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}});
}

TEST_CASE("irrelevant positions are masked out") {
  Naa naa = build_counting_naa();
  Alphabet alpha = naa.alphabet;
  Word w0 = make_word(alpha, {"⋈", "a", "⋈", "b"});

  CHECK(filter_irrelevant(project_naa(naa, 0), w0) == std::vector<uint8_t>{1, 1, 1, 0});
  CHECK(filter_irrelevant(project_naa(naa, 1), w0) == std::vector<uint8_t>{1, 0, 1, 1});

  uint64_t updates = 0;
  filter_irrelevant(project_naa(naa, 0), w0, &updates);
  CHECK(updates > 0);
}

TEST_CASE("filtered log dump is stable") {
  Naa naa = build_counting_naa();
  Alphabet alpha = naa.alphabet;
  WordSet ws;
  ws.words.push_back(make_word(alpha, {"⋈", "a", "⋈", "b"}));
  CHECK(dump_filtered(naa, ws, alpha) ==
        "direction 1\n"
        "word 0 ⋈ a ⋈ _\n"
        "direction 2\n"
        "word 0 ⋈ _ ⋈ b\n");
}

TEST_CASE("mask agrees with the per-position oracle") {
  Xorshift64s rng(1234);
  uint64_t kept_total = 0, dropped_total = 0;
  for (int i = 0; i < 500; ++i) {
    Dfa d = random_dfa(rng);
    Word w;
    uint32_t len = 1 + rng.below(10);
    for (uint32_t p = 0; p < len; ++p) w.letters.push_back(rng.below(d.width));

    std::set<uint32_t> want = relevant_indices_oracle(d, w);
    std::vector<uint8_t> mask = filter_irrelevant(d, w);
    REQUIRE(mask.size() == w.size());
    for (uint32_t pos = 1; pos <= w.size(); ++pos) {
      INFO("instance " << i << " pos " << pos);
      CHECK(static_cast<bool>(mask[pos - 1]) == (want.count(pos) > 0));
      if (mask[pos - 1])
        ++kept_total;
      else
        ++dropped_total;
    }
  }
  CHECK(kept_total > 0);
  CHECK(dropped_total > 0);
}

TEST_CASE("projected queues on the counting automaton") {
  Naa naa = build_counting_naa();
  Alphabet alpha = naa.alphabet;
  WordSet ws;
  ws.words.push_back(make_word(alpha, {"⋈", "a", "⋈", "b"}));

  QueueSpec exact = init_queue_projected(naa, ws, QueueMode::kExact);
  REQUIRE(exact.dirs.size() == 2);
  CHECK(exact.dirs[0].positions == std::vector<uint32_t>{1});
  CHECK(exact.dirs[1].positions == std::vector<uint32_t>{1, 3});
  CHECK(exact.total_candidates() == 2);

  QueueSpec filtered = init_queue_projected(naa, ws, QueueMode::kFiltered);
  CHECK(filtered.dirs[0].positions == std::vector<uint32_t>{1, 2, 3});
  CHECK(filtered.dirs[1].positions == std::vector<uint32_t>{1, 3, 4});
  CHECK(filtered.total_candidates() == 9);
}

TEST_CASE("empty-word projections keep every begin position") {
  // direction 2 consumes nothing, so its projection accepts the empty word
  // and no begin may be dropped in that direction
  Naa naa;
  LetterId a = naa.alphabet.intern("a");
  naa.num_directions = 2;
  naa.state_names = {"s0", "s1"};
  naa.initial = {0};
  naa.accepting = {0, 1};
  naa.transitions.push_back({0, a, 0, 1});
  naa.finalize();

  WordSet ws;
  Word w;
  w.letters = {a, a, a};
  ws.words.push_back(w);

  for (QueueMode mode : {QueueMode::kExact, QueueMode::kFiltered}) {
    QueueSpec q = init_queue_projected(naa, ws, mode);
    CHECK(q.dirs[1].positions == std::vector<uint32_t>{1, 2, 3});
  }

  auto [got, st] = hpm_proj(naa, ws);
  CHECK(got == brute_force_match_set(naa, ws));
  CHECK(got.size() == 9);  // three single-a slices times three empty begins
}

TEST_CASE("projection engines reproduce the pinned runs") {
  Naa naa = build_counting_naa();
  Alphabet alpha = naa.alphabet;

  WordSet w0;
  w0.words.push_back(make_word(alpha, {"⋈", "a", "⋈", "b"}));
  WordSet wbig;
  wbig.words.push_back(
      make_word(alpha, {"d", "⋈", "a", "a", "⋈", "b", "b", "b", "⋈", "a", "a", "a", "⋈", "⋈", "e"}));

  auto [mn0, sn0] = hpm_naive(naa, w0);
  auto [mp0, sp0] = hpm_proj(naa, w0);
  CHECK(mp0 == mn0);
  CHECK(sp0.trials == 9);
  CHECK(sp0.pruned_by_projection == 7);

  auto [me0, se0] = hpm_fjs_proj(naa, w0, {}, QueueMode::kExact);
  CHECK(me0 == mn0);
  CHECK(se0.trials == 2);
  CHECK(se0.pruned_by_projection == 14);

  auto [mnb, snb] = hpm_naive(naa, wbig);
  auto [mpb, spb] = hpm_proj(naa, wbig);
  CHECK(mpb == mnb);
  CHECK(spb.trials == 80);
  CHECK(spb.pruned_by_projection == 145);
  CHECK(spb.trials + spb.pruned_by_projection == snb.trials);

  auto [meb, seb] = hpm_proj(naa, wbig, {}, QueueMode::kExact);
  CHECK(meb == mnb);
  CHECK(seb.trials == 15);
  CHECK(seb.pruned_by_projection == 210);

  auto [mfb, sfb] = hpm_fjs_proj(naa, wbig);
  CHECK(mfb == mnb);
  CHECK(sfb.trials == 30);
  CHECK(sfb.skipped_qs == 34);
  CHECK(sfb.skipped_kmp == 16);
  CHECK(sfb.trials + sfb.skipped_qs + sfb.skipped_kmp + sfb.pruned_by_projection == snb.trials);
}

TEST_CASE("projection engines agree with brute force on random instances") {
  Xorshift64s rng(99);
  for (int i = 0; i < 120; ++i) {
    Naa naa = random_test_naa(rng);
    WordSet ws = random_test_words(naa.alphabet.size(), rng);
    MatchSet want = brute_force_match_set(naa, ws);
    INFO("instance " << i);
    for (QueueMode mode : {QueueMode::kFiltered, QueueMode::kExact}) {
      auto [mp, sp] = hpm_proj(naa, ws, {}, mode);
      CHECK(mp == want);
      auto [mf, sf] = hpm_fjs_proj(naa, ws, {}, mode);
      CHECK(mf == want);
    }
  }
}
