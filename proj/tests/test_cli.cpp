// SPDX-License-Identifier: MIT
//
// End-to-end tests driving the installed binary through a shell. The binary
// path and the golden directory come in as compile definitions.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "hpm/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int status;
  std::string out;  // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
  std::string cmd = std::string(HPM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int rc = pclose(pipe);
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

const fs::path& work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("hpm_cli_test_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string file_with(const std::string& name, const std::string& content) {
  fs::path p = work_dir() / name;
  hpm::write_file(p.string(), content);
  return p.string();
}

std::string golden(const std::string& name) {
  return hpm::read_file(std::string(HPM_GOLDEN_DIR) + "/" + name);
}

const char* kCountingNaa =
    "alphabet ⋈ a b\n"
    "directions 2\n"
    "states l0 l1 l2 l3 lf\n"
    "initial l0\n"
    "accepting lf\n"
    "trans l0 ⋈ 1 l1\n"
    "trans l1 ⋈ 2 l2\n"
    "trans l2 a 1 l3\n"
    "trans l3 b 2 l2\n"
    "trans l2 ⋈ 1 lf\n";

std::string counting_naa() { return file_with("counting.naa", kCountingNaa); }
std::string short_words() { return file_with("w0.txt", "⋈ a ⋈ b\n"); }

}  // namespace

TEST_CASE("match prints tuples and the stats line") {
  auto r = run_cli("match --naa " + counting_naa() + " --words " + short_words());
  CHECK(r.status == 0);
  CHECK(r.out ==
        "[(0,1,3),(0,3,4)]\n"
        "algorithm=naive trials=16 configurations_peak=3 detections=1 matches=1 "
        "skipped_qs=0 skipped_kmp=0 pruned_by_projection=0\n");
}

TEST_CASE("output selection") {
  std::string base = "match --naa " + counting_naa() + " --words " + short_words();
  auto matches_only = run_cli(base + " --output matches");
  CHECK(matches_only.status == 0);
  CHECK(matches_only.out == "[(0,1,3),(0,3,4)]\n");

  auto stats_only = run_cli(base + " --output stats");
  CHECK(stats_only.status == 0);
  CHECK(stats_only.out ==
        "algorithm=naive trials=16 configurations_peak=3 detections=1 matches=1 "
        "skipped_qs=0 skipped_kmp=0 pruned_by_projection=0\n");

  auto timed = run_cli(base + " --output stats --timings");
  CHECK(timed.status == 0);
  CHECK(timed.out.find(" elapsed_ms=") != std::string::npos);
}

TEST_CASE("every engine agrees on the short log") {
  std::string base = "match --naa " + counting_naa() + " --words " + short_words();

  auto fjs = run_cli(base + " --algorithm fjs");
  CHECK(fjs.status == 0);
  CHECK(fjs.out ==
        "[(0,1,3),(0,3,4)]\n"
        "algorithm=fjs trials=4 configurations_peak=3 detections=1 matches=1 "
        "skipped_qs=8 skipped_kmp=4 pruned_by_projection=0\n");

  auto proj = run_cli(base + " --algorithm proj");
  CHECK(proj.status == 0);
  CHECK(proj.out ==
        "[(0,1,3),(0,3,4)]\n"
        "algorithm=proj trials=9 configurations_peak=3 detections=1 matches=1 "
        "skipped_qs=0 skipped_kmp=0 pruned_by_projection=7\n");

  auto exact = run_cli(base + " --algorithm fjs-proj --queue-mode exact");
  CHECK(exact.status == 0);
  CHECK(exact.out ==
        "[(0,1,3),(0,3,4)]\n"
        "algorithm=fjs-proj trials=2 configurations_peak=3 detections=1 matches=1 "
        "skipped_qs=0 skipped_kmp=0 pruned_by_projection=14\n");
}

TEST_CASE("worker count never changes the bytes") {
  std::string base = "match --naa " + counting_naa() + " --words " + short_words();
  auto one = run_cli(base);
  for (const char* extra : {" --workers 4", " --workers 4", ""}) {
    auto again = run_cli(base + extra);
    CHECK(again.status == 0);
    CHECK(again.out == one.out);
  }
}

TEST_CASE("table dumps match their goldens") {
  auto skip = run_cli("dump-skip-tables --naa " + counting_naa());
  CHECK(skip.status == 0);
  CHECK(skip.out == golden("skip_tables_counting.txt"));

  auto filt = run_cli("dump-filtered --naa " + counting_naa() + " --words " + short_words());
  CHECK(filt.status == 0);
  CHECK(filt.out == golden("filtered_counting.txt"));
}

TEST_CASE("the reference subcommand mirrors match output") {
  auto r = run_cli("oracle --naa " + counting_naa() + " --words " + short_words());
  CHECK(r.status == 0);
  CHECK(r.out ==
        "[(0,1,3),(0,3,4)]\n"
        "algorithm=oracle trials=0 configurations_peak=0 detections=0 matches=1 "
        "skipped_qs=0 skipped_kmp=0 pruned_by_projection=0\n");
}

TEST_CASE("parse errors name the offending location and exit 2") {
  std::string bad = file_with("bad.naa", "alphabet a\nbogus line here\n");
  auto r = run_cli("match --naa " + bad + " --words " + short_words());
  CHECK(r.status == 2);
  CHECK(r.out.find("bad.naa:2:1:") != std::string::npos);
  CHECK(r.out.find("unknown keyword") != std::string::npos);

  std::string bad_words = file_with("bad_words.txt", "a ,comma\n");
  auto rw = run_cli("match --naa " + counting_naa() + " --words " + bad_words);
  CHECK(rw.status == 2);
  CHECK(rw.out.find("bad_words.txt:1:3:") != std::string::npos);
}

TEST_CASE("empty pattern languages cannot dump skip tables") {
  std::string empty = file_with("empty.naa",
                                "alphabet a\n"
                                "directions 1\n"
                                "states s0\n"
                                "initial s0\n"
                                "accepting\n"
                                "trans s0 a 1 s0\n");
  auto r = run_cli("dump-skip-tables --naa " + empty);
  CHECK(r.status == 3);
  CHECK(r.out.find("empty pattern language") != std::string::npos);

  // matching with an empty language is fine: the answer is just no matches
  std::string words = file_with("empty_w.txt", "a a\n");
  auto m = run_cli("match --naa " + empty + " --words " + words + " --output stats");
  CHECK(m.status == 0);
  CHECK(m.out.find("matches=0") != std::string::npos);
}

TEST_CASE("an empty match set is still a success") {
  std::string words = file_with("nomatch.txt", "b b b\n");
  auto r = run_cli("match --naa " + counting_naa() + " --words " + words);
  CHECK(r.status == 0);
  CHECK(r.out ==
        "algorithm=naive trials=9 configurations_peak=1 detections=0 matches=0 "
        "skipped_qs=0 skipped_kmp=0 pruned_by_projection=0\n");
}

TEST_CASE("generated instances round trip through match") {
  fs::path naa = work_dir() / "gen_pp.naa";
  fs::path words = work_dir() / "gen_pp_words.txt";
  auto g = run_cli("gen --family packet-pairs --len 60 --count 2 --seed 11 --out-naa " +
                   naa.string() + " --out-words " + words.string());
  CHECK(g.status == 0);
  REQUIRE(fs::exists(naa));
  REQUIRE(fs::exists(words));

  auto naive = run_cli("match --naa " + naa.string() + " --words " + words.string());
  auto fjs = run_cli("match --naa " + naa.string() + " --words " + words.string() +
                     " --algorithm fjs");
  CHECK(naive.status == 0);
  CHECK(fjs.status == 0);
  // identical tuples; the stats lines differ by construction
  std::string naive_tuples = naive.out.substr(0, naive.out.rfind("algorithm="));
  std::string fjs_tuples = fjs.out.substr(0, fjs.out.rfind("algorithm="));
  CHECK(naive_tuples == fjs_tuples);

  // the same seed writes the same files
  fs::path naa2 = work_dir() / "gen_pp2.naa";
  fs::path words2 = work_dir() / "gen_pp_words2.txt";
  run_cli("gen --family packet-pairs --len 60 --count 2 --seed 11 --out-naa " + naa2.string() +
          " --out-words " + words2.string());
  CHECK(hpm::read_file(naa.string()) == hpm::read_file(naa2.string()));
  CHECK(hpm::read_file(words.string()) == hpm::read_file(words2.string()));
}

TEST_CASE("generated formulas stay consistent with their reduction") {
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    fs::path cnf = work_dir() / ("f" + std::to_string(seed) + ".cnf");
    fs::path naa = work_dir() / ("f" + std::to_string(seed) + ".naa");
    fs::path words = work_dir() / ("f" + std::to_string(seed) + "_words.txt");
    auto g = run_cli("gen --family cnf --vars 3 --clauses 3 --seed " + std::to_string(seed) +
                     " --out-cnf " + cnf.string() + " --out-naa " + naa.string() +
                     " --out-words " + words.string());
    CHECK(g.status == 0);

    auto verdict = run_cli("oracle --cnf " + cnf.string());
    CHECK(verdict.status == 0);
    REQUIRE((verdict.out == "sat\n" || verdict.out == "unsat\n"));

    auto m = run_cli("match --naa " + naa.string() + " --words " + words.string() +
                     " --output stats");
    CHECK(m.status == 0);
    bool has_match = m.out.find("matches=0") == std::string::npos;
    INFO("seed " << seed << " verdict " << verdict.out << " stats " << m.out);
    CHECK(has_match == (verdict.out == "sat\n"));
  }
}

TEST_CASE("bench emits one row per engine, length, and repetition") {
  auto r = run_cli(
      "bench --family packet-pairs --lengths 30,40 --engines naive,fjs --reps 2 --seed 3");
  CHECK(r.status == 0);
  size_t rows = 0;
  for (size_t at = r.out.find("family="); at != std::string::npos;
       at = r.out.find("family=", at + 1))
    ++rows;
  CHECK(rows == 8);
  CHECK(r.out.find("family=packet-pairs k=2 len=30 rep=0 algorithm=naive") != std::string::npos);
  CHECK(r.out.find("len=40 rep=1 algorithm=fjs") != std::string::npos);
  CHECK(r.out.find("elapsed_ms=") != std::string::npos);
}

TEST_CASE("usage errors do not look like results") {
  auto none = run_cli("");
  CHECK(none.status != 0);
  // option validation happens before any input is read
  auto bad_alg = run_cli("match --naa " + counting_naa() + " --words " + short_words() +
                         " --algorithm bogus");
  CHECK(bad_alg.status != 0);
  CHECK(bad_alg.status != 2);
  CHECK(bad_alg.out.find("--algorithm") != std::string::npos);
}
