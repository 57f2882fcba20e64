// SPDX-License-Identifier: MIT
//
// Command line front end. Subcommands:
//   match             match set of an automaton over word files
//   oracle            brute force reference (also: DIMACS satisfiability)
//   gen               write generated instances to files
//   bench             timing/statistics sweeps over generated instances
//   dump-skip-tables  print the skip tables of an automaton
//   dump-filtered     print projection-filtered views of the words
//
// Exit codes: 0 on success (matching nothing is success), 2 on input parse
// errors (reported as file:line:col), 3 on guard violations such as resource
// caps or an empty pattern language where tables are required.
#include <iostream>

#include "CLI11.hpp"
#include "hpm/bench.hpp"
#include "hpm/io.hpp"

namespace {

struct MatchArgs {
  std::string naa_path;
  std::vector<std::string> word_paths;
  std::string algorithm = "naive";
  std::string output = "both";
  std::string queue_mode = "filtered";
  uint32_t workers = 1;
  bool timings = false;
};

hpm::WordSet load_words(const std::vector<std::string>& paths, hpm::Alphabet& alpha) {
  hpm::WordSet ws;
  for (const std::string& p : paths) {
    hpm::WordSet part = hpm::parse_words(p, alpha);
    for (auto& w : part.words) ws.words.push_back(std::move(w));
  }
  return ws;
}

void print_results(const MatchArgs& args, const std::string& algorithm,
                   const hpm::MatchSet& matches, const hpm::TrialStats& stats) {
  std::string out;
  if (args.output == "matches" || args.output == "both")
    for (const hpm::MatchTuple& t : matches) out += hpm::format_match_tuple(t) + "\n";
  if (args.output == "stats" || args.output == "both")
    out += hpm::format_stats(algorithm, stats, matches.size(), args.timings) + "\n";
  std::cout << out;
}

int run_match(const MatchArgs& args) {
  hpm::Naa naa = hpm::parse_naa(args.naa_path);
  hpm::Alphabet alpha = naa.alphabet;
  hpm::WordSet ws = load_words(args.word_paths, alpha);
  hpm::EngineOptions opt;
  opt.workers = args.workers;
  hpm::QueueMode mode =
      args.queue_mode == "exact" ? hpm::QueueMode::kExact : hpm::QueueMode::kFiltered;
  auto [matches, stats] = hpm::run_algorithm(args.algorithm, naa, ws, opt, mode);
  print_results(args, args.algorithm, matches, stats);
  return 0;
}

int run_oracle(const MatchArgs& args, const std::string& cnf_path) {
  if (!cnf_path.empty()) {
    hpm::Cnf cnf = hpm::parse_dimacs(cnf_path);
    auto [naa, ws] = hpm::naa_from_cnf(cnf);
    hpm::MatchSet matches = hpm::brute_force_match_set(naa, ws);
    std::cout << (matches.empty() ? "unsat" : "sat") << "\n";
    return 0;
  }
  hpm::Naa naa = hpm::parse_naa(args.naa_path);
  hpm::Alphabet alpha = naa.alphabet;
  hpm::WordSet ws = load_words(args.word_paths, alpha);
  auto t0 = std::chrono::steady_clock::now();
  hpm::MatchSet matches = hpm::brute_force_match_set(naa, ws);
  hpm::TrialStats stats;
  stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  print_results(args, "oracle", matches, stats);
  return 0;
}

struct GenArgs {
  std::string family;
  uint32_t k = 2;
  uint32_t len = 20;
  uint32_t count = 1;
  uint64_t seed = 1;
  uint32_t vars = 3;
  uint32_t clauses = 3;
  std::string out_naa = "naa.txt";
  std::string out_words = "words.txt";
  std::string out_cnf = "cnf.txt";
};

int run_gen(const GenArgs& args) {
  if (args.family == "cnf") {
    hpm::Xorshift64s rng(args.seed);
    hpm::Cnf cnf;
    cnf.num_vars = args.vars;
    for (uint32_t c = 0; c < args.clauses; ++c) {
      std::vector<int32_t> clause;
      uint32_t size = 1 + rng.below(3);
      for (uint32_t l = 0; l < size; ++l) {
        auto var = static_cast<int32_t>(1 + rng.below(args.vars));
        clause.push_back(rng.below(2) == 0 ? var : -var);
      }
      cnf.clauses.push_back(std::move(clause));
    }
    auto [naa, ws] = hpm::naa_from_cnf(cnf);
    hpm::write_file(args.out_cnf, hpm::write_dimacs(cnf));
    hpm::write_file(args.out_naa, hpm::write_naa(naa));
    hpm::write_file(args.out_words, hpm::write_words(ws, naa.alphabet));
    return 0;
  }
  hpm::Instance inst =
      hpm::generate_family(args.family, args.k, args.len, args.count, args.seed);
  hpm::write_file(args.out_naa, hpm::write_naa(inst.naa));
  hpm::write_file(args.out_words, hpm::write_words(inst.words, inst.alpha));
  return 0;
}

struct BenchArgs {
  std::string family;
  uint32_t k = 2;
  std::string lengths = "250,500,1000,2000";
  uint32_t count = 1;
  uint64_t seed = 1;
  std::string engines = "naive,fjs,proj,fjs-proj";
  uint32_t reps = 1;
  double timeout_ms = 0;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

int run_bench(const BenchArgs& args) {
  std::vector<std::string> engines = split_csv(args.engines);
  for (const std::string& len_str : split_csv(args.lengths)) {
    uint64_t len = 0;
    if (!hpm::detail::parse_uint(len_str, len))
      throw std::invalid_argument("bad length: " + len_str);
    hpm::Instance inst = hpm::generate_family(args.family, args.k, static_cast<uint32_t>(len),
                                              args.count, args.seed);
    for (const std::string& engine : engines) {
      for (uint32_t rep = 0; rep < args.reps; ++rep) {
        auto [matches, stats] = hpm::run_algorithm(engine, inst.naa, inst.words, {});
        std::string row = "family=" + args.family + " k=" + std::to_string(args.k) +
                          " len=" + std::to_string(len) + " rep=" + std::to_string(rep) + " " +
                          hpm::format_stats(engine, stats, matches.size(), true);
        bool over = args.timeout_ms > 0 && stats.elapsed_ms > args.timeout_ms;
        if (over) row += " timeout=1";
        std::cout << row << "\n" << std::flush;
        if (over) break;  // stop repeating an engine that blew the budget
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyper pattern matching over finite logs"};
  app.require_subcommand(1);

  MatchArgs margs;
  auto* match = app.add_subcommand("match", "compute the match set of an automaton over logs");
  match->add_option("--naa", margs.naa_path, "automaton file")->required();
  match->add_option("--words", margs.word_paths, "word file (repeatable)")->required();
  match->add_option("--algorithm", margs.algorithm, "naive, fjs, proj, or fjs-proj")
      ->check(CLI::IsMember({"naive", "fjs", "proj", "fjs-proj"}));
  match->add_option("--output", margs.output, "matches, stats, or both")
      ->check(CLI::IsMember({"matches", "stats", "both"}));
  match->add_option("--queue-mode", margs.queue_mode, "filtered or exact projection queue")
      ->check(CLI::IsMember({"filtered", "exact"}));
  match->add_option("--workers", margs.workers, "worker threads (results are identical)");
  match->add_flag("--timings", margs.timings, "append elapsed_ms to the stats line");

  MatchArgs oargs;
  std::string cnf_path;
  auto* oracle = app.add_subcommand("oracle", "brute force reference results");
  oracle->add_option("--naa", oargs.naa_path, "automaton file");
  oracle->add_option("--words", oargs.word_paths, "word file (repeatable)");
  oracle->add_option("--cnf", cnf_path, "DIMACS file: print sat/unsat via the reduction");
  oracle->add_option("--output", oargs.output, "matches, stats, or both")
      ->check(CLI::IsMember({"matches", "stats", "both"}));
  oracle->add_flag("--timings", oargs.timings, "append elapsed_ms to the stats line");

  GenArgs gargs;
  auto* gen = app.add_subcommand("gen", "generate an instance and write it to files");
  gen->add_option("--family", gargs.family,
                  "counting, interference, robustness, packet-pairs, many-dirs, blowup, or cnf")
      ->required();
  gen->add_option("--k", gargs.k, "directions (many-dirs, blowup)");
  gen->add_option("--len", gargs.len, "word length");
  gen->add_option("--count", gargs.count, "number of words");
  gen->add_option("--seed", gargs.seed, "rng seed");
  gen->add_option("--vars", gargs.vars, "cnf: variable count");
  gen->add_option("--clauses", gargs.clauses, "cnf: clause count");
  gen->add_option("--out-naa", gargs.out_naa, "automaton output path");
  gen->add_option("--out-words", gargs.out_words, "words output path");
  gen->add_option("--out-cnf", gargs.out_cnf, "cnf: DIMACS output path");

  BenchArgs bargs;
  auto* bench = app.add_subcommand("bench", "run engines over generated instances");
  bench->add_option("--family", bargs.family, "instance family")->required();
  bench->add_option("--k", bargs.k, "directions (many-dirs, blowup)");
  bench->add_option("--lengths", bargs.lengths, "comma-separated word lengths");
  bench->add_option("--count", bargs.count, "number of words per instance");
  bench->add_option("--seed", bargs.seed, "rng seed");
  bench->add_option("--engines", bargs.engines, "comma-separated engine names");
  bench->add_option("--reps", bargs.reps, "repetitions per configuration");
  bench->add_option("--timeout-ms", bargs.timeout_ms, "stop repeating past this elapsed time");

  std::string dump_naa_path;
  auto* dump_skip = app.add_subcommand("dump-skip-tables", "print skip tables");
  dump_skip->add_option("--naa", dump_naa_path, "automaton file")->required();

  MatchArgs fargs;
  auto* dump_filter = app.add_subcommand("dump-filtered", "print projection-filtered words");
  dump_filter->add_option("--naa", fargs.naa_path, "automaton file")->required();
  dump_filter->add_option("--words", fargs.word_paths, "word file (repeatable)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (match->parsed()) return run_match(margs);
    if (oracle->parsed()) {
      if (cnf_path.empty() && oargs.naa_path.empty()) {
        std::cerr << "oracle needs --naa/--words or --cnf\n";
        return 1;
      }
      return run_oracle(oargs, cnf_path);
    }
    if (gen->parsed()) return run_gen(gargs);
    if (bench->parsed()) return run_bench(bargs);
    if (dump_skip->parsed()) {
      std::cout << hpm::dump_skip_tables(hpm::parse_naa(dump_naa_path));
      return 0;
    }
    if (dump_filter->parsed()) {
      hpm::Naa naa = hpm::parse_naa(fargs.naa_path);
      hpm::Alphabet alpha = naa.alphabet;
      hpm::WordSet ws = load_words(fargs.word_paths, alpha);
      std::cout << hpm::dump_filtered(naa, ws, alpha);
      return 0;
    }
  } catch (const hpm::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const hpm::GuardError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const hpm::EmptyLanguageError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
