// SPDX-License-Identifier: MIT
//
// File formats and output records.
//
// Automaton files are line oriented. Lines starting with '#' and blank lines
// are ignored. The five header lines (alphabet, directions, states, initial,
// accepting) must each appear exactly once and before any `trans` line:
//
//   alphabet <tok> <tok> ...
//   directions <k>
//   states <name> <name> ...
//   initial <name> ...
//   accepting <name> ...
//   trans <from> <letter> <direction 1..k> <to>
//
// Word files hold one word per line as whitespace-separated letter tokens;
// blank lines and '#' lines are skipped. Word letters need not belong to the
// automaton's alphabet.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hpm/automata.hpp"
#include "hpm/oracle.hpp"

namespace hpm {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, uint32_t line, uint32_t col, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                           msg),
        file_(std::move(file)),
        line_(line),
        col_(col) {}

  const std::string& file() const { return file_; }
  uint32_t line() const { return line_; }
  uint32_t col() const { return col_; }

 private:
  std::string file_;
  uint32_t line_;
  uint32_t col_;
};

namespace detail {

struct Token {
  std::string text;
  uint32_t col;  // 1-based start column
};

inline std::vector<Token> split_tokens(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), static_cast<uint32_t>(start + 1)});
  }
  return out;
}

inline bool parse_uint(const std::string& s, uint64_t& out) {
  if (s.empty()) return false;
  out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<uint64_t>(c - '0');
    if (out > 0xffffffffull) return false;
  }
  return true;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

inline Naa parse_naa_text(const std::string& text, const std::string& filename) {
  Naa naa;
  std::unordered_map<std::string, StateId> state_ids;
  bool saw_alphabet = false, saw_directions = false, saw_states = false, saw_initial = false,
       saw_accepting = false;

  std::istringstream in(text);
  std::string line;
  uint32_t lineno = 0;
  auto fail = [&](uint32_t col, const std::string& msg) -> void {
    throw ParseError(filename, lineno, col, msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_tokens(line);
    if (toks.empty() || toks[0].text[0] == '#') continue;
    const std::string& key = toks[0].text;

    if (key == "alphabet") {
      if (saw_alphabet) fail(toks[0].col, "duplicate alphabet line");
      if (toks.size() < 2) fail(toks[0].col, "alphabet must list at least one letter");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (naa.alphabet.find(toks[i].text)) fail(toks[i].col, "duplicate letter token");
        try {
          naa.alphabet.intern(toks[i].text);
        } catch (const std::invalid_argument& e) {
          fail(toks[i].col, e.what());
        }
      }
      saw_alphabet = true;
    } else if (key == "directions") {
      if (saw_directions) fail(toks[0].col, "duplicate directions line");
      uint64_t k = 0;
      if (toks.size() != 2 || !detail::parse_uint(toks[1].text, k) || k < 1)
        fail(toks.size() > 1 ? toks[1].col : toks[0].col, "directions needs one integer >= 1");
      naa.num_directions = static_cast<uint32_t>(k);
      saw_directions = true;
    } else if (key == "states") {
      if (saw_states) fail(toks[0].col, "duplicate states line");
      if (toks.size() < 2) fail(toks[0].col, "states must list at least one name");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (state_ids.count(toks[i].text)) fail(toks[i].col, "duplicate state name");
        state_ids.emplace(toks[i].text, static_cast<StateId>(naa.state_names.size()));
        naa.state_names.push_back(toks[i].text);
      }
      saw_states = true;
    } else if (key == "initial" || key == "accepting") {
      bool& seen = (key == "initial") ? saw_initial : saw_accepting;
      if (seen) fail(toks[0].col, "duplicate " + key + " line");
      if (!saw_states) fail(toks[0].col, key + " must come after states");
      if (key == "accepting") naa.accepting.assign(naa.state_names.size(), 0);
      for (size_t i = 1; i < toks.size(); ++i) {
        auto it = state_ids.find(toks[i].text);
        if (it == state_ids.end()) fail(toks[i].col, "unknown state name");
        if (key == "initial")
          naa.initial.push_back(it->second);
        else
          naa.accepting[it->second] = 1;
      }
      seen = true;
    } else if (key == "trans") {
      if (!saw_alphabet || !saw_directions || !saw_states)
        fail(toks[0].col, "trans must come after alphabet, directions, and states");
      if (toks.size() != 5) fail(toks[0].col, "trans needs: from letter direction to");
      auto from = state_ids.find(toks[1].text);
      if (from == state_ids.end()) fail(toks[1].col, "unknown state name");
      auto letter = naa.alphabet.find(toks[2].text);
      if (!letter) fail(toks[2].col, "letter not in alphabet");
      uint64_t dir = 0;
      if (!detail::parse_uint(toks[3].text, dir) || dir < 1 || dir > naa.num_directions)
        fail(toks[3].col, "direction out of range");
      auto to = state_ids.find(toks[4].text);
      if (to == state_ids.end()) fail(toks[4].col, "unknown state name");
      naa.transitions.push_back({from->second, *letter, static_cast<uint32_t>(dir - 1), to->second});
    } else {
      fail(toks[0].col, "unknown keyword: " + key);
    }
  }
  ++lineno;
  if (!saw_alphabet) throw ParseError(filename, lineno, 1, "missing alphabet line");
  if (!saw_directions) throw ParseError(filename, lineno, 1, "missing directions line");
  if (!saw_states) throw ParseError(filename, lineno, 1, "missing states line");
  if (!saw_initial) throw ParseError(filename, lineno, 1, "missing initial line");
  if (!saw_accepting) throw ParseError(filename, lineno, 1, "missing accepting line");
  naa.finalize();
  return naa;
}

inline Naa parse_naa(const std::string& path) { return parse_naa_text(read_file(path), path); }

/// Appends the words of one file to `ws`, interning letters into `alpha`
/// (which may grow: word letters need not appear in any automaton).
inline void parse_words_text(const std::string& text, const std::string& filename, Alphabet& alpha,
                             WordSet& ws) {
  std::istringstream in(text);
  std::string line;
  uint32_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_tokens(line);
    if (toks.empty() || toks[0].text[0] == '#') continue;
    Word w;
    for (const auto& t : toks) {
      try {
        w.letters.push_back(alpha.intern(t.text));
      } catch (const std::invalid_argument& e) {
        throw ParseError(filename, lineno, t.col, e.what());
      }
    }
    ws.words.push_back(std::move(w));
  }
}

inline WordSet parse_words(const std::string& path, Alphabet& alpha) {
  WordSet ws;
  parse_words_text(read_file(path), path, alpha, ws);
  return ws;
}

/// DIMACS-style CNF: 'c' comment lines, one 'p cnf <vars> <clauses>' header,
/// then clauses as integers terminated by 0 (clauses may span lines).
inline Cnf parse_dimacs_text(const std::string& text, const std::string& filename) {
  Cnf cnf;
  bool saw_header = false;
  uint64_t declared_clauses = 0;
  std::vector<int32_t> current;
  std::istringstream in(text);
  std::string line;
  uint32_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_tokens(line);
    if (toks.empty() || toks[0].text == "c") continue;
    if (toks[0].text == "p") {
      if (saw_header) throw ParseError(filename, lineno, toks[0].col, "duplicate header");
      uint64_t v = 0;
      if (toks.size() != 4 || toks[1].text != "cnf" || !detail::parse_uint(toks[2].text, v) ||
          !detail::parse_uint(toks[3].text, declared_clauses))
        throw ParseError(filename, lineno, toks[0].col, "header must be: p cnf <vars> <clauses>");
      cnf.num_vars = static_cast<uint32_t>(v);
      saw_header = true;
      continue;
    }
    if (!saw_header) throw ParseError(filename, lineno, toks[0].col, "clause before header");
    for (const auto& t : toks) {
      int64_t lit = 0;
      try {
        size_t used = 0;
        lit = std::stoll(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("");
      } catch (...) {
        throw ParseError(filename, lineno, t.col, "expected integer literal");
      }
      if (lit == 0) {
        if (current.empty()) throw ParseError(filename, lineno, t.col, "empty clause");
        cnf.clauses.push_back(current);
        current.clear();
      } else {
        uint64_t v = static_cast<uint64_t>(lit < 0 ? -lit : lit);
        if (v > cnf.num_vars)
          throw ParseError(filename, lineno, t.col, "variable index out of range");
        current.push_back(static_cast<int32_t>(lit));
      }
    }
  }
  ++lineno;
  if (!saw_header) throw ParseError(filename, lineno, 1, "missing header");
  if (!current.empty()) throw ParseError(filename, lineno, 1, "unterminated clause");
  if (cnf.clauses.size() != declared_clauses)
    throw ParseError(filename, lineno, 1, "clause count does not match header");
  return cnf;
}

inline Cnf parse_dimacs(const std::string& path) {
  return parse_dimacs_text(read_file(path), path);
}

// ---------------------------------------------------------------------------
// Writers (canonical form; parse(write(x)) reproduces x)

inline std::string write_naa(const Naa& naa) {
  std::ostringstream out;
  out << "alphabet";
  for (LetterId a = 0; a < naa.alphabet.size(); ++a) out << ' ' << naa.alphabet.token(a);
  out << '\n';
  out << "directions " << naa.num_directions << '\n';
  out << "states";
  for (const auto& n : naa.state_names) out << ' ' << n;
  out << '\n';
  out << "initial";
  for (StateId s : naa.initial) out << ' ' << naa.state_names[s];
  out << '\n';
  out << "accepting";
  for (StateId s = 0; s < naa.num_states(); ++s)
    if (naa.accepting[s]) out << ' ' << naa.state_names[s];
  out << '\n';
  for (const NaaTrans& t : naa.transitions)
    out << "trans " << naa.state_names[t.from] << ' ' << naa.alphabet.token(t.letter) << ' '
        << t.dir + 1 << ' ' << naa.state_names[t.to] << '\n';
  return out.str();
}

inline std::string write_words(const WordSet& ws, const Alphabet& alpha) {
  std::ostringstream out;
  for (const Word& w : ws.words) {
    for (uint32_t i = 0; i < w.size(); ++i) {
      if (i) out << ' ';
      out << alpha.token(w.letters[i]);
    }
    out << '\n';
  }
  return out.str();
}

inline std::string write_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& cl : cnf.clauses) {
    for (int32_t lit : cl) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Output records

/// One match per line: "[(wid,begin,end),...]" with entries in direction
/// order, word ids 0-based, positions 1-based.
inline std::string format_match_tuple(const MatchTuple& t) {
  std::string out = "[";
  for (size_t i = 0; i < t.entries.size(); ++i) {
    if (i) out += ',';
    out += '(' + std::to_string(t.entries[i].word) + ',' + std::to_string(t.entries[i].begin) +
           ',' + std::to_string(t.entries[i].end) + ')';
  }
  out += ']';
  return out;
}

}  // namespace hpm
