#include "modsat/cnf.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace modsat {

Evaluation evaluate(const Formula& f, const Assignment& a) {
  bool all_satisfied = true;
  for (const Clause& c : f.clauses) {
    bool sat = false, open = false;
    for (Lit l : c) {
      const LBool v = a.value(l);
      if (v == LBool::True) {
        sat = true;
        break;
      }
      if (v == LBool::Undef) open = true;
    }
    if (sat) continue;
    if (!open) return Evaluation::Falsified;
    all_satisfied = false;
  }
  return all_satisfied ? Evaluation::Satisfied : Evaluation::Undetermined;
}

bool normalize_clause(Clause& c, std::size_t* duplicates_removed) {
  std::unordered_set<std::uint32_t> seen;
  Clause out;
  out.reserve(c.size());
  for (Lit l : c) {
    if (seen.count((~l).code())) return false;
    if (!seen.insert(l.code()).second) {
      if (duplicates_removed) ++*duplicates_removed;
      continue;
    }
    out.push_back(l);
  }
  c = std::move(out);
  return true;
}

namespace {

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\v' || ch == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool to_long(std::string_view tok, long& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

} // namespace

DimacsParse parse_dimacs(std::istream& in, const DimacsOptions& opts) {
  DimacsParse result;
  bool have_header = false;
  long num_vars = 0;
  Clause current;
  bool clause_open = false;
  std::string line;
  int lineno = 0;
  std::size_t clauses_read = 0;

  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0][0] == 'c') continue;
    // SATLIB files end with a '%' line.
    if (tokens[0][0] == '%') break;
    if (tokens[0] == "p") {
      if (have_header) throw DimacsError("duplicate header", lineno);
      long nv = 0, nc = 0;
      if (tokens.size() != 4 || tokens[1] != "cnf" || !to_long(tokens[2], nv) || !to_long(tokens[3], nc) || nv < 0 ||
          nc < 0)
        throw DimacsError("malformed header: expected 'p cnf <vars> <clauses>'", lineno);
      have_header = true;
      num_vars = nv;
      result.declared_clauses = static_cast<std::size_t>(nc);
      result.formula.num_vars = static_cast<int>(nv);
      continue;
    }
    if (!have_header) throw DimacsError("malformed header: clause data before 'p cnf' line", lineno);
    for (std::string_view tok : tokens) {
      long v = 0;
      if (!to_long(tok, v)) throw DimacsError("non-integer token '" + std::string(tok) + "'", lineno);
      if (v == 0) {
        ++clauses_read;
        if (normalize_clause(current, &result.duplicate_literals_removed))
          result.formula.clauses.push_back(std::move(current));
        else
          ++result.tautologies_dropped;
        current.clear();
        clause_open = false;
        continue;
      }
      if (v > num_vars || -v > num_vars)
        throw DimacsError("literal " + std::string(tok) + " exceeds declared variable count", lineno);
      current.push_back(Lit::from_dimacs(v));
      clause_open = true;
    }
  }
  if (!have_header) throw DimacsError("malformed header: missing 'p cnf' line", lineno);
  if (clause_open) throw DimacsError("missing terminating 0 at end of stream", lineno);
  result.clause_count_mismatch = clauses_read != result.declared_clauses;
  if (opts.strict && result.clause_count_mismatch)
    throw DimacsError("header declares " + std::to_string(result.declared_clauses) + " clauses but " +
                          std::to_string(clauses_read) + " were read",
                      lineno);
  return result;
}

DimacsParse parse_dimacs(std::string_view text, const DimacsOptions& opts) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in, opts);
}

DimacsParse read_dimacs_file(const std::string& path, const DimacsOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_dimacs(in, opts);
}

void write_dimacs(const Formula& f, std::ostream& out) {
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    for (Lit l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

std::string write_dimacs(const Formula& f) {
  std::ostringstream out;
  write_dimacs(f, out);
  return out.str();
}

} // namespace modsat
