#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace modsat {

// 0-based variable index. DIMACS variable k maps to Var k-1.
using Var = std::int32_t;

// Literal packed as 2*var + negated.
class Lit {
public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negated) : code_(static_cast<std::uint32_t>(v) * 2u + (negated ? 1u : 0u)) {}

  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }
  // DIMACS signed integer, nonzero.
  static Lit from_dimacs(long value) { return Lit(static_cast<Var>((value < 0 ? -value : value) - 1), value < 0); }

  constexpr Var var() const { return static_cast<Var>(code_ >> 1); }
  constexpr bool negated() const { return (code_ & 1u) != 0; }
  constexpr std::uint32_t code() const { return code_; }
  long to_dimacs() const { return negated() ? -(static_cast<long>(var()) + 1) : static_cast<long>(var()) + 1; }

  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  constexpr auto operator<=>(const Lit&) const = default;

private:
  std::uint32_t code_ = 0;
};

enum class LBool : std::uint8_t { False = 0, True = 1, Undef = 2 };

constexpr LBool to_lbool(bool b) { return b ? LBool::True : LBool::False; }

using Clause = std::vector<Lit>;

struct Formula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  bool operator==(const Formula&) const = default;
};

struct Assignment {
  std::vector<LBool> values;

  Assignment() = default;
  explicit Assignment(int num_vars) : values(static_cast<std::size_t>(num_vars), LBool::Undef) {}

  LBool value(Var v) const {
    return static_cast<std::size_t>(v) < values.size() ? values[static_cast<std::size_t>(v)] : LBool::Undef;
  }
  LBool value(Lit l) const {
    const LBool b = value(l.var());
    if (b == LBool::Undef) return b;
    return to_lbool((b == LBool::True) != l.negated());
  }
  void set(Var v, bool b) {
    if (static_cast<std::size_t>(v) >= values.size()) values.resize(static_cast<std::size_t>(v) + 1, LBool::Undef);
    values[static_cast<std::size_t>(v)] = to_lbool(b);
  }
};

enum class Evaluation { Satisfied, Falsified, Undetermined };

Evaluation evaluate(const Formula& f, const Assignment& a);

class DimacsError : public std::runtime_error {
public:
  DimacsError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

struct DimacsOptions {
  // Reject header/clause-count mismatches instead of flagging them.
  bool strict = false;
};

struct DimacsParse {
  Formula formula;
  std::size_t declared_clauses = 0;
  std::size_t tautologies_dropped = 0;
  std::size_t duplicate_literals_removed = 0;
  bool clause_count_mismatch = false;
};

DimacsParse parse_dimacs(std::istream& in, const DimacsOptions& opts = {});
DimacsParse parse_dimacs(std::string_view text, const DimacsOptions& opts = {});
DimacsParse read_dimacs_file(const std::string& path, const DimacsOptions& opts = {});

void write_dimacs(const Formula& f, std::ostream& out);
std::string write_dimacs(const Formula& f);

// Removes duplicate literals (first occurrence kept). Returns false when the
// clause is a tautology.
bool normalize_clause(Clause& c, std::size_t* duplicates_removed = nullptr);

} // namespace modsat
