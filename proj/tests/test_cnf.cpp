#include <gtest/gtest.h>

#include "modsat/cnf.hpp"
#include "modsat/rng.hpp"
#include "oracle.hpp"

using namespace modsat;

namespace {

Clause clause(std::initializer_list<long> lits) {
  Clause c;
  for (long l : lits) c.push_back(Lit::from_dimacs(l));
  return c;
}

Formula random_formula(Rng& rng, int max_vars) {
  Formula f;
  f.num_vars = static_cast<int>(rng.between(0, max_vars));
  const int m = f.num_vars == 0 ? 0 : static_cast<int>(rng.between(0, 3 * f.num_vars));
  for (int i = 0; i < m; ++i) {
    Clause c;
    const int k = static_cast<int>(rng.between(1, 4));
    for (int j = 0; j < k; ++j) c.push_back(Lit(static_cast<Var>(rng.below(f.num_vars)), rng.bernoulli(0.5)));
    if (normalize_clause(c)) f.clauses.push_back(c);
  }
  return f;
}

} // namespace

TEST(Lit, DimacsMapping) {
  const Lit a = Lit::from_dimacs(3);
  EXPECT_EQ(a.var(), 2);
  EXPECT_FALSE(a.negated());
  EXPECT_EQ((~a).to_dimacs(), -3);
  EXPECT_EQ((~a).var(), a.var());
  EXPECT_EQ(~~a, a);
}

TEST(Dimacs, ParsesHeaderAndClauses) {
  const auto r = parse_dimacs("p cnf 2 2\n1 -2 0\n2 0");
  EXPECT_EQ(r.formula.num_vars, 2);
  ASSERT_EQ(r.formula.clauses.size(), 2u);
  EXPECT_EQ(r.formula.clauses[0], clause({1, -2}));
  EXPECT_EQ(r.formula.clauses[1], clause({2}));
  EXPECT_FALSE(r.clause_count_mismatch);
}

TEST(Dimacs, SkipsComments) {
  const auto r = parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0");
  ASSERT_EQ(r.formula.clauses.size(), 2u);
  EXPECT_EQ(r.formula.clauses[0], clause({1}));
  EXPECT_EQ(r.formula.clauses[1], clause({-1}));
}

TEST(Dimacs, DropsTautologies) {
  const auto r = parse_dimacs("p cnf 1 1\n1 -1 0");
  EXPECT_TRUE(r.formula.clauses.empty());
  EXPECT_EQ(r.tautologies_dropped, 1u);
}

TEST(Dimacs, DeduplicatesAndKeepsEmptyClause) {
  const auto r = parse_dimacs("p cnf 2 2\n1 1 2 0\n0\n");
  ASSERT_EQ(r.formula.clauses.size(), 2u);
  EXPECT_EQ(r.formula.clauses[0], clause({1, 2}));
  EXPECT_TRUE(r.formula.clauses[1].empty());
  EXPECT_EQ(r.duplicate_literals_removed, 1u);
}

TEST(Dimacs, ClauseCountMismatchIsFlaggedOrRejected) {
  const auto r = parse_dimacs("p cnf 2 3\n1 0\n");
  EXPECT_TRUE(r.clause_count_mismatch);
  EXPECT_THROW(parse_dimacs("p cnf 2 3\n1 0\n", DimacsOptions{true}), DimacsError);
}

TEST(Dimacs, Errors) {
  EXPECT_THROW(parse_dimacs("p cnf x 1\n1 0\n"), DimacsError);
  EXPECT_THROW(parse_dimacs("p dnf 1 1\n1 0\n"), DimacsError);
  EXPECT_THROW(parse_dimacs("1 0\n"), DimacsError);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), DimacsError);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n1 a 0\n"), DimacsError);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n1"), DimacsError);
  try {
    parse_dimacs("p cnf 1 1\n\n1 z 0\n");
    FAIL();
  } catch (const DimacsError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Dimacs, Writes) {
  Formula f{1, {clause({1})}};
  EXPECT_EQ(write_dimacs(f), "p cnf 1 1\n1 0\n");
  EXPECT_EQ(write_dimacs(Formula{}), "p cnf 0 0\n");
}

TEST(Dimacs, RoundTripRandomFormulas) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Formula f = random_formula(rng, 20);
    const auto back = parse_dimacs(write_dimacs(f), DimacsOptions{true});
    EXPECT_EQ(back.formula, f);
  }
}

TEST(Evaluate, Examples) {
  Formula f{2, {clause({1, 2}), clause({-1})}};
  Assignment a(2);
  a.set(0, false);
  a.set(1, true);
  EXPECT_EQ(evaluate(f, a), Evaluation::Satisfied);

  Formula g{1, {clause({1}), clause({-1})}};
  for (bool b : {false, true}) {
    Assignment x(1);
    x.set(0, b);
    EXPECT_EQ(evaluate(g, x), Evaluation::Falsified);
  }

  Formula h{2, {clause({1, 2})}};
  Assignment partial(2);
  partial.set(0, false);
  EXPECT_EQ(evaluate(h, partial), Evaluation::Undetermined);
}

TEST(Evaluate, AgreesWithLiteralEvaluationExhaustively) {
  Rng rng(5);
  for (int round = 0; round < 60; ++round) {
    Formula f = random_formula(rng, 10);
    const int n = f.num_vars;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      Assignment a(n);
      for (int v = 0; v < n; ++v) a.set(v, (bits >> v) & 1);
      const bool expect = test::satisfies(f, a);
      EXPECT_EQ(evaluate(f, a) == Evaluation::Satisfied, expect);
      EXPECT_NE(evaluate(f, a), Evaluation::Undetermined);
    }
  }
}
