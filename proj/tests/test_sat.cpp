#include <doctest.h>

#include <random>

#include "smc/sat.hpp"

using namespace smc::sat;

namespace {

// Reference verdict by exhaustive assignment enumeration.
bool truth_table_sat(int nvars, const std::vector<std::vector<Lit>>& clauses) {
  for (uint32_t m = 0; m < (1u << nvars); ++m) {
    bool all = true;
    for (const auto& c : clauses) {
      bool sat = false;
      for (Lit l : c) {
        bool v = (m >> var_of(l)) & 1;
        if (sign_of(l) ? !v : v) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<std::vector<Lit>> random_3cnf(std::mt19937_64& rng, int nvars,
                                          int nclauses) {
  std::vector<std::vector<Lit>> out;
  for (int i = 0; i < nclauses; ++i) {
    std::vector<Lit> c;
    for (int j = 0; j < 3; ++j)
      c.push_back(mk_lit(rng() % nvars, rng() & 1));
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("contradicting units refute with a one-resolution proof") {
  Solver s;
  s.enable_proof_recording();
  Var x = s.new_var();
  s.add_clause({mk_lit(x)}, 0);
  bool ok = s.add_clause({mk_lit(x, true)}, 1);
  CHECK((!ok || s.solve() == SolveStatus::unsat));
  const ResolutionProof& p = s.proof();
  CHECK(validate_proof(p));
  CHECK(p.nodes[p.empty_id].lits.empty());
}

TEST_CASE("assumption solving returns a model consistent with assumptions") {
  Solver s;
  Var x = s.new_var(), y = s.new_var();
  s.add_clause({mk_lit(x), mk_lit(y)});
  Lit assume[] = {mk_lit(x, true)};
  REQUIRE(s.solve(assume) == SolveStatus::sat);
  CHECK(s.model_bool(mk_lit(y)));
  CHECK(!s.model_bool(mk_lit(x)));
}

TEST_CASE("200 random 3-cnf instances match truth-table enumeration") {
  std::mt19937_64 rng(12345);
  int sat_count = 0;
  for (int round = 0; round < 200; ++round) {
    auto clauses = random_3cnf(rng, 8, 34);
    Solver s;
    for (int v = 0; v < 8; ++v) s.new_var();
    bool consistent = true;
    for (auto& c : clauses)
      if (!s.add_clause(c)) consistent = false;
    bool expect = truth_table_sat(8, clauses);
    bool got = consistent && s.solve() == SolveStatus::sat;
    CHECK(got == expect);
    if (expect) {
      ++sat_count;
      // The model satisfies every clause.
      if (got) {
        for (auto& c : clauses) {
          bool cs = false;
          for (Lit l : c) cs = cs || s.model_bool(l);
          CHECK(cs);
        }
      }
    }
  }
  CHECK(sat_count > 10);
  CHECK(sat_count < 190);
}

TEST_CASE("proofs from 100 random unsat instances validate") {
  std::mt19937_64 rng(777);
  int done = 0, tries = 0;
  while (done < 100 && tries < 4000) {
    ++tries;
    auto clauses = random_3cnf(rng, 8, 40);
    if (truth_table_sat(8, clauses)) continue;
    Solver s;
    s.enable_proof_recording();
    for (int v = 0; v < 8; ++v) s.new_var();
    bool consistent = true;
    for (size_t i = 0; i < clauses.size(); ++i)
      consistent = s.add_clause(clauses[i], static_cast<int>(i)) && consistent;
    if (consistent) REQUIRE(s.solve() == SolveStatus::unsat);
    std::string diag;
    CHECK_MESSAGE(validate_proof(s.proof(), &diag), diag);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("a corrupted proof is rejected") {
  Solver s;
  s.enable_proof_recording();
  Var x = s.new_var(), y = s.new_var();
  s.add_clause({mk_lit(x), mk_lit(y)}, 0);
  s.add_clause({mk_lit(x), mk_lit(y, true)}, 0);
  s.add_clause({mk_lit(x, true), mk_lit(y)}, 1);
  s.add_clause({mk_lit(x, true), mk_lit(y, true)}, 1);
  REQUIRE(s.solve() == SolveStatus::unsat);
  ResolutionProof p = s.proof();
  REQUIRE(validate_proof(p));
  // Point some antecedent at a different clause.
  for (auto& n : p.nodes) {
    if (!n.is_input() && !n.chain.empty()) {
      n.chain[0].second = n.chain[0].second == 0 ? 1 : 0;
      break;
    }
  }
  std::string diag;
  bool ok = validate_proof(p, &diag);
  CHECK(!ok);
  CHECK(!diag.empty());
}

TEST_CASE("assumption core is sound: re-solving with it as units is unsat") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 50; ++round) {
    auto clauses = random_3cnf(rng, 8, 24);
    Solver s;
    for (int v = 0; v < 8; ++v) s.new_var();
    bool consistent = true;
    for (auto& c : clauses) consistent = s.add_clause(c) && consistent;
    if (!consistent) continue;
    std::vector<Lit> assumptions;
    for (int v = 0; v < 6; ++v) assumptions.push_back(mk_lit(v, rng() & 1));
    if (s.solve(assumptions) != SolveStatus::unsat) continue;
    std::vector<Lit> core = s.core();
    for (Lit l : core)
      CHECK(std::find(assumptions.begin(), assumptions.end(), l) !=
            assumptions.end());
    Solver s2;
    for (int v = 0; v < 8; ++v) s2.new_var();
    bool ok2 = true;
    for (auto& c : clauses) ok2 = s2.add_clause(c) && ok2;
    for (Lit l : core) ok2 = s2.add_clause({l}) && ok2;
    CHECK((!ok2 || s2.solve() == SolveStatus::unsat));
  }
}

TEST_CASE("determinism: identical call sequences give identical models") {
  auto run = [] {
    std::mt19937_64 rng(99);
    Solver s;
    for (int v = 0; v < 10; ++v) s.new_var();
    auto clauses = random_3cnf(rng, 10, 30);
    for (auto& c : clauses) s.add_clause(c);
    REQUIRE(s.solve() == SolveStatus::sat);
    std::vector<bool> model;
    for (int v = 0; v < 10; ++v) model.push_back(s.model_bool(mk_lit(v)));
    return model;
  };
  CHECK(run() == run());
}

TEST_CASE("incremental monotonicity: unsat stays unsat as clauses arrive") {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 30; ++round) {
    Solver s;
    for (int v = 0; v < 8; ++v) s.new_var();
    std::vector<Lit> assumptions{mk_lit(0u), mk_lit(1u, true)};
    bool was_unsat = false;
    bool consistent = true;
    for (int batch = 0; batch < 10; ++batch) {
      for (auto& c : random_3cnf(rng, 8, 4))
        consistent = s.add_clause(c) && consistent;
      bool unsat =
          !consistent || s.solve(assumptions) != SolveStatus::sat;
      if (was_unsat) CHECK(unsat);
      was_unsat = was_unsat || unsat;
    }
  }
}

TEST_CASE("conflict budget yields an explicit indeterminate result") {
  // A hard pigeonhole-style instance with a tiny budget.
  Solver s;
  const int holes = 7, pigeons = 8;
  std::vector<std::vector<Var>> at(pigeons);
  for (int p = 0; p < pigeons; ++p)
    for (int h = 0; h < holes; ++h) at[p].push_back(s.new_var());
  for (int p = 0; p < pigeons; ++p) {
    std::vector<Lit> c;
    for (int h = 0; h < holes; ++h) c.push_back(mk_lit(at[p][h]));
    s.add_clause(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q)
        s.add_clause({mk_lit(at[p][h], true), mk_lit(at[q][h], true)});
  s.set_conflict_budget(5);
  CHECK(s.solve() == SolveStatus::budget_exceeded);
  s.set_conflict_budget(-1);
  CHECK(s.solve() == SolveStatus::unsat);
}
