#include "helpers.hpp"

#include "smc/cnf.hpp"

namespace smc::test {

bool k_inductive_relative(FormulaStore& fs, FormulaRef phi,
                          const std::vector<StateClause>& rel,
                          const TransitionSystem& ts, int k) {
  sat::Solver s;
  VarMap map(s);
  bool trivially_unsat = false;
  auto add_f = [&](FormulaRef f, int t) {
    CnfFormula defs;
    MaybeLit m = encode_formula(fs, f, t, map, defs);
    for (auto& c : defs.clauses) s.add_clause(c);
    if (m.is_const) {
      if (!m.const_val) trivially_unsat = true;
    } else {
      s.add_clause({m.lit});
    }
  };
  for (int t = 0; t < k; ++t) {
    add_f(phi, t);
    for (auto& c : instantiate(rel, t, map).clauses) s.add_clause(c);
    for (auto& c : encode_tr(ts, t, map).clauses) s.add_clause(c);
  }
  add_f(fs.negate(phi), k);
  if (trivially_unsat) return true;
  return s.solve() == sat::SolveStatus::unsat;
}

}  // namespace smc::test
