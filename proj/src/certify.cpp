#include "smc/certify.hpp"

#include <sstream>

#include "smc/cnf.hpp"

namespace smc {

Invariant extract_invariant(const InductiveTrace& trace, int level) {
  if (level < 1 || level > trace.size())
    throw std::invalid_argument("extract_invariant: not a closing level");
  return trace.frame_clauses(level);
}

namespace {

// Adds clauses of the invariant at frame t.
void add_invariant(const Invariant& inv, int t, VarMap& map, sat::Solver& s) {
  for (const StateClause& c : inv) {
    std::vector<sat::Lit> cl;
    cl.reserve(c.size());
    for (StateLit l : c) cl.push_back(map.lit_at(l, t));
    s.add_clause(cl);
  }
}

// Adds a Tseitin selector asserting that some clause of inv is false at t.
void assert_some_clause_false(const Invariant& inv, int t, VarMap& map,
                              sat::Solver& s) {
  std::vector<sat::Lit> sel;
  for (const StateClause& c : inv) {
    sat::Lit g = sat::mk_lit(map.fresh_aux(t));
    for (StateLit l : c)
      s.add_clause({sat::neg(g), sat::neg(map.lit_at(l, t))});
    sel.push_back(g);
  }
  s.add_clause(sel);  // empty invariant (true) yields the empty clause
}

}  // namespace

bool check_invariant(const Invariant& inv, const TransitionSystem& ts,
                     uint64_t* queries, std::string* diag) {
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m;
    return false;
  };
  // (1) Init => Inv.
  {
    sat::Solver s;
    VarMap map(s);
    for (const auto& c : encode_init(ts, 0, map).clauses) s.add_clause(c);
    if (!inv.empty()) {
      assert_some_clause_false(inv, 0, map, s);
      if (queries) ++*queries;
      if (s.solve() != sat::SolveStatus::unsat)
        return fail("initiation fails: an initial state violates Inv");
    }
  }
  // (2) Inv ∧ Tr => Inv'.
  if (!inv.empty()) {
    sat::Solver s;
    VarMap map(s);
    add_invariant(inv, 0, map, s);
    for (const auto& c : encode_tr(ts, 0, map).clauses) s.add_clause(c);
    assert_some_clause_false(inv, 1, map, s);
    if (queries) ++*queries;
    if (s.solve() != sat::SolveStatus::unsat)
      return fail("consecution fails: Inv is not inductive");
  }
  // (3) Inv => ¬Bad.
  {
    sat::Solver s;
    VarMap map(s);
    add_invariant(inv, 0, map, s);
    CnfFormula cone;
    MaybeLit bad = encode_bad(ts, 0, map, cone);
    for (const auto& c : cone.clauses) s.add_clause(c);
    if (bad.is_const) {
      if (bad.const_val) return fail("safety fails: bad is constant true");
    } else {
      s.add_clause({bad.lit});
      if (queries) ++*queries;
      if (s.solve() != sat::SolveStatus::unsat)
        return fail("safety fails: Inv intersects Bad");
    }
  }
  return true;
}

bool check_witness(const Witness& w, const TransitionSystem& ts,
                   std::string* diag) {
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m;
    return false;
  };
  if (w.inputs.empty()) return fail("empty stimulus");
  size_t free_count = ts.free_init_latches().size();
  if (w.inputs[0].size() != ts.num_inputs() + free_count)
    return fail("frame-0 stimulus arity mismatch");
  for (size_t t = 1; t < w.inputs.size(); ++t)
    if (w.inputs[t].size() != ts.num_inputs())
      return fail("stimulus arity mismatch at frame " + std::to_string(t));
  if (ts.num_latches() > 64 || ts.num_inputs() > 64)
    return fail("witness replay limited to 64 latches/inputs");

  uint64_t state = 0;
  for (uint32_t i = 0; i < ts.num_latches(); ++i)
    if (ts.latch(i).init == LatchInit::one) state |= uint64_t{1} << i;
  {
    size_t at = ts.num_inputs();
    for (size_t idx : ts.free_init_latches()) {
      if (w.inputs[0][at++]) state |= uint64_t{1} << idx;
    }
  }
  auto pack = [&](const std::vector<bool>& line) {
    uint64_t v = 0;
    for (size_t i = 0; i < ts.num_inputs(); ++i)
      if (line[i]) v |= uint64_t{1} << i;
    return v;
  };
  size_t last = w.inputs.size() - 1;
  for (size_t t = 0; t < last; ++t)
    state = ts.step(state, pack(w.inputs[t])).next_state;
  if (!ts.eval_bad(state, pack(w.inputs[last])))
    return fail("final frame does not reach a bad state");
  return true;
}

std::string invariant_to_text(const Invariant& inv, size_t num_latches) {
  std::ostringstream os;
  os << "p inv " << num_latches << ' ' << inv.size() << "\n";
  for (const StateClause& c : inv) {
    for (StateLit l : c)
      os << (state_lit_negated(l) ? "-" : "") << (state_lit_latch(l) + 1)
         << ' ';
    os << "0\n";
  }
  return os.str();
}

}  // namespace smc
