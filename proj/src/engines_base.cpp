#include "smc/engines_base.hpp"

#include <chrono>

#include "smc/cnf.hpp"
#include "smc/pdr.hpp"

namespace smc {

namespace {

using clock_t_ = std::chrono::steady_clock;

double ms_since(clock_t_::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_t_::now() - t0)
      .count();
}

std::vector<bool> inputs_at(const TransitionSystem& ts, VarMap& map,
                            const sat::Solver& s, int t) {
  std::vector<bool> line(ts.num_inputs(), false);
  for (uint32_t i = 0; i < ts.num_inputs(); ++i)
    line[i] = s.model_bool(sat::mk_lit(map.input_at(i, t)));
  return line;
}

Witness witness_from_model(const TransitionSystem& ts, VarMap& map,
                           const sat::Solver& s, int depth) {
  Witness w;
  for (int t = 0; t <= depth; ++t) w.inputs.push_back(inputs_at(ts, map, s, t));
  for (size_t idx : ts.free_init_latches())
    w.inputs[0].push_back(s.model_bool(
        sat::mk_lit(const_cast<VarMap&>(map).latch_at(
            static_cast<uint32_t>(idx), 0))));
  return w;
}

}  // namespace

CheckResult bmc(const TransitionSystem& ts, int max_depth) {
  auto t0 = clock_t_::now();
  CheckResult res;
  EngineStats& st = res.stats;
  auto finish = [&](Verdict v) {
    res.verdict = v;
    st.time_ms = ms_since(t0);
    return res;
  };

  sat::Solver solver;
  VarMap map(solver);
  for (const auto& c : encode_init(ts, 0, map).clauses) solver.add_clause(c);
  for (size_t i = 0; i < ts.num_latches(); ++i)
    map.latch_at(static_cast<uint32_t>(i), 0);

  for (int depth = 0; depth <= max_depth; ++depth) {
    if (depth > 0)
      for (const auto& c : encode_tr(ts, depth - 1, map).clauses)
        solver.add_clause(c);
    CnfFormula cone;
    MaybeLit bad = encode_bad(ts, depth, map, cone);
    for (const auto& c : cone.clauses) solver.add_clause(c);
    ++st.sat_queries;
    ++st.iterations;
    st.frames = depth;
    if (bad.is_const) {
      if (!bad.const_val) continue;
      // Constant-true bad: any assignment works.
      if (solver.solve() == sat::SolveStatus::sat) {
        res.witness = witness_from_model(ts, map, solver, depth);
        return finish(Verdict::unsafe);
      }
      continue;
    }
    sat::Lit assume[] = {bad.lit};
    if (solver.solve(assume) == sat::SolveStatus::sat) {
      res.witness = witness_from_model(ts, map, solver, depth);
      return finish(Verdict::unsafe);
    }
    solver.add_clause({sat::neg(bad.lit)});
  }
  return finish(Verdict::unknown);
}

namespace {

// Pairwise state distinctness over latch vectors, eagerly encoded: for
// each pair of frames some latch differs.
void add_simple_path(const TransitionSystem& ts, VarMap& map,
                     sat::Solver& solver, int frames) {
  if (ts.num_latches() == 0) return;
  for (int a = 0; a < frames; ++a) {
    for (int b = a + 1; b <= frames; ++b) {
      std::vector<sat::Lit> some_diff;
      for (uint32_t i = 0; i < ts.num_latches(); ++i) {
        sat::Lit la = sat::mk_lit(map.latch_at(i, a));
        sat::Lit lb = sat::mk_lit(map.latch_at(i, b));
        sat::Lit d = sat::mk_lit(map.fresh_aux(b));
        // d -> (la xor lb)
        solver.add_clause({sat::neg(d), la, lb});
        solver.add_clause({sat::neg(d), sat::neg(la), sat::neg(lb)});
        some_diff.push_back(d);
      }
      solver.add_clause(some_diff);
    }
  }
}

}  // namespace

CheckResult kind(const TransitionSystem& ts, int max_k, bool simple_path) {
  auto t0 = clock_t_::now();
  CheckResult res;
  EngineStats& st = res.stats;
  auto finish = [&](Verdict v) {
    res.verdict = v;
    st.time_ms = ms_since(t0);
    return res;
  };

  for (int k = 1; k <= max_k; ++k) {
    // Base: the property holds in the first k-1 steps.
    CheckResult base = bmc(ts, k - 1);
    st.sat_queries += base.stats.sat_queries;
    if (base.verdict == Verdict::unsafe) {
      res.witness = std::move(base.witness);
      st.frames = base.stats.frames;
      return finish(Verdict::unsafe);
    }
    // Step: k property steps cannot end in a violation.
    sat::Solver solver;
    VarMap map(solver);
    bool vacuous = false;
    for (int t = 0; t < k && !vacuous; ++t) {
      for (const auto& c : encode_tr(ts, t, map).clauses) solver.add_clause(c);
      CnfFormula cone;
      MaybeLit b = encode_bad(ts, t, map, cone);
      for (const auto& c : cone.clauses) solver.add_clause(c);
      if (b.is_const) {
        // Constant-true bad would have failed the base case already.
        if (b.const_val) vacuous = true;
      } else {
        solver.add_clause({sat::neg(b.lit)});
      }
    }
    CnfFormula cone;
    MaybeLit bad = encode_bad(ts, k, map, cone);
    for (const auto& c : cone.clauses) solver.add_clause(c);
    bool step_unsat;
    if (vacuous || (bad.is_const && !bad.const_val)) {
      step_unsat = true;
    } else {
      if (!bad.is_const) solver.add_clause({bad.lit});
      if (simple_path) add_simple_path(ts, map, solver, k);
      ++st.sat_queries;
      step_unsat = solver.solve() == sat::SolveStatus::unsat;
    }
    ++st.iterations;
    st.frames = k;
    if (step_unsat) {
      st.converged_k = k;
      // Certificate of the k-inductive argument is the reachable-state
      // role of the property itself; no CNF invariant is produced here.
      return finish(Verdict::safe);
    }
  }
  return finish(Verdict::unknown);
}

}  // namespace smc
