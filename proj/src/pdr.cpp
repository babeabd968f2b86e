#include "smc/pdr.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <stdexcept>

#include "smc/certify.hpp"
#include "smc/cnf.hpp"

namespace smc {

namespace {

bool cube_satisfies_init(const StateCube& state, const StateCube& init) {
  // Both are sorted by latch; state is a full minterm.
  return std::includes(state.begin(), state.end(), init.begin(), init.end());
}

}  // namespace

StateClause ind_gen(const StateCube& cube, int pen_level, StepSolver& step,
                    const StateCube& init) {
  StateClause c = negate_cube(cube);
  auto init_implies = [&](const StateClause& cl) {
    for (StateLit l : cl)
      if (std::binary_search(init.begin(), init.end(), l)) return true;
    return false;
  };
  size_t i = 0;
  while (i < c.size() && c.size() > 1) {
    StateClause cand = c;
    cand.erase(cand.begin() + static_cast<long>(i));
    if (init_implies(cand) && step.rel_ind(pen_level, cand)) {
      c = std::move(cand);
    } else {
      ++i;
    }
  }
  return c;
}

BlockResult pdr_block(InductiveTrace& trace, const TransitionSystem& ts,
                      const BlockTarget& target, StepSolver& step,
                      FrameSolver& frames, const BlockOptions& opts,
                      uint64_t* queries) {
  (void)queries;
  const int top = trace.size();
  const StateCube init = initial_cube(ts);
  sat::Lit neg_target = target.negation_literal(frames);

  struct Obligation {
    StateCube state;
    int level;
    uint64_t seq;
    int parent;                // arena index, -1 for top hits
    std::vector<bool> inputs;  // toward the successor / target violation
  };
  std::vector<Obligation> arena;
  auto order = [&](int a, int b) {
    if (arena[a].level != arena[b].level)
      return arena[a].level > arena[b].level;
    return arena[a].seq > arena[b].seq;
  };
  std::priority_queue<int, std::vector<int>, decltype(order)> q(order);
  uint64_t seq = 0;

  BlockResult res;
  res.min_blocked_level = top + 1;

  auto make_cex = [&](int idx) {
    res.blocked = false;
    std::vector<int> path;
    for (int at = idx; at >= 0; at = arena[at].parent) path.push_back(at);
    // path runs from the offending (initial) state up to the target hit.
    for (int at : path)
      res.cex_chain.push_back({arena[at].state, arena[at].inputs});
    return res;
  };

  while (true) {
    if (q.empty()) {
      auto hit = frames.find_state(top, neg_target);
      if (!hit) return res;
      arena.push_back({std::move(hit->state), top, seq++, -1,
                       std::move(hit->inputs)});
      q.push(static_cast<int>(arena.size()) - 1);
      continue;
    }
    int idx = q.top();
    q.pop();
    // Copy: the arena may grow below.
    StateCube state = arena[idx].state;
    int level = arena[idx].level;

    if (level == 0 || cube_satisfies_init(state, init)) {
      if (opts.top_only)
        throw std::logic_error(
            "trace extension: obligation reached an initial state");
      return make_cex(idx);
    }

    StateCube pred;
    std::vector<bool> inputs;
    if (step.pred_query(level - 1, state, &pred, &inputs)) {
      if (opts.top_only)
        throw std::logic_error(
            "trace extension: unexpected proof obligation below the top "
            "frame");
      arena.push_back(
          {std::move(pred), level - 1, seq++, idx, std::move(inputs)});
      q.push(static_cast<int>(arena.size()) - 1);
      q.push(idx);
    } else {
      StateClause c = opts.indgen ? ind_gen(state, level - 1, step, init)
                                  : negate_cube(state);
      if (trace.add_clause(c, level)) {
        step.add_frame_clause(level, c);
        frames.add_frame_clause(level, c);
        ++res.learned;
      }
      res.min_blocked_level = std::min(res.min_blocked_level, level);
    }
  }
}

std::optional<Witness> bad_initial_state(const TransitionSystem& ts,
                                         uint64_t* queries) {
  sat::Solver solver;
  VarMap map(solver);
  CnfFormula all = encode_init(ts, 0, map);
  MaybeLit bad = encode_bad(ts, 0, map, all);
  if (bad.is_const && !bad.const_val) return std::nullopt;
  if (!bad.is_const) all.add({bad.lit});
  for (const auto& c : all.clauses) solver.add_clause(c);
  if (queries) ++*queries;
  if (solver.solve() != sat::SolveStatus::sat) return std::nullopt;
  Witness w;
  std::vector<bool> line(ts.num_inputs(), false);
  for (uint32_t i = 0; i < ts.num_inputs(); ++i)
    line[i] = solver.model_bool(sat::mk_lit(map.input_at(i, 0)));
  for (size_t idx : ts.free_init_latches())
    line.push_back(
        solver.model_bool(sat::mk_lit(map.latch_at(static_cast<uint32_t>(idx), 0))));
  w.inputs.push_back(std::move(line));
  return w;
}

namespace {

Witness witness_from_chain(const std::vector<ObligationStep>& chain,
                           const TransitionSystem& ts) {
  Witness w;
  for (const ObligationStep& s : chain) w.inputs.push_back(s.inputs);
  // Unconstrained initial latch values ride on the first stimulus line.
  for (size_t idx : ts.free_init_latches()) {
    StateLit l = chain.front().state[idx];
    w.inputs[0].push_back(!state_lit_negated(l));
  }
  return w;
}

}  // namespace

CheckResult pdr_engine(const TransitionSystem& ts, const EngineOptions& opts) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  CheckResult res;
  EngineStats& st = res.stats;
  auto finish = [&](Verdict v) {
    res.verdict = v;
    st.time_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    return res;
  };

  if (auto w = bad_initial_state(ts, &st.sat_queries)) {
    res.witness = std::move(w);
    st.frames = 0;
    return finish(Verdict::unsafe);
  }

  InductiveTrace trace = InductiveTrace::initial(ts);
  PropertyTarget target;
  try {
  for (int n = 0;; ++n) {
    if (n >= opts.max_frames) return finish(Verdict::unknown);
    if (opts.wall_ms > 0 &&
        std::chrono::duration<double, std::milli>(clock::now() - t0).count() >
            opts.wall_ms)
      return finish(Verdict::unknown);
    trace.push_top();
    QueryLimits limits{opts.conflict_budget};
    StepSolver step(ts, trace, &st.sat_queries, limits);
    FrameSolver frames(ts, trace, &st.sat_queries, limits);
    BlockOptions bo{opts.indgen, false};
    BlockResult r =
        pdr_block(trace, ts, target, step, frames, bo, &st.sat_queries);
    st.learned_clauses += r.learned;
    ++st.iterations;
    st.frames = trace.size();
    if (!r.blocked) {
      res.witness = witness_from_chain(r.cex_chain, ts);
      return finish(Verdict::unsafe);
    }
    pdr_push(trace, ts, &st.sat_queries);
    if (auto cl = closing_level(trace, ts, &st.sat_queries)) {
      res.invariant = extract_invariant(trace, *cl);
      return finish(Verdict::safe);
    }
  }
  } catch (const sat::BudgetExceeded&) {
    return finish(Verdict::unknown);
  }
}

}  // namespace smc
