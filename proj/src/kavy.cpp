#include "smc/kavy.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "smc/certify.hpp"
#include "smc/pdr.hpp"

namespace smc {

Sel max_sel_topdown(CharChecker& chk, int trace_size, SelSearchStats* stats) {
  const int N = trace_size;
  int i = N;
  while (i > 0) {
    if (stats) ++stats->suffix_queries;
    if (chk.sel_unsat(i, i + 1)) break;
    --i;
  }
  int k = 1;
  while (k < i + 1) {
    if (stats) ++stats->depth_queries;
    if (chk.sel_unsat(i, k)) break;
    ++k;
  }
  return Sel{i, k};
}

Sel max_sel_bottomup(CharChecker& chk, int trace_size, SelSearchStats* stats) {
  const int N = trace_size;
  int j = N;
  while (j > 0) {
    if (stats) ++stats->suffix_queries;
    if (chk.sel_unsat(j, 1)) break;
    --j;
  }
  Sel best{j, 1};
  j = j + 1;
  int l = 2;
  while (l <= j + 1 && j <= N) {
    if (stats) ++stats->depth_queries;
    if (!chk.sel_unsat(j, l)) {
      ++l;
    } else {
      best = Sel{j, l};
      ++j;
    }
  }
  return best;
}

Sel max_sel_exhaustive(CharChecker& chk, int trace_size) {
  Sel best{0, 1};
  bool found = false;
  for (int i = 0; i <= trace_size; ++i)
    for (int k = 1; k <= i + 1; ++k)
      if (chk.sel_unsat(i, k)) {
        Sel cand{i, k};
        if (!found || sel_leq(best, cand)) best = cand;
        found = true;
      }
  return best;
}

int max_extension_level_search(CharChecker& chk, int trace_size,
                               SelSearchStats* stats) {
  for (int i = trace_size; i > 0; --i) {
    if (stats) ++stats->suffix_queries;
    if (chk.sel_unsat(i, 1)) return i;
  }
  return 0;
}

namespace {

// Blocks all ¬P states out of the frame at `top` by treating
// [Init, G_pen, G_top] as a three-frame trace (two frames when pen is 0).
// Every learned clause lands at `top` of the full trace and, through the
// delta encoding, at every level below.
void strengthen_top(InductiveTrace& big, const TransitionSystem& ts, int pen,
                    int top, FormulaRef property, FormulaStore& store,
                    const EngineOptions& opts, EngineStats& st) {
  std::vector<std::vector<StateClause>> frames;
  if (pen == 0) {
    frames.push_back(big.frame_clauses(0));
    frames.push_back(big.frame_clauses(top));
  } else {
    frames.push_back(big.frame_clauses(0));
    frames.push_back(big.frame_clauses(pen));
    frames.push_back(big.frame_clauses(top));
  }
  InductiveTrace mini = InductiveTrace::from_frames(std::move(frames));
  std::vector<StateClause> before = mini.frame_clauses(mini.size());

  QueryLimits limits{opts.conflict_budget};
  StepSolver step(ts, mini, &st.sat_queries, limits);
  FrameSolver fsol(ts, mini, &st.sat_queries, limits);
  if (opts.debug_checks) {
    if (!step.step_implies(mini.size() - 1, store, property))
      throw std::logic_error("extension invariant violated before blocking");
  }
  FormulaTarget target(store, property);
  BlockOptions bo{opts.indgen, /*top_only=*/true};
  BlockResult r = pdr_block(mini, ts, target, step, fsol, bo, &st.sat_queries);
  if (!r.blocked)
    throw std::logic_error("trace extension failed to block a target");

  std::vector<StateClause> after = mini.frame_clauses(mini.size());
  for (const StateClause& c : after) {
    bool is_new = true;
    for (const StateClause& b : before)
      if (b == c) {
        is_new = false;
        break;
      }
    if (is_new && big.add_clause(c, top)) ++st.learned_clauses;
  }
}

FormulaRef frame_formula(FormulaStore& store, const InductiveTrace& tr,
                         int i) {
  return store.from_clauses(tr.frame_clauses(i));
}

}  // namespace

InductiveTrace kavy_extend(const InductiveTrace& trace, Sel sel,
                           const TransitionSystem& ts,
                           const EngineOptions& opts, EngineStats& stats,
                           FormulaStore& store) {
  const int N = trace.size();
  const int i = sel.i, k = sel.k;
  CharItpResult itp = characteristic_interpolants(
      trace, ts, sel, store, opts.validate_interpolants, &stats.sat_queries,
      opts.conflict_budget);
  if (opts.validate_interpolants) ++stats.interpolants_validated;
  if (!opts.debug_dump_dir.empty()) {
    static std::atomic<uint64_t> seq{0};
    uint64_t n = seq++;
    namespace fs = std::filesystem;
    fs::create_directories(opts.debug_dump_dir);
    std::ofstream(fs::path(opts.debug_dump_dir) /
                  ("extension_" + std::to_string(n) + ".proof.txt"))
        << sat::proof_to_text(itp.proof);
    std::ofstream(fs::path(opts.debug_dump_dir) /
                  ("extension_" + std::to_string(n) + ".itp.txt"))
        << interpolants_to_text(itp.itp, store);
  }

  InductiveTrace g = trace;
  g.push_top();

  auto target_for = [&](int low, int high, int itp_frame) {
    return store.mk_or(frame_formula(store, g, low),
                       store.mk_and(frame_formula(store, g, high),
                                    itp.itp.at_frame(itp_frame)));
  };

  // Phase 1: strengthen G_{i+1} against the first k-1 interpolants.
  for (int j = i - k + 1; j <= i - 1; ++j) {
    FormulaRef p = target_for(j, i + 1, j + 1);
    strengthen_top(g, ts, i, i + 1, p, store, opts, stats);
  }
  // Phase 2: the interpolant at i+1; when i = 0 the initial frame is the
  // penultimate one and must not be strengthened.
  {
    FormulaRef p = target_for(i, i + 1, i + 1);
    strengthen_top(g, ts, i == 0 ? 0 : i, i + 1, p, store, opts, stats);
  }
  // Phase 3: compute each higher frame in turn, pushing after every step.
  for (int j = i + 1; j <= N; ++j) {
    FormulaRef p = target_for(j, j + 1, j + 1);
    strengthen_top(g, ts, j, j + 1, p, store, opts, stats);
    pdr_push(g, ts, &stats.sat_queries);
  }
  return g;
}

namespace {

CheckResult run_interpolation_engine(const TransitionSystem& ts,
                                     const EngineOptions& opts, bool vanilla) {
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

  FormulaStore store;
  InductiveTrace trace = InductiveTrace::initial(ts);
  try {
  for (int n = 0;; ++n) {
    if (n >= opts.max_frames) return finish(Verdict::unknown);
    if (opts.wall_ms > 0 &&
        std::chrono::duration<double, std::milli>(clock::now() - t0).count() >
            opts.wall_ms)
      return finish(Verdict::unknown);
    if (opts.debug_checks) {
      if (!is_trace(trace, ts) || !is_monotone(trace, ts) ||
          !is_safe(trace, ts))
        throw std::logic_error("loop invariant violated: trace malformed");
    }
    auto iter_t0 = clock::now();
    uint64_t q0 = st.sat_queries, l0 = st.learned_clauses;

    CharChecker chk(ts, trace, &st.sat_queries,
                    QueryLimits{opts.conflict_budget});
    if (auto stim = chk.counterexample_check()) {
      res.witness = Witness{std::move(*stim)};
      st.frames = trace.size();
      ++st.iterations;
      return finish(Verdict::unsafe);
    }
    Sel sel;
    if (vanilla) {
      sel = Sel{max_extension_level_search(chk, trace.size()), 1};
    } else if (opts.sel == SelStrategy::topdown) {
      sel = max_sel_topdown(chk, trace.size());
    } else {
      sel = max_sel_bottomup(chk, trace.size());
    }

    trace = kavy_extend(trace, sel, ts, opts, st, store);
    pdr_push(trace, ts, &st.sat_queries);

    ++st.iterations;
    st.frames = trace.size();
    PerIterationStats row;
    row.iteration = st.iterations;
    row.frames = trace.size();
    row.sel = sel;
    row.sat_queries = st.sat_queries - q0;
    row.learned_clauses = st.learned_clauses - l0;
    row.time_ms =
        std::chrono::duration<double, std::milli>(clock::now() - iter_t0)
            .count();
    st.per_iteration.push_back(row);

    if (auto cl = closing_level(trace, ts, &st.sat_queries)) {
      res.invariant = extract_invariant(trace, *cl);
      return finish(Verdict::safe);
    }
  }
  } catch (const sat::BudgetExceeded&) {
    return finish(Verdict::unknown);
  }
}

}  // namespace

CheckResult kavy_engine(const TransitionSystem& ts,
                        const EngineOptions& opts) {
  return run_interpolation_engine(ts, opts, false);
}

CheckResult vanilla_engine(const TransitionSystem& ts,
                           const EngineOptions& opts) {
  return run_interpolation_engine(ts, opts, true);
}

}  // namespace smc
