#pragma once

#include "smc/engine.hpp"
#include "smc/itp.hpp"
#include "smc/solvers.hpp"
#include "smc/trace.hpp"

namespace smc {

struct SelSearchStats {
  uint64_t suffix_queries = 0;  // phase (a): shrinking the suffix
  uint64_t depth_queries = 0;   // phase (b): minimizing the depth
  uint64_t total() const { return suffix_queries + depth_queries; }
};

// Maximal strong extension level, searched top-down: find the largest
// level whose deepest-induction query is unsat, then the shallowest depth
// that still works at that level. The trace must be extendable.
Sel max_sel_topdown(CharChecker& chk, int trace_size,
                    SelSearchStats* stats = nullptr);

// Maximal SEL searched bottom-up: first the largest plain extension
// level, then grow level and depth incrementally. Agrees with the
// top-down search; issues at most 3N queries.
Sel max_sel_bottomup(CharChecker& chk, int trace_size,
                     SelSearchStats* stats = nullptr);

// Reference search scanning every admissible pair (test oracle).
Sel max_sel_exhaustive(CharChecker& chk, int trace_size);

// Largest plain extension level (the vanilla strategy's choice).
int max_extension_level_search(CharChecker& chk, int trace_size,
                               SelSearchStats* stats = nullptr);

// Extends a monotone clausal safe trace of size N into one of size N+1
// guided by the sequence interpolant of the SEL's characteristic formula.
// Phase 1 strengthens G_{i+1} against targets built from the first k-1
// interpolants, phase 2 against I_{i+1}, phase 3 computes each higher
// frame in turn, pushing clauses forward after every step. All blocking
// happens at the top of a three-frame (two-frame when i = 0) view; a
// proof obligation anywhere below is a contract violation and throws.
InductiveTrace kavy_extend(const InductiveTrace& trace, Sel sel,
                           const TransitionSystem& ts,
                           const EngineOptions& opts, EngineStats& stats,
                           FormulaStore& store);

CheckResult kavy_engine(const TransitionSystem& ts, const EngineOptions& opts);

// Same loop with the induction depth pinned to 1 at the largest plain
// extension level (the ablation baseline).
CheckResult vanilla_engine(const TransitionSystem& ts,
                           const EngineOptions& opts);

}  // namespace smc
