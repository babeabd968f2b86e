#pragma once

#include "smc/engine.hpp"

namespace smc {

// Bounded model checking: one incremental solver, unrolled depth by
// depth; unsafe at the least depth where Init ∧ Tr^N ∧ Bad(v_N) is
// satisfiable, unknown at the bound.
CheckResult bmc(const TransitionSystem& ts, int max_depth);

// Temporal induction: for k = 1, 2, ... the base case is a fresh bounded
// check to depth k-1 and the step case asks for k property-satisfying
// steps ending in a violation, with pairwise state distinctness when
// simple_path is set. Safe at the least such k, with stats.converged_k.
CheckResult kind(const TransitionSystem& ts, int max_k,
                 bool simple_path = true);

}  // namespace smc
