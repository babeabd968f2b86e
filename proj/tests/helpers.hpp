#pragma once

#include <cstdint>
#include <vector>

#include "smc/bench.hpp"
#include "smc/formula.hpp"
#include "smc/trace.hpp"

namespace smc::test {

// x' = !x, bad = x. Unsafe at depth 1 from x = 0.
inline TransitionSystem toggle_unsafe() {
  AigBuilder b;
  AigLit x = b.add_latch(LatchInit::zero);
  b.set_next(x, !x);
  b.set_bad(x);
  return b.build();
}

// x' = x (stuck at its init), bad = x. Safe, property 1-inductive.
inline TransitionSystem stuck_at0() {
  AigBuilder b;
  AigLit x = b.add_latch(LatchInit::zero);
  b.set_next(x, x);
  b.set_bad(x);
  return b.build();
}

// One input wired straight to the bad output; no latches.
inline TransitionSystem passthrough() {
  AigBuilder b;
  AigLit in = b.add_input();
  b.set_bad(in);
  return b.build();
}

// The worked 8-bit counter: reset at 64, bad when c >= 66.
inline TransitionSystem paper_counter() { return gen_counter(8, 64, 66); }

// CNF of (c < bound) over `width` latch bits, derived from the carry-chain
// comparison: processing bits LSB-up, a 0-bit of the bound forces the bit
// low, a 1-bit allows it as an alternative.
inline std::vector<StateClause> lt_clauses(uint32_t width, uint64_t bound) {
  if (width < 64 && (bound >> width) != 0) return {};
  std::vector<StateClause> acc{StateClause{}};  // "< 0" is false
  for (uint32_t i = 0; i < width; ++i) {
    if ((bound >> i) & 1) {
      for (StateClause& c : acc) c = canonical_clause([&] {
            StateClause d = c;
            d.push_back(state_lit(i, true));
            return d;
          }());
    } else {
      acc.push_back(StateClause{state_lit(i, true)});
    }
  }
  return acc;
}

// Evaluates a clause set on a packed state.
inline bool eval_clauses(const std::vector<StateClause>& cs, uint64_t state) {
  for (const StateClause& c : cs) {
    bool sat = false;
    for (StateLit l : c) {
      bool v = (state >> state_lit_latch(l)) & 1;
      if (state_lit_negated(l) ? !v : v) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

// The paper's worked trace [c = 0, c < 66] for the 8-bit counter.
inline InductiveTrace paper_trace() {
  std::vector<std::vector<StateClause>> frames(2);
  for (uint32_t i = 0; i < 8; ++i)
    frames[0].push_back(StateClause{state_lit(i, true)});
  frames[1] = lt_clauses(8, 66);
  return InductiveTrace::from_frames(std::move(frames));
}

// Step-query side of "phi is k-inductive relative to rel": the k-fold
// unrolling with phi and rel in every window state and !phi after it must
// be unsatisfiable. Independent re-encoding through the formula path.
bool k_inductive_relative(FormulaStore& fs, FormulaRef phi,
                          const std::vector<StateClause>& rel,
                          const TransitionSystem& ts, int k);

}  // namespace smc::test
