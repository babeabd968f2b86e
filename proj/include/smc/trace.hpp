#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smc/aig.hpp"
#include "smc/formula.hpp"

namespace smc {

// Conjunction of latch-init literals; characterizes the initial states.
// Latches with unconstrained init contribute nothing.
StateCube initial_cube(const TransitionSystem& ts);

// Strong extension level: frame i, induction depth k, 1 <= k <= i+1.
// Ordered by higher level first, then shallower induction.
struct Sel {
  int i = 0;
  int k = 1;
  bool operator==(const Sel&) const = default;
};

// Returns true if a is at most b in the SEL order.
inline bool sel_leq(const Sel& a, const Sel& b) {
  return a.i < b.i || (a.i == b.i && a.k >= b.k);
}

// Delta-encoded sequence of clausal frames F_0..F_N. A clause lives at the
// highest level where it holds; the effective frame i is the union of the
// deltas at levels >= i, so monotonicity F_i => F_{i+1} holds by
// construction. Level 0 additionally carries the initial cube.
class InductiveTrace {
 public:
  static InductiveTrace initial(const TransitionSystem& ts);
  // Frames given outermost first; must describe a monotone trace. Clauses
  // are layered so that effective frames are semantically unchanged.
  static InductiveTrace from_frames(std::vector<std::vector<StateClause>> frames);

  int size() const { return static_cast<int>(deltas_.size()) - 1; }

  // Union of deltas at levels >= i; empty (top) beyond the trace.
  std::vector<StateClause> frame_clauses(int i) const;
  const std::vector<StateClause>& delta(int i) const { return deltas_[i]; }
  size_t total_clauses() const;

  void push_top() { deltas_.emplace_back(); }

  // Installs c at `level` (and thereby at every level below). Subsumed
  // clauses at or below `level` are dropped. Returns false if redundant.
  bool add_clause(StateClause c, int level);

  // Moves the clause at delta(level)[idx] one level up (push).
  void promote(int level, size_t idx);

  std::string dump() const;

 private:
  std::vector<std::vector<StateClause>> deltas_;
};

// Semantic predicates, each certified by SAT queries against a fresh
// encoding. `queries` (optional) accumulates the number of solver calls.

bool is_trace(const InductiveTrace& tr, const TransitionSystem& ts,
              uint64_t* queries = nullptr);
bool is_safe(const InductiveTrace& tr, const TransitionSystem& ts,
             uint64_t* queries = nullptr);
bool is_monotone(const InductiveTrace& tr, const TransitionSystem& ts,
                 uint64_t* queries = nullptr);

// Least 1 <= i <= N with F_i => F_{i-1}; for monotone traces this matches
// the closed-trace condition over the disjunction of lower frames.
std::optional<int> closing_level(const InductiveTrace& tr,
                                 const TransitionSystem& ts,
                                 uint64_t* queries = nullptr);
inline bool is_closed(const InductiveTrace& tr, const TransitionSystem& ts,
                      uint64_t* queries = nullptr) {
  return closing_level(tr, ts, queries).has_value();
}

// Largest extension level, or nullopt when even the full unrolling from
// the initial frame reaches bad (a counterexample exists).
std::optional<int> max_extension_level(const InductiveTrace& tr,
                                       const TransitionSystem& ts,
                                       uint64_t* queries = nullptr);

bool is_sel(const InductiveTrace& tr, const TransitionSystem& ts, int i, int k,
            uint64_t* queries = nullptr);

// Moves every clause that holds one level later up, sweeping levels
// bottom-up until nothing moves. Returns true if the trace changed.
bool pdr_push(InductiveTrace& tr, const TransitionSystem& ts,
              uint64_t* queries = nullptr);

// "Stronger" preorder on traces restricted to the common prefix.
bool is_stronger(const InductiveTrace& a, const InductiveTrace& b,
                 const TransitionSystem& ts, uint64_t* queries = nullptr);

}  // namespace smc
