#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "smc/engine.hpp"
#include "smc/solvers.hpp"
#include "smc/trace.hpp"

namespace smc {

// What the last frame of a trace must be made to imply. The bad-state
// target is the negated property cone (with inputs); formula targets are
// arbitrary state predicates used by the trace-extension procedure.
class BlockTarget {
 public:
  virtual ~BlockTarget() = default;
  // Literal asserting the negation of the target over frame-0 state vars.
  virtual sat::Lit negation_literal(FrameSolver& fs) const = 0;
};

class PropertyTarget final : public BlockTarget {
 public:
  sat::Lit negation_literal(FrameSolver& fs) const override {
    return fs.bad_literal();
  }
};

class FormulaTarget final : public BlockTarget {
 public:
  FormulaTarget(FormulaStore& store, FormulaRef target)
      : store_(store), negated_(store.negate(target)) {}
  sat::Lit negation_literal(FrameSolver& fs) const override {
    return fs.formula_literal(store_, negated_);
  }

 private:
  FormulaStore& store_;
  FormulaRef negated_;
};

struct ObligationStep {
  StateCube state;
  std::vector<bool> inputs;  // inputs taking this state toward the target
};

struct BlockResult {
  bool blocked = true;
  // On failure: states from an initial state to a target-violating one.
  std::vector<ObligationStep> cex_chain;
  int min_blocked_level = 0;  // the paper's w
  uint64_t learned = 0;
};

struct BlockOptions {
  bool indgen = true;
  // When set, any proof obligation below the top frame is a caller
  // contract violation (the trace-extension precondition guarantees every
  // enumerated state is blockable against the penultimate frame).
  bool top_only = false;
};

// Recursive backward blocking: removes every state of the last frame that
// violates `target`, learning (generalized) blocking clauses installed at
// all levels up to where they were derived. Returns an unblocked
// obligation chain when an initial state reaches the target violation.
BlockResult pdr_block(InductiveTrace& trace, const TransitionSystem& ts,
                      const BlockTarget& target, StepSolver& step,
                      FrameSolver& frames, const BlockOptions& opts,
                      uint64_t* queries = nullptr);

// Generalization by literal dropping in ascending variable order: keeps
// the clause init-satisfied and inductive relative to frame `pen_level`.
StateClause ind_gen(const StateCube& cube, int pen_level, StepSolver& step,
                    const StateCube& init);

// Full property-directed reachability loop.
CheckResult pdr_engine(const TransitionSystem& ts, const EngineOptions& opts);

// Depth-0 check shared by all engines: Init ∧ Bad.
std::optional<Witness> bad_initial_state(const TransitionSystem& ts,
                                         uint64_t* queries = nullptr);

}  // namespace smc
