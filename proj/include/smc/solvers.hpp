#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "smc/cnf.hpp"
#include "smc/trace.hpp"

namespace smc {

// Shared query-engine knobs.
struct QueryLimits {
  int64_t conflict_budget = -1;  // per solve call, -1 = unlimited
};

// One-step query engine over a trace: Tr(v_0, v_1) is encoded once, frame
// clauses are asserted at time 0 under one activation literal per delta
// level, so a query "at frame m" assumes the activations of all levels
// >= m. Clause additions are incremental; a moved clause is re-asserted
// under the higher level (the stale copy stays sound under monotonicity).
class StepSolver {
 public:
  StepSolver(const TransitionSystem& ts, const InductiveTrace& trace,
             uint64_t* queries = nullptr, QueryLimits limits = {});

  void add_frame_clause(int level, const StateClause& c);
  void ensure_level(int level);

  // F_pen ∧ ¬s ∧ Tr ∧ s' — on sat fills the predecessor minterm and the
  // inputs driving it into s.
  bool pred_query(int pen_level, const StateCube& s, StateCube* pred,
                  std::vector<bool>* inputs);

  // F_pen ∧ c ∧ Tr ⇒ c'  (relative induction of a clause).
  bool rel_ind(int pen_level, const StateClause& c);

  // F_level ∧ Tr ⇒ c'  (push query).
  bool push_query(int level, const StateClause& c);

  // F_pen ∧ Tr ⇒ P'  for an arbitrary formula P.
  bool step_implies(int pen_level, FormulaStore& store, FormulaRef p);

 private:
  std::vector<sat::Lit> frame_assumptions(int level) const;
  StateCube model_state(int t) const;
  std::vector<bool> model_inputs(int t) const;
  sat::SolveStatus run(std::span<const sat::Lit> assumptions);

  const TransitionSystem& ts_;
  sat::Solver solver_;
  VarMap map_;
  std::vector<sat::Lit> level_act_;
  uint64_t* queries_;
};

// Query engine over a single time frame: which states are in F_level and
// satisfy an extra constraint (the bad cone, or a formula's negation).
class FrameSolver {
 public:
  FrameSolver(const TransitionSystem& ts, const InductiveTrace& trace,
              uint64_t* queries = nullptr, QueryLimits limits = {});

  void add_frame_clause(int level, const StateClause& c);
  void ensure_level(int level);

  // Literal asserting the bad cone over frame-0 latches and inputs.
  sat::Lit bad_literal();
  // Literal asserting an NNF formula over frame-0 latches.
  sat::Lit formula_literal(const FormulaStore& store, FormulaRef f);

  struct StateHit {
    StateCube state;           // full minterm over latches
    std::vector<bool> inputs;  // one value per input
  };
  std::optional<StateHit> find_state(int level, sat::Lit extra);

  // F_level ∧ extra unsat?
  bool refutes(int level, sat::Lit extra);

 private:
  std::vector<sat::Lit> frame_assumptions(int level) const;
  sat::SolveStatus run(std::span<const sat::Lit> assumptions);

  const TransitionSystem& ts_;
  sat::Solver solver_;
  VarMap map_;
  std::vector<sat::Lit> level_act_;
  std::optional<sat::Lit> bad_lit_;
  std::map<FormulaRef, sat::Lit> formula_memo_;
  const FormulaStore* memo_store_ = nullptr;
  uint64_t* queries_;
};

// Multi-frame checker for strong-extension-level queries over a fixed
// trace snapshot: states 0..N+1, the bad cone at N+1, transition steps and
// frame instances under activation literals created on demand.
class CharChecker {
 public:
  CharChecker(const TransitionSystem& ts, const InductiveTrace& trace,
              uint64_t* queries = nullptr, QueryLimits limits = {});

  // Is the characteristic formula of (i, k) together with Bad(v_{N+1})
  // unsatisfiable? (i, k) must satisfy the SEL side condition.
  bool sel_unsat(int i, int k);

  // The level-i extension query (equals sel_unsat(i, 1) for i < N).
  bool suffix_unsat(int i) { return sel_unsat(i, 1); }

  // The full unrolling from frame 0; on sat returns the stimulus
  // (inputs per frame 0..N+1, frame 0 extended with free-init values).
  std::optional<std::vector<std::vector<bool>>> counterexample_check();

  uint64_t queries() const { return local_queries_; }

 private:
  sat::Lit frame_instance(int level, int time);
  std::vector<bool> model_inputs(int t) const;

  const TransitionSystem& ts_;
  const InductiveTrace& trace_;
  int N_;
  sat::Solver solver_;
  VarMap map_;
  std::vector<sat::Lit> tr_act_;
  sat::Lit bad_lit_;
  bool bad_const_false_ = false;
  std::map<std::pair<int, int>, sat::Lit> frame_act_;
  uint64_t* queries_;
  uint64_t local_queries_ = 0;
};

}  // namespace smc
