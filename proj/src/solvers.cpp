#include "smc/solvers.hpp"

#include <cassert>
#include <stdexcept>

namespace smc {

namespace {

void add_cnf(sat::Solver& s, const CnfFormula& f) {
  for (const auto& c : f.clauses) s.add_clause(c);
}

void add_cnf_activated(sat::Solver& s, const CnfFormula& f, sat::Lit act) {
  for (const auto& c : f.clauses) {
    std::vector<sat::Lit> cl;
    cl.reserve(c.size() + 1);
    cl.push_back(sat::neg(act));
    cl.insert(cl.end(), c.begin(), c.end());
    s.add_clause(cl);
  }
}

}  // namespace

StepSolver::StepSolver(const TransitionSystem& ts, const InductiveTrace& trace,
                       uint64_t* queries, QueryLimits limits)
    : ts_(ts), map_(solver_), queries_(queries) {
  solver_.set_conflict_budget(limits.conflict_budget);
  add_cnf(solver_, encode_tr(ts_, 0, map_));
  // Touch every latch var on both sides so model extraction is total.
  for (size_t i = 0; i < ts_.num_latches(); ++i) {
    map_.latch_at(static_cast<uint32_t>(i), 0);
    map_.latch_at(static_cast<uint32_t>(i), 1);
  }
  ensure_level(trace.size());
  for (int lvl = 0; lvl <= trace.size(); ++lvl)
    for (const StateClause& c : trace.delta(lvl)) add_frame_clause(lvl, c);
}

void StepSolver::ensure_level(int level) {
  while (static_cast<int>(level_act_.size()) <= level)
    level_act_.push_back(sat::mk_lit(solver_.new_var()));
}

void StepSolver::add_frame_clause(int level, const StateClause& c) {
  ensure_level(level);
  std::vector<sat::Lit> cl{sat::neg(level_act_[level])};
  for (StateLit l : c) cl.push_back(map_.lit_at(l, 0));
  solver_.add_clause(cl);
}

std::vector<sat::Lit> StepSolver::frame_assumptions(int level) const {
  std::vector<sat::Lit> out;
  for (size_t j = static_cast<size_t>(std::max(level, 0));
       j < level_act_.size(); ++j)
    out.push_back(level_act_[j]);
  return out;
}

sat::SolveStatus StepSolver::run(std::span<const sat::Lit> assumptions) {
  if (queries_) ++*queries_;
  sat::SolveStatus st = solver_.solve(assumptions);
  if (st == sat::SolveStatus::budget_exceeded)
    throw sat::BudgetExceeded{};
  return st;
}

StateCube StepSolver::model_state(int t) const {
  StateCube cube;
  cube.reserve(ts_.num_latches());
  for (uint32_t i = 0; i < ts_.num_latches(); ++i) {
    sat::Var v = const_cast<VarMap&>(map_).latch_at(i, t);
    bool val = solver_.model_bool(sat::mk_lit(v));
    cube.push_back(state_lit(i, !val));
  }
  return cube;
}

std::vector<bool> StepSolver::model_inputs(int t) const {
  std::vector<bool> out(ts_.num_inputs(), false);
  for (uint32_t i = 0; i < ts_.num_inputs(); ++i) {
    sat::Var v = const_cast<VarMap&>(map_).input_at(i, t);
    out[i] = solver_.model_bool(sat::mk_lit(v));
  }
  return out;
}

bool StepSolver::pred_query(int pen_level, const StateCube& s, StateCube* pred,
                            std::vector<bool>* inputs) {
  // Temporary clause ¬s at frame 0.
  sat::Lit tmp = sat::mk_lit(solver_.new_var());
  std::vector<sat::Lit> cl{sat::neg(tmp)};
  for (StateLit l : s) cl.push_back(sat::neg(map_.lit_at(l, 0)));
  solver_.add_clause(cl);

  std::vector<sat::Lit> assume = frame_assumptions(pen_level);
  assume.push_back(tmp);
  for (StateLit l : s) assume.push_back(map_.lit_at(l, 1));
  sat::SolveStatus st = run(assume);
  bool is_sat = st == sat::SolveStatus::sat;
  if (is_sat) {
    if (pred) *pred = model_state(0);
    if (inputs) *inputs = model_inputs(0);
  }
  solver_.add_clause({sat::neg(tmp)});
  return is_sat;
}

bool StepSolver::rel_ind(int pen_level, const StateClause& c) {
  sat::Lit tmp = sat::mk_lit(solver_.new_var());
  std::vector<sat::Lit> cl{sat::neg(tmp)};
  for (StateLit l : c) cl.push_back(map_.lit_at(l, 0));
  solver_.add_clause(cl);

  std::vector<sat::Lit> assume = frame_assumptions(pen_level);
  assume.push_back(tmp);
  for (StateLit l : c) assume.push_back(sat::neg(map_.lit_at(l, 1)));
  sat::SolveStatus st = run(assume);
  solver_.add_clause({sat::neg(tmp)});
  return st == sat::SolveStatus::unsat;
}

bool StepSolver::push_query(int level, const StateClause& c) {
  std::vector<sat::Lit> assume = frame_assumptions(level);
  for (StateLit l : c) assume.push_back(sat::neg(map_.lit_at(l, 1)));
  return run(assume) == sat::SolveStatus::unsat;
}

bool StepSolver::step_implies(int pen_level, FormulaStore& store,
                              FormulaRef p) {
  FormulaRef np = store.negate(p);
  CnfFormula defs;
  MaybeLit m = encode_formula(store, np, 1, map_, defs);
  add_cnf(solver_, defs);  // definitional clauses, harmless when unused
  std::vector<sat::Lit> assume = frame_assumptions(pen_level);
  if (m.is_const) {
    if (!m.const_val) return true;  // ¬P is false, so P holds trivially
  } else {
    assume.push_back(m.lit);
  }
  return run(assume) == sat::SolveStatus::unsat;
}

FrameSolver::FrameSolver(const TransitionSystem& ts,
                         const InductiveTrace& trace, uint64_t* queries,
                         QueryLimits limits)
    : ts_(ts), map_(solver_), queries_(queries) {
  solver_.set_conflict_budget(limits.conflict_budget);
  for (size_t i = 0; i < ts_.num_latches(); ++i)
    map_.latch_at(static_cast<uint32_t>(i), 0);
  ensure_level(trace.size());
  for (int lvl = 0; lvl <= trace.size(); ++lvl)
    for (const StateClause& c : trace.delta(lvl)) add_frame_clause(lvl, c);
}

void FrameSolver::ensure_level(int level) {
  while (static_cast<int>(level_act_.size()) <= level)
    level_act_.push_back(sat::mk_lit(solver_.new_var()));
}

void FrameSolver::add_frame_clause(int level, const StateClause& c) {
  ensure_level(level);
  std::vector<sat::Lit> cl{sat::neg(level_act_[level])};
  for (StateLit l : c) cl.push_back(map_.lit_at(l, 0));
  solver_.add_clause(cl);
}

std::vector<sat::Lit> FrameSolver::frame_assumptions(int level) const {
  std::vector<sat::Lit> out;
  for (size_t j = static_cast<size_t>(std::max(level, 0));
       j < level_act_.size(); ++j)
    out.push_back(level_act_[j]);
  return out;
}

sat::SolveStatus FrameSolver::run(std::span<const sat::Lit> assumptions) {
  if (queries_) ++*queries_;
  sat::SolveStatus st = solver_.solve(assumptions);
  if (st == sat::SolveStatus::budget_exceeded)
    throw sat::BudgetExceeded{};
  return st;
}

sat::Lit FrameSolver::bad_literal() {
  if (!bad_lit_) {
    CnfFormula cone;
    MaybeLit b = encode_bad(ts_, 0, map_, cone);
    add_cnf(solver_, cone);
    if (b.is_const) {
      sat::Lit k = sat::mk_lit(solver_.new_var());
      solver_.add_clause({b.const_val ? k : sat::neg(k)});
      bad_lit_ = k;
    } else {
      bad_lit_ = b.lit;
    }
  }
  return *bad_lit_;
}

sat::Lit FrameSolver::formula_literal(const FormulaStore& store, FormulaRef f) {
  if (memo_store_ != &store) {
    formula_memo_.clear();
    memo_store_ = &store;
  }
  auto it = formula_memo_.find(f);
  if (it != formula_memo_.end()) return it->second;
  CnfFormula cnf;
  MaybeLit m = encode_formula(store, f, 0, map_, cnf);
  add_cnf(solver_, cnf);
  sat::Lit out;
  if (m.is_const) {
    sat::Lit k = sat::mk_lit(solver_.new_var());
    solver_.add_clause({m.const_val ? k : sat::neg(k)});
    out = k;
  } else {
    out = m.lit;
  }
  formula_memo_.emplace(f, out);
  return out;
}

std::optional<FrameSolver::StateHit> FrameSolver::find_state(int level,
                                                             sat::Lit extra) {
  std::vector<sat::Lit> assume = frame_assumptions(level);
  assume.push_back(extra);
  if (run(assume) != sat::SolveStatus::sat) return std::nullopt;
  StateHit hit;
  hit.state.reserve(ts_.num_latches());
  for (uint32_t i = 0; i < ts_.num_latches(); ++i) {
    bool val = solver_.model_bool(sat::mk_lit(map_.latch_at(i, 0)));
    hit.state.push_back(state_lit(i, !val));
  }
  hit.inputs.assign(ts_.num_inputs(), false);
  for (uint32_t i = 0; i < ts_.num_inputs(); ++i)
    hit.inputs[i] = solver_.model_bool(sat::mk_lit(map_.input_at(i, 0)));
  return hit;
}

bool FrameSolver::refutes(int level, sat::Lit extra) {
  std::vector<sat::Lit> assume = frame_assumptions(level);
  assume.push_back(extra);
  return run(assume) == sat::SolveStatus::unsat;
}

CharChecker::CharChecker(const TransitionSystem& ts,
                         const InductiveTrace& trace, uint64_t* queries,
                         QueryLimits limits)
    : ts_(ts), trace_(trace), N_(trace.size()), map_(solver_),
      queries_(queries) {
  solver_.set_conflict_budget(limits.conflict_budget);
  tr_act_.resize(N_ + 1);
  for (int t = 0; t <= N_; ++t) {
    tr_act_[t] = sat::mk_lit(solver_.new_var());
    add_cnf_activated(solver_, encode_tr(ts_, t, map_), tr_act_[t]);
  }
  CnfFormula cone;
  MaybeLit b = encode_bad(ts_, N_ + 1, map_, cone);
  add_cnf(solver_, cone);
  if (b.is_const) {
    bad_const_false_ = !b.const_val;
    sat::Lit k = sat::mk_lit(solver_.new_var());
    solver_.add_clause({b.const_val ? k : sat::neg(k)});
    bad_lit_ = k;
  } else {
    bad_lit_ = b.lit;
  }
  for (size_t i = 0; i < ts_.num_latches(); ++i)
    for (int t = 0; t <= N_ + 1; ++t)
      map_.latch_at(static_cast<uint32_t>(i), t);
}

sat::Lit CharChecker::frame_instance(int level, int time) {
  auto key = std::make_pair(level, time);
  auto it = frame_act_.find(key);
  if (it != frame_act_.end()) return it->second;
  sat::Lit act = sat::mk_lit(solver_.new_var());
  CnfFormula cnf = instantiate(trace_.frame_clauses(level), time, map_);
  add_cnf_activated(solver_, cnf, act);
  frame_act_.emplace(key, act);
  return act;
}

bool CharChecker::sel_unsat(int i, int k) {
  if (!(1 <= k && k <= i + 1 && i <= N_))
    throw std::invalid_argument("sel query: side condition violated");
  std::vector<sat::Lit> assume;
  assume.push_back(bad_lit_);
  for (int t = i + 1 - k; t <= N_; ++t) assume.push_back(tr_act_[t]);
  for (int t = i + 1 - k; t <= i; ++t) assume.push_back(frame_instance(i, t));
  for (int t = i + 1; t <= N_; ++t) assume.push_back(frame_instance(t, t));
  if (queries_) ++*queries_;
  ++local_queries_;
  sat::SolveStatus st = solver_.solve(assume);
  if (st == sat::SolveStatus::budget_exceeded)
    throw sat::BudgetExceeded{};
  return st == sat::SolveStatus::unsat;
}

std::vector<bool> CharChecker::model_inputs(int t) const {
  std::vector<bool> out(ts_.num_inputs(), false);
  for (uint32_t i = 0; i < ts_.num_inputs(); ++i) {
    sat::Var v = const_cast<VarMap&>(map_).input_at(i, t);
    out[i] = solver_.model_bool(sat::mk_lit(v));
  }
  return out;
}

std::optional<std::vector<std::vector<bool>>>
CharChecker::counterexample_check() {
  std::vector<sat::Lit> assume;
  assume.push_back(bad_lit_);
  for (int t = 0; t <= N_; ++t) assume.push_back(tr_act_[t]);
  for (int t = 0; t <= N_; ++t) assume.push_back(frame_instance(t, t));
  if (queries_) ++*queries_;
  ++local_queries_;
  sat::SolveStatus st = solver_.solve(assume);
  if (st == sat::SolveStatus::budget_exceeded)
    throw sat::BudgetExceeded{};
  if (st == sat::SolveStatus::unsat) return std::nullopt;
  std::vector<std::vector<bool>> stim;
  for (int t = 0; t <= N_ + 1; ++t) stim.push_back(model_inputs(t));
  // Unconstrained-init latch values ride on frame 0 as extra inputs.
  for (size_t idx : ts_.free_init_latches()) {
    sat::Var v = map_.latch_at(static_cast<uint32_t>(idx), 0);
    stim[0].push_back(solver_.model_bool(sat::mk_lit(v)));
  }
  return stim;
}

}  // namespace smc
