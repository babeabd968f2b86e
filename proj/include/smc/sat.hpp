#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace smc::sat {

// Raised by callers when a per-call conflict budget ran out; engines
// surface it as an indeterminate verdict, never as a wrong answer.
struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("sat conflict budget exceeded") {}
};

using Var = uint32_t;
using Lit = uint32_t;  // 2*var | sign

constexpr Lit lit_undef = std::numeric_limits<Lit>::max();

constexpr Lit mk_lit(Var v, bool neg = false) { return 2 * v + (neg ? 1 : 0); }
constexpr Var var_of(Lit l) { return l >> 1; }
constexpr bool sign_of(Lit l) { return l & 1; }
constexpr Lit neg(Lit l) { return l ^ 1; }

enum class Lbool : uint8_t { f = 0, t = 1, undef = 2 };
inline Lbool from_bool(bool b) { return b ? Lbool::t : Lbool::f; }

enum class SolveStatus : uint8_t { sat, unsat, budget_exceeded };

// One node of a resolution refutation. Inputs carry their partition group;
// derived nodes carry a linear resolution chain: start at chain_start, then
// resolve with each (pivot, antecedent) in order.
struct ProofNode {
  std::vector<Lit> lits;
  int group = -1;  // >= 0 for input clauses
  uint32_t chain_start = 0;
  std::vector<std::pair<Var, uint32_t>> chain;  // (pivot var, antecedent id)
  bool is_input() const { return group >= 0; }
};

struct ResolutionProof {
  std::vector<ProofNode> nodes;  // antecedent ids always precede resolvents
  uint32_t empty_id = 0;
};

// Checks every resolution step syntactically and that the root is empty.
bool validate_proof(const ResolutionProof& proof, std::string* diag = nullptr);

// Line-oriented trace of a refutation for offline checking: inputs with
// their partition group, resolvents with chain-start and antecedents.
std::string proof_to_text(const ResolutionProof& proof);

// Incremental CDCL solver: two-watched literals, VSIDS-style decision
// heuristic, Luby restarts, phase saving, assumption-based solving with
// final-conflict cores, optional resolution-proof recording. Deterministic
// for a fixed sequence of calls.
class Solver {
 public:
  Solver();

  Var new_var();
  size_t num_vars() const { return assigns_.size(); }

  // Returns false if the clause is already falsified at level 0 and the
  // solver is now permanently unsat. Tautologies are silently dropped.
  bool add_clause(std::span<const Lit> lits, int group = 0);
  bool add_clause(std::initializer_list<Lit> lits, int group = 0) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()), group);
  }

  SolveStatus solve(std::span<const Lit> assumptions = {});
  SolveStatus solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  // After sat: total model over all registered variables.
  Lbool model_value(Lit l) const;
  bool model_bool(Lit l) const { return model_value(l) == Lbool::t; }

  // After unsat under assumptions: the subset of assumptions in conflict.
  const std::vector<Lit>& core() const { return core_; }

  // Proof recording. Must be enabled before clauses are added. The recorded
  // proof ends in the empty clause only for refutations without assumptions.
  void enable_proof_recording();
  bool proof_recording() const { return record_proof_; }
  const ResolutionProof& proof() const { return proof_; }

  void set_conflict_budget(int64_t budget) { conflict_budget_ = budget; }

  uint64_t num_solves() const { return num_solves_; }
  uint64_t num_conflicts() const { return conflicts_total_; }

 private:
  struct Clause {
    std::vector<Lit> lits;
    double act = 0.0;
    uint32_t proof_id = 0;
    bool learnt = false;
    bool deleted = false;
  };
  using CRef = uint32_t;
  static constexpr CRef cref_undef = std::numeric_limits<CRef>::max();

  struct Watch {
    CRef cref;
    Lit blocker;
  };

  Lbool value(Lit l) const {
    Lbool v = assigns_[var_of(l)];
    if (v == Lbool::undef) return Lbool::undef;
    return sign_of(l) ? (v == Lbool::t ? Lbool::f : Lbool::t) : v;
  }

  void attach(CRef c);
  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel,
               uint32_t& out_proof_id);
  void analyze_final(Lit p);
  void record_empty_from_conflict(CRef confl);
  uint32_t level0_unit_id(Var v);
  void cancel_until(int level);
  Lit pick_branch();
  void bump_var(Var v);
  void bump_clause(Clause& c);
  void decay_activities();
  void reduce_db();
  void ensure_heap(Var v);
  void heap_insert(Var v);
  Var heap_pop();
  void heap_up(size_t i);
  void heap_down(size_t i);
  bool heap_less(Var a, Var b) const;

  std::deque<Clause> clauses_;  // stable indices
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watch>> watches_;  // per literal
  std::vector<Lbool> assigns_;
  std::vector<bool> polarity_;  // saved phase
  std::vector<CRef> reason_;
  std::vector<int> level_;
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<Var> heap_;
  std::vector<int> heap_pos_;  // -1 if absent
  double cla_inc_ = 1.0;

  std::vector<Lit> assumptions_;
  std::vector<Lit> core_;
  std::vector<uint8_t> seen_;

  std::vector<Lbool> model_;

  bool ok_ = true;
  bool record_proof_ = false;
  ResolutionProof proof_;
  uint32_t empty_proof_id_ = 0;
  std::vector<uint32_t> level0_unit_ids_;

  int64_t conflict_budget_ = -1;
  uint64_t conflicts_total_ = 0;
  uint64_t num_solves_ = 0;
};

}  // namespace smc::sat
