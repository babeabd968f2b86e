#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "smc/aig.hpp"
#include "smc/formula.hpp"
#include "smc/sat.hpp"

namespace smc {

class InductiveTrace;

// Maps (model variable, time frame) to solver variables, allocating on
// demand, with a reverse map for debugging and interpolant extraction.
// Frame t latch variables represent the state after t steps.
class VarMap {
 public:
  explicit VarMap(sat::Solver& solver) : solver_(solver) {}

  sat::Var latch_at(uint32_t latch, int t);
  sat::Var input_at(uint32_t input, int t);
  sat::Var fresh_aux(int t);

  sat::Lit lit_at(StateLit l, int t) {
    return sat::mk_lit(latch_at(state_lit_latch(l), t), state_lit_negated(l));
  }

  struct Entry {
    enum class Kind : uint8_t { latch, input, aux } kind;
    uint32_t index;
    int time;
  };
  std::optional<Entry> lookup(sat::Var v) const;

  sat::Solver& solver() { return solver_; }

 private:
  sat::Var record(Entry e);
  sat::Solver& solver_;
  std::map<std::pair<uint32_t, int>, sat::Var> latch_vars_;
  std::map<std::pair<uint32_t, int>, sat::Var> input_vars_;
  std::map<sat::Var, Entry> info_;
};

// A bag of solver clauses plus the map they are resolved through.
struct CnfFormula {
  std::vector<std::vector<sat::Lit>> clauses;

  void add(std::vector<sat::Lit> c) { clauses.push_back(std::move(c)); }
  void append(const CnfFormula& other) {
    clauses.insert(clauses.end(), other.clauses.begin(), other.clauses.end());
  }
  size_t size() const { return clauses.size(); }
};

// A literal that may have folded to a constant during encoding.
struct MaybeLit {
  bool is_const = false;
  bool const_val = false;
  sat::Lit lit = sat::lit_undef;

  static MaybeLit constant(bool v) { return {true, v, sat::lit_undef}; }
  static MaybeLit of(sat::Lit l) { return {false, false, l}; }
  MaybeLit negated() const {
    return is_const ? constant(!const_val) : of(sat::neg(lit));
  }
};

// Tseitin encoding of the and-gate cone of `root` at frame t. Gate
// auxiliaries are fresh per call and never shared across calls.
class ConeEncoder {
 public:
  ConeEncoder(const TransitionSystem& ts, VarMap& map, int t, CnfFormula& out)
      : ts_(ts), map_(map), t_(t), out_(out) {}

  MaybeLit encode(AigLit root);

 private:
  const TransitionSystem& ts_;
  VarMap& map_;
  int t_;
  CnfFormula& out_;
  std::map<uint32_t, MaybeLit> memo_;  // gate var -> encoded literal
};

// Clauses asserting Tr(v_t, v_{t+1}).
CnfFormula encode_tr(const TransitionSystem& ts, int t, VarMap& map);

// Cone of the bad literal over frame-t latches and inputs.
MaybeLit encode_bad(const TransitionSystem& ts, int t, VarMap& map,
                    CnfFormula& out);

// Clauses of the initial-state cube at frame t (unconstrained-init latches
// are left free).
CnfFormula encode_init(const TransitionSystem& ts, int t, VarMap& map);

// State clauses instantiated at frame t.
CnfFormula instantiate(std::span<const StateClause> clauses, int t,
                       VarMap& map);

// The M-to-N unrolling where frames[i] holds in each intermediate state:
// conjunction over i in [M, N) of frames[i](v_i) and Tr(v_i, v_{i+1}).
// M == N yields the empty formula.
CnfFormula unroll(const TransitionSystem& ts,
                  std::span<const std::vector<StateClause>> frames, int M,
                  int N, VarMap& map);

// Characteristic formula of the strong extension level (i, k) for a trace
// of size N: frame i repeated at positions i+1-k .. i, the trace suffix
// above it, and transition steps from i+1-k through N. The bad literal is
// not included. Requires 1 <= k <= i+1 <= N+1.
CnfFormula characteristic_formula(const InductiveTrace& trace,
                                  const TransitionSystem& ts, int i, int k,
                                  VarMap& map);

// Tseitin encoding of an NNF formula over frame-t latches; returns a
// literal equivalent to the formula.
MaybeLit encode_formula(const FormulaStore& store, FormulaRef f, int t,
                        VarMap& map, CnfFormula& out);

void dump_dimacs(const CnfFormula& cnf, const VarMap& map, size_t num_vars,
                 std::ostream& os);

}  // namespace smc
