#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smc/cnf.hpp"
#include "smc/formula.hpp"
#include "smc/sat.hpp"
#include "smc/trace.hpp"

namespace smc {

// Ordered clause groups A_0..A_{G-1} whose conjunction is unsatisfiable.
// Clauses are over one solver's variable space.
struct ItpPartition {
  std::vector<CnfFormula> groups;
  size_t num_vars = 0;

  size_t num_groups() const { return groups.size(); }
};

// Per variable, the least and greatest group it occurs in, or (-1, -1).
std::vector<std::pair<int, int>> var_group_ranges(const ItpPartition& part);

// McMillan-style partial interpolants computed for every cut of a single
// refutation. Result[c-1] is the interpolant at cut c (prefix = groups
// < c), for c = 1..G-1, as a formula whose atoms are solver variables.
std::vector<FormulaRef> proof_sequence_interpolants(
    const sat::ResolutionProof& proof, const ItpPartition& part,
    FormulaStore& store);

// Conditions on a sequence interpolant: (a) A_0 => I_1, (b) I_c and A_c
// imply I_{c+1}, (c) I_{G-1} and A_{G-1} are inconsistent, (d) each I_c is
// over variables shared between its prefix and suffix. (a)-(c) are
// certified by fresh SAT calls, (d) syntactically.
bool validate_seq_interpolant(const std::vector<FormulaRef>& itps,
                              const ItpPartition& part, FormulaStore& store,
                              uint64_t* queries = nullptr,
                              std::string* diag = nullptr);

// Sequence interpolant for the characteristic formula of an SEL together
// with the bad cone, mapped back to latch-literal formulas per frame:
// at(j) is defined for j in [i-k+2, N+1].
struct SeqInterpolants {
  int first_frame = 0;
  std::vector<FormulaRef> formulas;

  FormulaRef at_frame(int j) const {
    return formulas.at(static_cast<size_t>(j - first_frame));
  }
};

struct CharItpResult {
  SeqInterpolants itp;
  ItpPartition partition;                // for revalidation / tests
  std::vector<FormulaRef> over_vars;     // raw cut interpolants
  sat::ResolutionProof proof;
};

// And/or-graph text of a sequence interpolant with the boundary legend.
std::string interpolants_to_text(const SeqInterpolants& itp,
                                 const FormulaStore& store);

// Solves the partitioned query with proof recording (it must be
// unsatisfiable; the caller certified the SEL first) and extracts the
// sequence interpolant. Throws std::logic_error if the query is sat.
CharItpResult characteristic_interpolants(const InductiveTrace& trace,
                                          const TransitionSystem& ts, Sel sel,
                                          FormulaStore& store,
                                          bool validate = true,
                                          uint64_t* queries = nullptr,
                                          int64_t conflict_budget = -1);

}  // namespace smc
