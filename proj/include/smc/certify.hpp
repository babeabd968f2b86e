#pragma once

#include <optional>
#include <string>

#include "smc/engine.hpp"
#include "smc/trace.hpp"

namespace smc {

// The closing frame of a closed trace, as a CNF certificate. For monotone
// traces the least closing frame equals its predecessor and is therefore
// inductive. `level` must come from closing_level().
Invariant extract_invariant(const InductiveTrace& trace, int level);

// Certifies Init => Inv, Inv ∧ Tr => Inv', Inv => ¬Bad with three unsat
// checks against a fresh encoding of the circuit (independent of any
// engine solver state).
bool check_invariant(const Invariant& inv, const TransitionSystem& ts,
                     uint64_t* queries = nullptr, std::string* diag = nullptr);

// Replays the stimulus from the initial state; true iff the final frame
// evaluates the bad literal to 1. The first stimulus line carries values
// for unconstrained-init latches after the circuit inputs.
bool check_witness(const Witness& w, const TransitionSystem& ts,
                   std::string* diag = nullptr);

std::string invariant_to_text(const Invariant& inv, size_t num_latches);

}  // namespace smc
