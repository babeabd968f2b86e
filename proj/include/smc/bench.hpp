#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smc/aig.hpp"

namespace smc {

// Circuit construction with structural constant folding. Variables are
// laid out inputs first, then latches, then gates.
class AigBuilder {
 public:
  AigLit add_input();
  AigLit add_latch(LatchInit init);
  void set_next(AigLit latch, AigLit next);
  void set_bad(AigLit bad);

  AigLit land(AigLit a, AigLit b);
  AigLit lor(AigLit a, AigLit b) { return !land(!a, !b); }
  AigLit lxor(AigLit a, AigLit b);
  AigLit mux(AigLit sel, AigLit then_lit, AigLit else_lit);
  AigLit land_all(const std::vector<AigLit>& lits);
  AigLit lor_all(std::vector<AigLit> lits);
  // (bits == value), bits LSB-first.
  AigLit eq_const(const std::vector<AigLit>& bits, uint64_t value);
  // (bits >= value) as unsigned.
  AigLit geq_const(const std::vector<AigLit>& bits, uint64_t value);
  // bits + 1 (LSB-first), truncated to the same width.
  std::vector<AigLit> increment(const std::vector<AigLit>& bits);

  TransitionSystem build();

 private:
  uint32_t next_var_ = 0;
  std::vector<uint32_t> inputs_;
  std::vector<uint32_t> latch_vars_;
  std::vector<Latch> latches_;
  std::vector<AndGate> gates_;
  AigLit bad_ = AigLit::f();
};

// The worked example family: a width-bit register counting up, reset to 0
// at reset_at, with Bad = (c >= bad_threshold). (8, 64, 66) is the paper's
// counter, whose property is 2-inductive.
TransitionSystem gen_counter(int width, uint64_t reset_at,
                             uint64_t bad_threshold);

// Serial add/shift-comparison family: the property is k-inductive with
// k exactly the width parameter, while its inductive invariant is flat.
// See bench.cpp for the construction.
TransitionSystem gen_shift(int width);

// Deterministic random circuit: byte-identical output for a fixed seed.
TransitionSystem gen_random_aig(uint64_t seed, int num_latches,
                                int num_gates, int num_inputs = 2);

// Explicit breadth-first reachability with input enumeration.
struct OracleResult {
  bool safe = true;
  int shortest_cex = -1;  // frames to the first bad state, -1 if safe
  uint64_t num_reachable = 0;
  std::vector<uint64_t> reachable;  // states, ascending
};

// Refuses systems beyond the bounds (default 20 latches, 8 inputs).
OracleResult bfs_reachable(const TransitionSystem& ts, int max_latches = 20,
                           int max_inputs = 8);

}  // namespace smc
