#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smc/aig.hpp"
#include "smc/formula.hpp"
#include "smc/trace.hpp"

namespace smc {

enum class Verdict : uint8_t { safe, unsafe, unknown };

// Input stimulus replaying a counterexample: one bit vector per frame
// 0..depth. The frame-0 vector carries the chosen initial values of
// unconstrained-init latches appended after the circuit inputs.
struct Witness {
  std::vector<std::vector<bool>> inputs;
  int depth() const { return static_cast<int>(inputs.size()) - 1; }
};

// CNF certificate: clauses over latch literals.
using Invariant = std::vector<StateClause>;

enum class SelStrategy : uint8_t { topdown, bottomup };

struct PerIterationStats {
  int iteration = 0;
  int frames = 0;
  Sel sel;
  uint64_t sat_queries = 0;
  uint64_t learned_clauses = 0;
  double time_ms = 0.0;
};

struct EngineStats {
  uint64_t sat_queries = 0;
  uint64_t learned_clauses = 0;
  uint64_t interpolants_validated = 0;
  int iterations = 0;
  int frames = 0;          // trace size / depth / k at convergence
  int converged_k = 0;     // k-induction depth when applicable
  double time_ms = 0.0;
  std::vector<PerIterationStats> per_iteration;
};

struct CheckResult {
  Verdict verdict = Verdict::unknown;
  std::optional<Witness> witness;      // for unsafe
  std::optional<Invariant> invariant;  // for safe
  EngineStats stats;
};

struct EngineOptions {
  int max_frames = 1 << 20;
  SelStrategy sel = SelStrategy::topdown;
  bool indgen = true;
  bool validate_interpolants = true;
  bool debug_checks = false;  // assert algorithm invariants via SAT
  uint64_t seed = 0;
  int64_t conflict_budget = -1;   // per solver call; -1 = unlimited
  double wall_ms = 0;             // checked at iteration boundaries; 0 = off
  std::string debug_dump_dir;     // per-extension proof/interpolant dumps
};

std::string verdict_line(Verdict v);  // "0" / "1" / "2"

}  // namespace smc
