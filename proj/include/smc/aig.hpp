#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smc {

// AIGER-style literal: variable index * 2, LSB is negation.
// Literal 0 is constant false, literal 1 constant true.
struct AigLit {
  uint32_t raw = 0;

  static constexpr AigLit f() { return AigLit{0}; }
  static constexpr AigLit t() { return AigLit{1}; }
  static constexpr AigLit of_var(uint32_t var, bool neg = false) {
    return AigLit{2 * var + (neg ? 1u : 0u)};
  }

  constexpr uint32_t var() const { return raw >> 1; }
  constexpr bool negated() const { return raw & 1; }
  constexpr bool is_const() const { return var() == 0; }
  constexpr bool const_value() const { return raw == 1; }
  constexpr AigLit operator!() const { return AigLit{raw ^ 1}; }
  constexpr bool operator==(const AigLit&) const = default;
};

enum class LatchInit : uint8_t { zero, one, free };

struct Latch {
  AigLit next;
  LatchInit init = LatchInit::zero;
};

struct AndGate {
  uint32_t lhs_var = 0;  // defined variable (positive)
  AigLit rhs0;
  AigLit rhs1;
};

// What a variable stands for.
enum class VarKind : uint8_t { constant, input, latch, gate };

struct VarInfo {
  VarKind kind = VarKind::constant;
  uint32_t index = 0;  // input/latch/gate index
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error("aiger parse error (line " + std::to_string(line) +
                           "): " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A word-level view of an AIGER circuit: inputs, latches with next-state
// functions and init values, topologically ordered and-gates, and a single
// bad literal. Immutable after construction and safe to share.
class TransitionSystem {
 public:
  TransitionSystem(uint32_t max_var, std::vector<uint32_t> inputs,
                   std::vector<uint32_t> latch_vars, std::vector<Latch> latches,
                   std::vector<AndGate> gates, AigLit bad);

  uint32_t max_var() const { return max_var_; }
  size_t num_inputs() const { return inputs_.size(); }
  size_t num_latches() const { return latches_.size(); }
  size_t num_gates() const { return gates_.size(); }

  uint32_t input_var(size_t i) const { return inputs_[i]; }
  uint32_t latch_var(size_t i) const { return latch_vars_[i]; }
  const Latch& latch(size_t i) const { return latches_[i]; }
  const std::vector<AndGate>& gates() const { return gates_; }
  AigLit bad() const { return bad_; }

  VarInfo var_info(uint32_t var) const { return info_.at(var); }

  // Latches whose initial value is unconstrained (AIGER 1.9). Their time-0
  // values behave like extra primary inputs.
  std::vector<size_t> free_init_latches() const;
  bool has_free_init() const;

  // Evaluates one step. States and inputs are bit vectors indexed by
  // latch/input position; limited to 64 latches and 64 inputs.
  struct StepResult {
    uint64_t next_state = 0;
    bool bad = false;
  };
  StepResult step(uint64_t state, uint64_t inputs) const;
  bool eval_bad(uint64_t state, uint64_t inputs) const;

 private:
  uint64_t eval_lit(AigLit lit, const std::vector<bool>& val) const;
  void eval_gates(uint64_t state, uint64_t inputs,
                  std::vector<bool>& val) const;

  uint32_t max_var_;
  std::vector<uint32_t> inputs_;      // input index -> var
  std::vector<uint32_t> latch_vars_;  // latch index -> var
  std::vector<Latch> latches_;
  std::vector<AndGate> gates_;
  AigLit bad_;
  std::vector<VarInfo> info_;  // var -> kind
};

// Parses AIGER ASCII ("aag"). Exactly one bad-state property is required:
// either one B line (1.9) or, legacy, one output. Binary "aig" input is
// detected and rejected.
TransitionSystem parse_aiger(std::string_view text);

// Serializes back to AIGER ASCII. parse(serialize(ts)) == ts structurally.
std::string to_aiger_ascii(const TransitionSystem& ts);

bool structurally_equal(const TransitionSystem& a, const TransitionSystem& b);

}  // namespace smc
