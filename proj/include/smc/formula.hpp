#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace smc {

// Literal over latch state variables: 2*latch_index | negated.
using StateLit = uint32_t;
constexpr StateLit state_lit(uint32_t latch, bool negated = false) {
  return 2 * latch + (negated ? 1 : 0);
}
constexpr uint32_t state_lit_latch(StateLit l) { return l >> 1; }
constexpr bool state_lit_negated(StateLit l) { return l & 1; }
constexpr StateLit state_lit_neg(StateLit l) { return l ^ 1; }

// A clause of state literals in canonical form (sorted, no duplicates).
using StateClause = std::vector<StateLit>;
using StateCube = std::vector<StateLit>;

StateClause canonical_clause(StateClause c);
bool clause_subsumes(const StateClause& a, const StateClause& b);
StateClause negate_cube(const StateCube& cube);
std::string clause_to_string(const StateClause& c);

// Hash-consed NNF and/or DAG over latch literals. References are indices
// into a store; structurally equal nodes share one index. Constants fold.
using FormulaRef = uint32_t;

class FormulaStore {
 public:
  FormulaStore();

  FormulaRef top() const { return 0; }
  FormulaRef bottom() const { return 1; }
  FormulaRef lit(StateLit l);
  FormulaRef mk_and(std::vector<FormulaRef> children);
  FormulaRef mk_or(std::vector<FormulaRef> children);
  FormulaRef mk_and(FormulaRef a, FormulaRef b) { return mk_and({a, b}); }
  FormulaRef mk_or(FormulaRef a, FormulaRef b) { return mk_or({a, b}); }
  FormulaRef negate(FormulaRef f);

  FormulaRef from_clauses(std::span<const StateClause> clauses);
  FormulaRef from_cube(const StateCube& cube);

  bool eval(FormulaRef f, uint64_t state) const;
  void collect_latches(FormulaRef f, std::vector<uint32_t>& out) const;
  std::string to_string(FormulaRef f) const;

  // Rewrites every literal atom through fn (which sees the whole literal
  // and returns the replacement literal).
  template <typename Fn>
  FormulaRef remap(FormulaRef f, Fn&& fn) {
    const Node n = nodes_[f];  // copy: interning may reallocate
    switch (n.kind) {
      case Kind::konst:
        return f;
      case Kind::lit:
        return lit(fn(n.slit));
      case Kind::land:
      case Kind::lor: {
        std::vector<FormulaRef> ch;
        ch.reserve(n.children.size());
        for (FormulaRef c : n.children) ch.push_back(remap(c, fn));
        return n.kind == Kind::land ? mk_and(std::move(ch))
                                    : mk_or(std::move(ch));
      }
    }
    return f;
  }

  enum class Kind : uint8_t { konst, lit, land, lor };
  struct Node {
    Kind kind;
    bool value = false;   // konst
    StateLit slit = 0;    // lit
    std::vector<FormulaRef> children;
  };
  const Node& node(FormulaRef f) const { return nodes_[f]; }
  size_t size() const { return nodes_.size(); }

 private:
  FormulaRef intern(Node n);
  std::vector<Node> nodes_;
  std::unordered_map<std::string, FormulaRef> index_;
};

}  // namespace smc
