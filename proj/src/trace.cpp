#include "smc/trace.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

#include "smc/solvers.hpp"

namespace smc {

StateCube initial_cube(const TransitionSystem& ts) {
  StateCube cube;
  for (uint32_t i = 0; i < ts.num_latches(); ++i) {
    switch (ts.latch(i).init) {
      case LatchInit::zero:
        cube.push_back(state_lit(i, true));
        break;
      case LatchInit::one:
        cube.push_back(state_lit(i, false));
        break;
      case LatchInit::free:
        break;
    }
  }
  return cube;
}

InductiveTrace InductiveTrace::initial(const TransitionSystem& ts) {
  InductiveTrace tr;
  tr.deltas_.emplace_back();
  for (StateLit l : initial_cube(ts)) tr.deltas_[0].push_back(StateClause{l});
  return tr;
}

InductiveTrace InductiveTrace::from_frames(
    std::vector<std::vector<StateClause>> frames) {
  if (frames.empty()) throw std::invalid_argument("trace needs a frame");
  InductiveTrace tr;
  tr.deltas_.resize(frames.size());
  for (size_t i = frames.size(); i-- > 0;)
    for (StateClause& c : frames[i])
      tr.add_clause(canonical_clause(std::move(c)), static_cast<int>(i));
  return tr;
}

std::vector<StateClause> InductiveTrace::frame_clauses(int i) const {
  std::vector<StateClause> out;
  for (size_t j = static_cast<size_t>(std::max(i, 0)); j < deltas_.size(); ++j)
    out.insert(out.end(), deltas_[j].begin(), deltas_[j].end());
  return out;
}

size_t InductiveTrace::total_clauses() const {
  size_t n = 0;
  for (const auto& d : deltas_) n += d.size();
  return n;
}

bool InductiveTrace::add_clause(StateClause c, int level) {
  assert(level >= 0 && level <= size());
  c = canonical_clause(std::move(c));
  // Redundant if an equal-or-stronger clause already covers the level.
  for (size_t j = static_cast<size_t>(level); j < deltas_.size(); ++j)
    for (const StateClause& d : deltas_[j])
      if (clause_subsumes(d, c)) return false;
  // Drop clauses this one subsumes at or below the level.
  for (int j = 0; j <= level; ++j) {
    auto& dj = deltas_[j];
    dj.erase(std::remove_if(dj.begin(), dj.end(),
                            [&](const StateClause& d) {
                              return clause_subsumes(c, d);
                            }),
             dj.end());
  }
  deltas_[level].push_back(std::move(c));
  return true;
}

void InductiveTrace::promote(int level, size_t idx) {
  assert(level + 1 < static_cast<int>(deltas_.size()));
  StateClause c = deltas_[level][idx];
  deltas_[level].erase(deltas_[level].begin() + static_cast<long>(idx));
  add_clause(std::move(c), level + 1);
}

std::string InductiveTrace::dump() const {
  std::ostringstream os;
  for (size_t i = 0; i < deltas_.size(); ++i) {
    os << "level " << i << ":\n";
    std::vector<std::string> lines;
    for (const StateClause& c : deltas_[i]) lines.push_back(clause_to_string(c));
    std::sort(lines.begin(), lines.end());
    for (const auto& s : lines) os << "  " << s << "\n";
  }
  return os.str();
}

namespace {

FormulaRef frame_formula(FormulaStore& store, const InductiveTrace& tr,
                         int i) {
  return store.from_clauses(tr.frame_clauses(i));
}

}  // namespace

bool is_trace(const InductiveTrace& tr, const TransitionSystem& ts,
              uint64_t* queries) {
  // F_0 must equal the initial states; consecution for every i < N.
  FrameSolver fs(ts, tr, queries);
  FormulaStore store;
  StateCube init = initial_cube(ts);
  // Init => F_0 : init cube conjoined with some clause negated.
  FormulaRef f0 = frame_formula(store, tr, 0);
  FormulaRef not_f0 = store.negate(f0);
  FormulaRef init_f = store.from_cube(init);
  sat::Lit viol = fs.formula_literal(store, store.mk_and(init_f, not_f0));
  // Query below level size()+1 so no frame clauses are assumed.
  if (!fs.refutes(tr.size() + 1, viol)) return false;
  // F_0 => Init.
  if (!init.empty()) {
    sat::Lit back = fs.formula_literal(
        store, store.from_clauses(std::vector<StateClause>{negate_cube(init)}));
    if (!fs.refutes(0, back)) return false;
  }
  StepSolver ss(ts, tr, queries);
  for (int i = 0; i + 1 <= tr.size(); ++i) {
    FormulaRef next = frame_formula(store, tr, i + 1);
    if (!ss.step_implies(i, store, next)) return false;
  }
  return true;
}

bool is_safe(const InductiveTrace& tr, const TransitionSystem& ts,
             uint64_t* queries) {
  FrameSolver fs(ts, tr, queries);
  sat::Lit bad = fs.bad_literal();
  for (int i = 0; i <= tr.size(); ++i)
    if (!fs.refutes(i, bad)) return false;
  return true;
}

bool is_monotone(const InductiveTrace& tr, const TransitionSystem& ts,
                 uint64_t* queries) {
  FrameSolver fs(ts, tr, queries);
  FormulaStore store;
  for (int i = 0; i + 1 <= tr.size(); ++i) {
    FormulaRef next = frame_formula(store, tr, i + 1);
    sat::Lit viol = fs.formula_literal(store, store.negate(next));
    if (!fs.refutes(i, viol)) return false;
  }
  return true;
}

std::optional<int> closing_level(const InductiveTrace& tr,
                                 const TransitionSystem& ts,
                                 uint64_t* queries) {
  FrameSolver fs(ts, tr, queries);
  FormulaStore store;
  for (int i = 1; i <= tr.size(); ++i) {
    FormulaRef prev = frame_formula(store, tr, i - 1);
    sat::Lit viol = fs.formula_literal(store, store.negate(prev));
    if (fs.refutes(i, viol)) return i;
  }
  return std::nullopt;
}

std::optional<int> max_extension_level(const InductiveTrace& tr,
                                       const TransitionSystem& ts,
                                       uint64_t* queries) {
  CharChecker chk(ts, tr, queries);
  for (int i = tr.size(); i >= 0; --i)
    if (chk.suffix_unsat(i)) return i;
  return std::nullopt;
}

bool is_sel(const InductiveTrace& tr, const TransitionSystem& ts, int i, int k,
            uint64_t* queries) {
  CharChecker chk(ts, tr, queries);
  return chk.sel_unsat(i, k);
}

bool pdr_push(InductiveTrace& tr, const TransitionSystem& ts,
              uint64_t* queries) {
  if (tr.size() < 1) return false;
  StepSolver ss(ts, tr, queries);
  bool changed = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int lvl = 1; lvl + 1 <= tr.size(); ++lvl) {
      // Snapshot: subsumption during promotion reshuffles the delta.
      std::vector<StateClause> snapshot = tr.delta(lvl);
      for (const StateClause& c : snapshot) {
        auto& cur = tr.delta(lvl);
        auto it = std::find(cur.begin(), cur.end(), c);
        if (it == cur.end()) continue;  // dropped meanwhile
        if (ss.push_query(lvl, c)) {
          tr.promote(lvl, static_cast<size_t>(it - cur.begin()));
          ss.add_frame_clause(lvl + 1, c);
          moved = changed = true;
        }
      }
    }
  }
  return changed;
}

bool is_stronger(const InductiveTrace& a, const InductiveTrace& b,
                 const TransitionSystem& ts, uint64_t* queries) {
  FrameSolver fs(ts, a, queries);
  FormulaStore store;
  int upto = std::min(a.size(), b.size());
  for (int i = 0; i <= upto; ++i) {
    FormulaRef bi = store.from_clauses(b.frame_clauses(i));
    sat::Lit viol = fs.formula_literal(store, store.negate(bi));
    if (!fs.refutes(i, viol)) return false;
  }
  return true;
}

}  // namespace smc
