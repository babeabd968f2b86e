#include "smc/itp.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace smc {

namespace {

// Tseitin encoding of a formula whose atoms are solver variables of `s`.
MaybeLit encode_var_formula(const FormulaStore& store, FormulaRef f,
                            sat::Solver& s,
                            std::map<FormulaRef, MaybeLit>& memo) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  const FormulaStore::Node& n = store.node(f);
  MaybeLit res;
  switch (n.kind) {
    case FormulaStore::Kind::konst:
      res = MaybeLit::constant(n.value);
      break;
    case FormulaStore::Kind::lit:
      res = MaybeLit::of(sat::mk_lit(state_lit_latch(n.slit),
                                     state_lit_negated(n.slit)));
      break;
    case FormulaStore::Kind::land:
    case FormulaStore::Kind::lor: {
      bool is_and = n.kind == FormulaStore::Kind::land;
      std::vector<sat::Lit> kids;
      bool folded = false;
      for (FormulaRef c : n.children) {
        MaybeLit m = encode_var_formula(store, c, s, memo);
        if (m.is_const) {
          if (m.const_val != is_and) {
            res = MaybeLit::constant(!is_and);
            folded = true;
            break;
          }
          continue;
        }
        kids.push_back(m.lit);
      }
      if (folded) break;
      if (kids.empty()) {
        res = MaybeLit::constant(is_and);
        break;
      }
      if (kids.size() == 1) {
        res = MaybeLit::of(kids[0]);
        break;
      }
      sat::Lit g = sat::mk_lit(s.new_var());
      if (is_and) {
        std::vector<sat::Lit> big{g};
        for (sat::Lit l : kids) {
          s.add_clause({sat::neg(g), l});
          big.push_back(sat::neg(l));
        }
        s.add_clause(big);
      } else {
        std::vector<sat::Lit> big{sat::neg(g)};
        for (sat::Lit l : kids) {
          s.add_clause({g, sat::neg(l)});
          big.push_back(l);
        }
        s.add_clause(big);
      }
      res = MaybeLit::of(g);
      break;
    }
  }
  memo.emplace(f, res);
  return res;
}

// Fresh solver preloaded with `part.num_vars` variables.
sat::Solver fresh_solver_for(const ItpPartition& part) {
  sat::Solver s;
  for (size_t v = 0; v < part.num_vars; ++v) s.new_var();
  return s;
}

}  // namespace

std::vector<std::pair<int, int>> var_group_ranges(const ItpPartition& part) {
  std::vector<std::pair<int, int>> ranges(part.num_vars, {-1, -1});
  for (size_t g = 0; g < part.groups.size(); ++g) {
    for (const auto& clause : part.groups[g].clauses) {
      for (sat::Lit l : clause) {
        auto& r = ranges[sat::var_of(l)];
        if (r.first < 0) r = {static_cast<int>(g), static_cast<int>(g)};
        r.first = std::min(r.first, static_cast<int>(g));
        r.second = std::max(r.second, static_cast<int>(g));
      }
    }
  }
  return ranges;
}

std::vector<FormulaRef> proof_sequence_interpolants(
    const sat::ResolutionProof& proof, const ItpPartition& part,
    FormulaStore& store) {
  const auto ranges = var_group_ranges(part);
  const size_t n_nodes = proof.nodes.size();
  const int G = static_cast<int>(part.num_groups());

  // Trim to nodes reachable from the empty clause.
  std::vector<bool> used(n_nodes, false);
  std::vector<uint32_t> stack{proof.empty_id};
  while (!stack.empty()) {
    uint32_t id = stack.back();
    stack.pop_back();
    if (used[id]) continue;
    used[id] = true;
    const sat::ProofNode& n = proof.nodes[id];
    if (!n.is_input()) {
      stack.push_back(n.chain_start);
      for (auto& [pivot, ant] : n.chain) stack.push_back(ant);
    }
  }

  auto atom = [&](sat::Lit l) {
    return store.lit(state_lit(sat::var_of(l), sat::sign_of(l)));
  };

  std::vector<FormulaRef> out;
  for (int cut = 1; cut < G; ++cut) {
    std::vector<FormulaRef> pitp(n_nodes, store.bottom());
    for (uint32_t id = 0; id < n_nodes; ++id) {
      if (!used[id]) continue;
      const sat::ProofNode& n = proof.nodes[id];
      if (n.is_input()) {
        if (n.group < cut) {
          // A-side clause: disjunction of literals crossing the cut.
          std::vector<FormulaRef> shared;
          for (sat::Lit l : n.lits) {
            if (ranges[sat::var_of(l)].second >= cut) shared.push_back(atom(l));
          }
          pitp[id] = store.mk_or(std::move(shared));
        } else {
          pitp[id] = store.top();
        }
      } else {
        FormulaRef cur = pitp[n.chain_start];
        for (auto& [pivot, ant] : n.chain) {
          bool a_local = ranges[pivot].second < cut;
          cur = a_local ? store.mk_or(cur, pitp[ant])
                        : store.mk_and(cur, pitp[ant]);
        }
        pitp[id] = cur;
      }
    }
    out.push_back(pitp[proof.empty_id]);
  }
  return out;
}

bool validate_seq_interpolant(const std::vector<FormulaRef>& itps,
                              const ItpPartition& part, FormulaStore& store,
                              uint64_t* queries, std::string* diag) {
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m;
    return false;
  };
  const int G = static_cast<int>(part.num_groups());
  if (static_cast<int>(itps.size()) != G - 1)
    return fail("wrong interpolant count");
  const auto ranges = var_group_ranges(part);

  // (d) every atom is shared between the cut's prefix and suffix.
  for (int cut = 1; cut < G; ++cut) {
    std::vector<uint32_t> atoms;
    store.collect_latches(itps[cut - 1], atoms);
    for (uint32_t v : atoms) {
      if (v >= part.num_vars) return fail("foreign variable in interpolant");
      auto [lo, hi] = ranges[v];
      if (!(lo >= 0 && lo < cut && hi >= cut))
        return fail("interpolant variable not on cut boundary " +
                    std::to_string(cut));
    }
  }

  auto add_group = [&](sat::Solver& s, int g) {
    for (const auto& c : part.groups[g].clauses) s.add_clause(c);
  };
  auto check_unsat = [&](int first_group_incl, int last_group_incl,
                         std::optional<FormulaRef> assume_f,
                         std::optional<FormulaRef> refute_f) {
    sat::Solver s = fresh_solver_for(part);
    std::map<FormulaRef, MaybeLit> memo;
    for (int g = first_group_incl; g <= last_group_incl; ++g) add_group(s, g);
    std::vector<sat::Lit> assumptions;
    for (auto [f, positive] :
         {std::make_pair(assume_f, true), std::make_pair(refute_f, false)}) {
      if (!f) continue;
      FormulaRef use = positive ? *f : store.negate(*f);
      MaybeLit m = encode_var_formula(store, use, s, memo);
      if (m.is_const) {
        if (!m.const_val) return true;  // side is false: query unsat
        continue;
      }
      assumptions.push_back(m.lit);
    }
    if (queries) ++*queries;
    return s.solve(assumptions) == sat::SolveStatus::unsat;
  };

  // (a) A_0 => I_1
  if (!check_unsat(0, 0, std::nullopt, itps[0])) return fail("condition (a)");
  // (b) I_c ∧ A_c => I_{c+1}
  for (int c = 1; c < G - 1; ++c)
    if (!check_unsat(c, c, itps[c - 1], itps[c]))
      return fail("condition (b) at cut " + std::to_string(c));
  // (c) I_{G-1} ∧ A_{G-1} => false
  {
    sat::Solver s = fresh_solver_for(part);
    std::map<FormulaRef, MaybeLit> memo;
    for (const auto& c : part.groups[G - 1].clauses) s.add_clause(c);
    std::vector<sat::Lit> assumptions;
    MaybeLit m = encode_var_formula(store, itps[G - 2], s, memo);
    bool unsat;
    if (m.is_const) {
      unsat = !m.const_val;
      if (!unsat) {
        if (queries) ++*queries;
        unsat = s.solve() == sat::SolveStatus::unsat;
      }
    } else {
      assumptions.push_back(m.lit);
      if (queries) ++*queries;
      unsat = s.solve(assumptions) == sat::SolveStatus::unsat;
    }
    if (!unsat) return fail("condition (c)");
  }
  return true;
}

std::string interpolants_to_text(const SeqInterpolants& itp,
                                 const FormulaStore& store) {
  std::string out;
  for (size_t c = 0; c < itp.formulas.size(); ++c) {
    int frame = itp.first_frame + static_cast<int>(c);
    std::vector<uint32_t> latches;
    store.collect_latches(itp.formulas[c], latches);
    std::sort(latches.begin(), latches.end());
    latches.erase(std::unique(latches.begin(), latches.end()), latches.end());
    out += "interpolant at frame " + std::to_string(frame) + " over latches:";
    for (uint32_t v : latches) out += " x" + std::to_string(v);
    out += "\n  " + store.to_string(itp.formulas[c]) + "\n";
  }
  return out;
}

CharItpResult characteristic_interpolants(const InductiveTrace& trace,
                                          const TransitionSystem& ts, Sel sel,
                                          FormulaStore& store, bool validate,
                                          uint64_t* queries,
                                          int64_t conflict_budget) {
  const int N = trace.size();
  const int i = sel.i, k = sel.k;
  if (!(1 <= k && k <= i + 1 && i <= N))
    throw std::invalid_argument("characteristic_interpolants: bad SEL");
  const int first = i - k + 1;  // group per frame first..N, then bad group

  sat::Solver solver;
  solver.enable_proof_recording();
  solver.set_conflict_budget(conflict_budget);
  VarMap map(solver);

  CharItpResult res;
  std::vector<StateClause> fi = trace.frame_clauses(i);
  for (int j = first; j <= N; ++j) {
    CnfFormula group;
    group.append(
        instantiate(j <= i ? fi : trace.frame_clauses(j), j, map));
    group.append(encode_tr(ts, j, map));
    res.partition.groups.push_back(std::move(group));
  }
  {
    CnfFormula group;
    MaybeLit bad = encode_bad(ts, N + 1, map, group);
    if (bad.is_const) {
      if (bad.const_val)
        throw std::logic_error("bad cone folded to true in an unsat query");
      group.add({});  // constant-false bad: the empty clause refutes it
    } else {
      group.add({bad.lit});
    }
    res.partition.groups.push_back(std::move(group));
  }

  int g = 0;
  for (const CnfFormula& grp : res.partition.groups) {
    for (const auto& c : grp.clauses) solver.add_clause(c, g);
    ++g;
  }
  res.partition.num_vars = solver.num_vars();

  if (queries) ++*queries;
  sat::SolveStatus st = solver.solve();
  if (st == sat::SolveStatus::budget_exceeded) throw sat::BudgetExceeded{};
  if (st != sat::SolveStatus::unsat)
    throw std::logic_error("interpolation query unexpectedly satisfiable");

  res.proof = solver.proof();
  std::string pd;
  if (!sat::validate_proof(res.proof, &pd))
    throw std::logic_error("invalid resolution proof: " + pd);

  res.over_vars = proof_sequence_interpolants(res.proof, res.partition, store);
  if (validate) {
    std::string vd;
    if (!validate_seq_interpolant(res.over_vars, res.partition, store, queries,
                                  &vd))
      throw std::logic_error("sequence interpolant validation failed: " + vd);
  }

  // Map cut-c interpolants (over latch vars at frame first+c) to state
  // literals; any non-latch or off-frame atom is a contract violation.
  res.itp.first_frame = first + 1;
  for (size_t c = 1; c < res.partition.num_groups(); ++c) {
    int frame = first + static_cast<int>(c);
    FormulaRef f = res.over_vars[c - 1];
    std::vector<uint32_t> atoms;
    store.collect_latches(f, atoms);
    for (uint32_t v : atoms) {
      auto e = map.lookup(v);
      if (!e || e->kind != VarMap::Entry::Kind::latch || e->time != frame)
        throw std::logic_error("interpolant atom escapes its cut boundary");
    }
    res.itp.formulas.push_back(store.remap(f, [&](StateLit l) {
      auto e = map.lookup(state_lit_latch(l));
      return state_lit(e->index, state_lit_negated(l));
    }));
  }
  return res;
}

}  // namespace smc
