#include "smc/sat.hpp"

#include <algorithm>
#include <cassert>

namespace smc::sat {

namespace {

// Luby restart sequence scaled by base.
uint64_t luby(uint64_t i) {
  uint64_t k = 1;
  while (((uint64_t{1} << k) - 1) < i + 1) ++k;
  while ((uint64_t{1} << (k - 1)) - 1 != i) {
    i = i - ((uint64_t{1} << (k - 1)) - 1);
    k = 1;
    while (((uint64_t{1} << k) - 1) < i + 1) ++k;
  }
  return uint64_t{1} << (k - 1);
}

std::vector<Lit> canonical(std::span<const Lit> lits, bool* taut) {
  std::vector<Lit> out(lits.begin(), lits.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  *taut = false;
  for (size_t i = 0; i + 1 < out.size(); ++i)
    if (out[i + 1] == neg(out[i])) {
      *taut = true;
      break;
    }
  return out;
}

}  // namespace

bool validate_proof(const ResolutionProof& proof, std::string* diag) {
  auto fail = [&](const std::string& m) {
    if (diag) *diag = m;
    return false;
  };
  if (proof.empty_id >= proof.nodes.size()) return fail("empty_id out of range");
  for (uint32_t id = 0; id < proof.nodes.size(); ++id) {
    const ProofNode& n = proof.nodes[id];
    if (n.is_input()) continue;
    if (n.chain_start >= id) return fail("chain start not before node");
    std::vector<Lit> cur = proof.nodes[n.chain_start].lits;
    std::sort(cur.begin(), cur.end());
    for (auto [pivot, ant] : n.chain) {
      if (ant >= id) return fail("antecedent not before node");
      Lit pos = mk_lit(pivot, false), negl = mk_lit(pivot, true);
      bool cur_has_pos = std::binary_search(cur.begin(), cur.end(), pos);
      bool cur_has_neg = std::binary_search(cur.begin(), cur.end(), negl);
      if (cur_has_pos == cur_has_neg)
        return fail("pivot " + std::to_string(pivot) +
                    " not resolvable at node " + std::to_string(id));
      Lit drop_cur = cur_has_pos ? pos : negl;
      Lit drop_ant = neg(drop_cur);
      const ProofNode& a = proof.nodes[ant];
      if (std::find(a.lits.begin(), a.lits.end(), drop_ant) == a.lits.end())
        return fail("antecedent lacks pivot at node " + std::to_string(id));
      std::vector<Lit> merged;
      merged.reserve(cur.size() + a.lits.size());
      for (Lit l : cur)
        if (l != drop_cur) merged.push_back(l);
      for (Lit l : a.lits)
        if (l != drop_ant) merged.push_back(l);
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      cur = std::move(merged);
    }
    std::vector<Lit> want = n.lits;
    std::sort(want.begin(), want.end());
    if (cur != want)
      return fail("resolvent mismatch at node " + std::to_string(id));
  }
  if (!proof.nodes[proof.empty_id].lits.empty())
    return fail("root clause not empty");
  return true;
}

std::string proof_to_text(const ResolutionProof& proof) {
  std::string out;
  auto lits_of = [](const ProofNode& n) {
    std::string t;
    for (Lit l : n.lits) {
      if (sign_of(l)) t += '-';
      t += std::to_string(var_of(l) + 1);
      t += ' ';
    }
    t += '0';
    return t;
  };
  for (uint32_t id = 0; id < proof.nodes.size(); ++id) {
    const ProofNode& n = proof.nodes[id];
    if (n.is_input()) {
      out += "input " + std::to_string(id) + " group " +
             std::to_string(n.group) + " : " + lits_of(n) + "\n";
    } else {
      out += "res " + std::to_string(id) + " : " + lits_of(n) + " <- " +
             std::to_string(n.chain_start);
      for (auto& [pivot, ant] : n.chain)
        out += " (" + std::to_string(pivot + 1) + "," + std::to_string(ant) +
               ")";
      out += "\n";
    }
  }
  out += "empty " + std::to_string(proof.empty_id) + "\n";
  return out;
}

Solver::Solver() = default;

Var Solver::new_var() {
  Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(Lbool::undef);
  polarity_.push_back(false);
  reason_.push_back(cref_undef);
  level_.push_back(0);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

void Solver::enable_proof_recording() {
  assert(clauses_.empty());
  record_proof_ = true;
}

void Solver::attach(CRef c) {
  const Clause& cl = clauses_[c];
  assert(cl.lits.size() >= 2);
  watches_[neg(cl.lits[0])].push_back({c, cl.lits[1]});
  watches_[neg(cl.lits[1])].push_back({c, cl.lits[0]});
}

void Solver::enqueue(Lit l, CRef reason) {
  Var v = var_of(l);
  assert(assigns_[v] == Lbool::undef);
  assigns_[v] = sign_of(l) ? Lbool::f : Lbool::t;
  polarity_[v] = !sign_of(l);
  reason_[v] = reason;
  level_[v] = static_cast<int>(trail_lim_.size());
  trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    std::vector<Watch>& ws = watches_[p];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watch w = ws[i];
      if (value(w.blocker) == Lbool::t) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref];
      if (c.deleted) {
        ++i;
        continue;
      }
      // Make sure the false literal is lits[1].
      Lit false_lit = neg(p);
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      assert(c.lits[1] == false_lit);
      Lit first = c.lits[0];
      if (value(first) == Lbool::t) {
        ws[j++] = {w.cref, first};
        ++i;
        continue;
      }
      bool found = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != Lbool::f) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[neg(c.lits[1])].push_back({w.cref, first});
          found = true;
          break;
        }
      }
      if (found) {
        ++i;
        continue;
      }
      // Unit or conflicting.
      ws[j++] = {w.cref, first};
      ++i;
      if (value(first) == Lbool::f) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return cref_undef;
}

bool Solver::add_clause(std::span<const Lit> lits, int group) {
  assert(trail_lim_.empty());
  if (!ok_) return false;
  bool taut = false;
  std::vector<Lit> c = canonical(lits, &taut);
  if (taut) return true;

  uint32_t pid = 0;
  if (record_proof_) {
    pid = static_cast<uint32_t>(proof_.nodes.size());
    ProofNode n;
    n.lits = c;
    n.group = group < 0 ? 0 : group;
    proof_.nodes.push_back(std::move(n));
  }

  // Level-0 handling: drop satisfied clauses, detect unit/empty.
  size_t n_false = 0;
  for (Lit l : c) {
    Lbool v = value(l);
    if (v == Lbool::t) return true;
    if (v == Lbool::f) ++n_false;
  }
  if (c.empty() || n_false == c.size()) {
    ok_ = false;
    if (record_proof_) {
      if (c.empty()) {
        empty_proof_id_ = pid;
      } else {
        // Resolve every literal with its level-0 unit derivation.
        ProofNode n;
        n.group = -1;
        n.chain_start = pid;
        for (Lit l : c) n.chain.push_back({var_of(l), level0_unit_id(var_of(l))});
        empty_proof_id_ = static_cast<uint32_t>(proof_.nodes.size());
        proof_.nodes.push_back(std::move(n));
      }
      proof_.empty_id = empty_proof_id_;
    }
    return false;
  }

  // Move non-false literals to the front.
  std::vector<Lit> ordered;
  ordered.reserve(c.size());
  for (Lit l : c)
    if (value(l) != Lbool::f) ordered.push_back(l);
  for (Lit l : c)
    if (value(l) == Lbool::f) ordered.push_back(l);

  CRef cref = static_cast<CRef>(clauses_.size());
  Clause cl;
  cl.lits = std::move(ordered);
  cl.proof_id = pid;
  clauses_.push_back(std::move(cl));

  if (clauses_[cref].lits.size() == 1 || n_false + 1 == c.size()) {
    // Unit under the level-0 assignment.
    if (clauses_[cref].lits.size() >= 2) attach(cref);
    enqueue(clauses_[cref].lits[0], cref);
    CRef confl = propagate();
    if (confl != cref_undef) {
      if (record_proof_) record_empty_from_conflict(confl);
      ok_ = false;
      return false;
    }
    return true;
  }
  attach(cref);
  return true;
}

// Derived unit proof node for a variable assigned at level 0; memoized via
// a map from var to node id stored in level0_unit_ids_.
uint32_t Solver::level0_unit_id(Var v) {
  assert(assigns_[v] != Lbool::undef && level_[v] == 0);
  if (level0_unit_ids_.size() < assigns_.size())
    level0_unit_ids_.resize(assigns_.size(), UINT32_MAX);
  if (level0_unit_ids_[v] != UINT32_MAX) return level0_unit_ids_[v];
  CRef r = reason_[v];
  assert(r != cref_undef);
  const Clause& rc = clauses_[r];
  Lit self = mk_lit(v, assigns_[v] == Lbool::f);
  if (rc.lits.size() == 1) {
    level0_unit_ids_[v] = rc.proof_id;
    return rc.proof_id;
  }
  ProofNode n;
  n.group = -1;
  n.chain_start = rc.proof_id;
  for (Lit l : rc.lits) {
    if (l == self) continue;
    n.chain.push_back({var_of(l), level0_unit_id(var_of(l))});
  }
  n.lits = {self};
  uint32_t id = static_cast<uint32_t>(proof_.nodes.size());
  proof_.nodes.push_back(std::move(n));
  level0_unit_ids_[v] = id;
  return id;
}

void Solver::record_empty_from_conflict(CRef confl) {
  const Clause& c = clauses_[confl];
  ProofNode n;
  n.group = -1;
  n.chain_start = c.proof_id;
  for (Lit l : c.lits) n.chain.push_back({var_of(l), level0_unit_id(var_of(l))});
  empty_proof_id_ = static_cast<uint32_t>(proof_.nodes.size());
  proof_.nodes.push_back(std::move(n));
  proof_.empty_id = empty_proof_id_;
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel,
                     uint32_t& out_proof_id) {
  out_learnt.clear();
  out_learnt.push_back(lit_undef);  // slot for the asserting literal
  int path_c = 0;
  Lit p = lit_undef;
  size_t index = trail_.size();

  uint32_t chain_start = 0;
  std::vector<std::pair<Var, uint32_t>> chain;
  if (record_proof_) chain_start = clauses_[confl].proof_id;

  CRef cur = confl;
  do {
    Clause& c = clauses_[cur];
    if (c.learnt) bump_clause(c);
    if (record_proof_ && p != lit_undef)
      chain.push_back({var_of(p), c.proof_id});
    for (Lit q : c.lits) {
      if (q == p) continue;
      Var v = var_of(q);
      if (!seen_[v]) {
        if (level_[v] > 0) {
          seen_[v] = 1;
          bump_var(v);
          if (level_[v] >= static_cast<int>(trail_lim_.size()))
            ++path_c;
          else
            out_learnt.push_back(q);
        } else if (record_proof_) {
          chain.push_back({v, level0_unit_id(v)});
        }
      }
    }
    // Next literal to expand.
    while (!seen_[var_of(trail_[index - 1])]) --index;
    p = trail_[--index];
    cur = reason_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path_c;
  } while (path_c > 0);
  out_learnt[0] = neg(p);

  // Backtrack level: second-highest level in the learnt clause.
  out_btlevel = 0;
  if (out_learnt.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < out_learnt.size(); ++i)
      if (level_[var_of(out_learnt[i])] > level_[var_of(out_learnt[max_i])])
        max_i = i;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level_[var_of(out_learnt[1])];
  }
  for (Lit l : out_learnt) seen_[var_of(l)] = 0;

  out_proof_id = 0;
  if (record_proof_) {
    ProofNode n;
    n.group = -1;
    n.chain_start = chain_start;
    n.chain = std::move(chain);
    n.lits = out_learnt;
    out_proof_id = static_cast<uint32_t>(proof_.nodes.size());
    proof_.nodes.push_back(std::move(n));
  }
}

void Solver::analyze_final(Lit p) {
  core_.clear();
  core_.push_back(neg(p));
  if (trail_lim_.empty()) return;
  seen_[var_of(p)] = 1;
  for (size_t i = trail_.size(); i-- > trail_lim_[0];) {
    Var v = var_of(trail_[i]);
    if (!seen_[v]) continue;
    if (reason_[v] == cref_undef) {
      // Assumption decision.
      core_.push_back(trail_[i]);
    } else {
      for (Lit l : clauses_[reason_[v]].lits)
        if (var_of(l) != v && level_[var_of(l)] > 0) seen_[var_of(l)] = 1;
    }
    seen_[v] = 0;
  }
  seen_[var_of(p)] = 0;
}

void Solver::cancel_until(int lvl) {
  if (static_cast<int>(trail_lim_.size()) <= lvl) return;
  for (size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    Var v = var_of(trail_[i]);
    assigns_[v] = Lbool::undef;
    reason_[v] = cref_undef;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

void Solver::bump_var(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<size_t>(heap_pos_[v]));
}

void Solver::bump_clause(Clause& c) {
  c.act += cla_inc_;
  if (c.act > 1e20) {
    for (CRef r : learnts_)
      if (!clauses_[r].deleted) clauses_[r].act *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void Solver::decay_activities() {
  var_inc_ /= 0.95;
  cla_inc_ /= 0.999;
}

void Solver::reduce_db() {
  if (record_proof_) return;  // recorded derivations may be referenced later
  std::vector<CRef> live;
  for (CRef r : learnts_)
    if (!clauses_[r].deleted) live.push_back(r);
  std::sort(live.begin(), live.end(), [&](CRef a, CRef b) {
    return clauses_[a].act < clauses_[b].act;
  });
  size_t limit = live.size() / 2;
  size_t removed = 0;
  for (CRef r : live) {
    if (removed >= limit) break;
    Clause& c = clauses_[r];
    bool locked = false;
    Lit l0 = c.lits[0];
    if (value(l0) == Lbool::t && reason_[var_of(l0)] == r) locked = true;
    if (locked || c.lits.size() <= 2) continue;
    c.deleted = true;
    ++removed;
  }
  learnts_.erase(std::remove_if(learnts_.begin(), learnts_.end(),
                                [&](CRef r) { return clauses_[r].deleted; }),
                 learnts_.end());
}

bool Solver::heap_less(Var a, Var b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  return a < b;
}

void Solver::ensure_heap(Var v) {
  if (heap_pos_[v] < 0) heap_insert(v);
}

void Solver::heap_insert(Var v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int>(i);
}

void Solver::heap_down(size_t i) {
  Var v = heap_[i];
  size_t n = heap_.size();
  while (true) {
    size_t l = 2 * i + 1, r = 2 * i + 2, best = i;
    Var bv = v;
    if (l < n && heap_less(heap_[l], bv)) {
      best = l;
      bv = heap_[l];
    }
    if (r < n && heap_less(heap_[r], bv)) {
      best = r;
      bv = heap_[r];
    }
    if (best == i) break;
    heap_[i] = heap_[best];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = best;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int>(i);
}

Var Solver::heap_pop() {
  Var v = heap_[0];
  heap_pos_[v] = -1;
  if (heap_.size() > 1) {
    heap_[0] = heap_.back();
    heap_pos_[heap_[0]] = 0;
    heap_.pop_back();
    heap_down(0);
  } else {
    heap_.pop_back();
  }
  return v;
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assigns_[v] == Lbool::undef)
      return mk_lit(v, !polarity_[v]);
  }
  return lit_undef;
}

Lbool Solver::model_value(Lit l) const {
  Lbool v = model_.size() > var_of(l) ? model_[var_of(l)] : Lbool::undef;
  if (v == Lbool::undef) return Lbool::undef;
  return sign_of(l) ? (v == Lbool::t ? Lbool::f : Lbool::t) : v;
}

SolveStatus Solver::solve(std::span<const Lit> assumptions) {
  ++num_solves_;
  core_.clear();
  if (!ok_) return SolveStatus::unsat;
  assumptions_.assign(assumptions.begin(), assumptions.end());
  cancel_until(0);

  if (propagate() != cref_undef) {
    // Can only happen if a conflict was latent at level 0.
    ok_ = false;
    return SolveStatus::unsat;
  }

  uint64_t conflicts_this = 0;
  uint64_t restart_seq = 0;
  uint64_t restart_limit = luby(restart_seq) * 100;
  uint64_t conflicts_since_restart = 0;
  uint64_t learnt_cap = 4000 + clauses_.size() / 2;

  std::vector<Lit> learnt;
  while (true) {
    CRef confl = propagate();
    if (confl != cref_undef) {
      ++conflicts_total_;
      ++conflicts_this;
      ++conflicts_since_restart;
      if (trail_lim_.empty()) {
        if (record_proof_) record_empty_from_conflict(confl);
        ok_ = false;
        return SolveStatus::unsat;
      }
      int btlevel = 0;
      uint32_t pid = 0;
      analyze(confl, learnt, btlevel, pid);
      cancel_until(btlevel);
      if (learnt.size() == 1) {
        if (btlevel != 0) cancel_until(0);
        CRef cr = static_cast<CRef>(clauses_.size());
        Clause cl;
        cl.lits = learnt;
        cl.learnt = true;
        cl.proof_id = pid;
        clauses_.push_back(std::move(cl));
        enqueue(learnt[0], cr);
      } else {
        CRef cr = static_cast<CRef>(clauses_.size());
        Clause cl;
        cl.lits = learnt;
        cl.learnt = true;
        cl.proof_id = pid;
        clauses_.push_back(std::move(cl));
        learnts_.push_back(cr);
        attach(cr);
        enqueue(learnt[0], cr);
      }
      decay_activities();
      if (conflict_budget_ >= 0 &&
          conflicts_this > static_cast<uint64_t>(conflict_budget_)) {
        cancel_until(0);
        return SolveStatus::budget_exceeded;
      }
      if (conflicts_since_restart >= restart_limit) {
        conflicts_since_restart = 0;
        restart_limit = luby(++restart_seq) * 100;
        cancel_until(0);
      }
      if (learnts_.size() > learnt_cap) {
        reduce_db();
        learnt_cap += learnt_cap / 2;
      }
    } else {
      if (trail_lim_.size() < assumptions_.size()) {
        Lit p = assumptions_[trail_lim_.size()];
        if (value(p) == Lbool::t) {
          trail_lim_.push_back(trail_.size());
        } else if (value(p) == Lbool::f) {
          analyze_final(neg(p));
          cancel_until(0);
          return SolveStatus::unsat;
        } else {
          trail_lim_.push_back(trail_.size());
          enqueue(p, cref_undef);
        }
        continue;
      }
      Lit next = pick_branch();
      if (next == lit_undef) {
        model_ = assigns_;
        cancel_until(0);
        return SolveStatus::sat;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, cref_undef);
    }
  }
}

}  // namespace smc::sat
