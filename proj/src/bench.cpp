#include "smc/bench.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>

namespace smc {

AigLit AigBuilder::add_input() {
  assert(latch_vars_.empty() && gates_.empty());
  uint32_t v = ++next_var_;
  inputs_.push_back(v);
  return AigLit::of_var(v);
}

AigLit AigBuilder::add_latch(LatchInit init) {
  assert(gates_.empty());
  uint32_t v = ++next_var_;
  latch_vars_.push_back(v);
  latches_.push_back(Latch{AigLit::f(), init});
  return AigLit::of_var(v);
}

void AigBuilder::set_next(AigLit latch, AigLit next) {
  for (size_t i = 0; i < latch_vars_.size(); ++i)
    if (latch_vars_[i] == latch.var() && !latch.negated()) {
      latches_[i].next = next;
      return;
    }
  throw std::invalid_argument("set_next: not a latch literal");
}

void AigBuilder::set_bad(AigLit bad) { bad_ = bad; }

AigLit AigBuilder::land(AigLit a, AigLit b) {
  if (a.raw > b.raw) std::swap(a, b);
  if (a == AigLit::f() || b == AigLit::f()) return AigLit::f();
  if (a == AigLit::t()) return b;
  if (b == AigLit::t()) return a;
  if (a == b) return a;
  if (a == !b) return AigLit::f();
  uint32_t v = ++next_var_;
  gates_.push_back(AndGate{v, a, b});
  return AigLit::of_var(v);
}

AigLit AigBuilder::lxor(AigLit a, AigLit b) {
  return !land(!land(a, !b), !land(!a, b));
}

AigLit AigBuilder::mux(AigLit sel, AigLit then_lit, AigLit else_lit) {
  return lor(land(sel, then_lit), land(!sel, else_lit));
}

AigLit AigBuilder::land_all(const std::vector<AigLit>& lits) {
  AigLit acc = AigLit::t();
  for (AigLit l : lits) acc = land(acc, l);
  return acc;
}

AigLit AigBuilder::lor_all(std::vector<AigLit> lits) {
  AigLit acc = AigLit::f();
  for (AigLit l : lits) acc = lor(acc, l);
  return acc;
}

AigLit AigBuilder::eq_const(const std::vector<AigLit>& bits, uint64_t value) {
  if (bits.size() < 64 && value >> bits.size()) return AigLit::f();
  AigLit acc = AigLit::t();
  for (size_t i = 0; i < bits.size(); ++i)
    acc = land(acc, ((value >> i) & 1) ? bits[i] : !bits[i]);
  return acc;
}

AigLit AigBuilder::geq_const(const std::vector<AigLit>& bits, uint64_t value) {
  if (bits.size() < 64 && value >> bits.size()) return AigLit::f();
  // From the least significant bit up: geq of the suffix headed by bit i.
  AigLit acc = AigLit::t();
  for (size_t i = 0; i < bits.size(); ++i) {
    bool v = (value >> i) & 1;
    acc = v ? land(bits[i], acc) : lor(bits[i], acc);
  }
  return acc;
}

std::vector<AigLit> AigBuilder::increment(const std::vector<AigLit>& bits) {
  std::vector<AigLit> out(bits.size());
  AigLit carry = AigLit::t();
  for (size_t i = 0; i < bits.size(); ++i) {
    out[i] = lxor(bits[i], carry);
    carry = land(bits[i], carry);
  }
  return out;
}

TransitionSystem AigBuilder::build() {
  return TransitionSystem(next_var_, inputs_, latch_vars_, latches_, gates_,
                          bad_);
}

TransitionSystem gen_counter(int width, uint64_t reset_at,
                             uint64_t bad_threshold) {
  if (width < 1 || width > 32) throw std::invalid_argument("counter width");
  if (width < 64 && (reset_at >> width) != 0)
    throw std::invalid_argument("reset_at exceeds the register range");
  AigBuilder b;
  std::vector<AigLit> c;
  for (int i = 0; i < width; ++i) c.push_back(b.add_latch(LatchInit::zero));
  AigLit at_reset = b.eq_const(c, reset_at);
  std::vector<AigLit> inc = b.increment(c);
  for (int i = 0; i < width; ++i) b.set_next(c[i], b.land(!at_reset, inc[i]));
  b.set_bad(b.geq_const(c, bad_threshold));
  return b.build();
}

TransitionSystem gen_shift(int width) {
  if (width < 1) throw std::invalid_argument("shift width");
  AigBuilder b;
  if (width == 1) {
    AigLit z = b.add_latch(LatchInit::zero);
    b.set_next(z, z);
    b.set_bad(z);
    return b.build();
  }
  // Serial add/shift comparison. A position counter c starts at `start`
  // and saturates at `width`; the pending-mismatch flag t decays to 0
  // after one step; the sticky accept flag z latches a mismatch seen at
  // the trigger position and Bad observes z one position later. A
  // violation therefore needs a width-long spurious history (the counter
  // value B-k at the window head), so the property is width-inductive
  // and not less, while the genuine invariant (z and t stay low) is flat.
  const uint64_t W = static_cast<uint64_t>(width);
  const uint64_t start = width >= 3 ? W - 3 : 0;
  const uint64_t trigger_at = width >= 3 ? start + 1 : 0;
  const uint64_t bad_at = width >= 3 ? start + 2 : 1;
  int m = 1;
  while ((uint64_t{1} << m) < W + 1) ++m;
  std::vector<AigLit> c;
  for (int i = 0; i < m; ++i)
    c.push_back(b.add_latch(((start >> i) & 1) ? LatchInit::one
                                               : LatchInit::zero));
  // For width >= 3 the decayed flag may start anywhere: the one-step
  // refutation of Bad then has to go through the counter, not the flag.
  AigLit t = b.add_latch(width >= 3 ? LatchInit::free : LatchInit::zero);
  AigLit z = b.add_latch(LatchInit::zero);

  AigLit saturated = b.geq_const(c, W);
  std::vector<AigLit> inc = b.increment(c);
  for (int i = 0; i < m; ++i) {
    bool wbit = (W >> i) & 1;
    b.set_next(c[i], b.mux(saturated, wbit ? AigLit::t() : AigLit::f(),
                           inc[i]));
  }
  b.set_next(t, AigLit::f());
  AigLit trigger = b.land(t, b.eq_const(c, trigger_at));
  b.set_next(z, b.lor(z, trigger));
  b.set_bad(b.land(z, b.eq_const(c, bad_at)));
  return b.build();
}

TransitionSystem gen_random_aig(uint64_t seed, int num_latches, int num_gates,
                                int num_inputs) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  AigBuilder b;
  std::vector<AigLit> pool;
  for (int i = 0; i < num_inputs; ++i) pool.push_back(b.add_input());
  std::vector<AigLit> latches;
  for (int i = 0; i < num_latches; ++i) {
    latches.push_back(b.add_latch(LatchInit::zero));
    pool.push_back(latches.back());
  }
  auto pick = [&](bool allow_neg = true) {
    AigLit l = pool[rng() % pool.size()];
    if (allow_neg && (rng() & 1)) l = !l;
    return l;
  };
  for (int i = 0; i < num_gates; ++i) {
    AigLit g = b.land(pick(), pick());
    if (!g.is_const()) pool.push_back(g);
  }
  for (AigLit l : latches) b.set_next(l, pick());
  // Bad is a small cube over latch literals, keeping a healthy share of
  // safe instances in the family.
  int cube = 2 + static_cast<int>(rng() % 2);
  std::vector<AigLit> lits;
  for (int i = 0; i < cube && i < num_latches; ++i) {
    AigLit l = latches[rng() % latches.size()];
    if (rng() & 1) l = !l;
    lits.push_back(l);
  }
  b.set_bad(num_latches > 0 ? b.land_all(lits) : pick());
  return b.build();
}

OracleResult bfs_reachable(const TransitionSystem& ts, int max_latches,
                           int max_inputs) {
  if (static_cast<int>(ts.num_latches()) > max_latches)
    throw std::invalid_argument("oracle: too many latches");
  if (static_cast<int>(ts.num_inputs()) > max_inputs)
    throw std::invalid_argument("oracle: too many inputs");

  const size_t L = ts.num_latches();
  const uint64_t num_inputs_combos = uint64_t{1} << ts.num_inputs();
  std::vector<int32_t> dist(uint64_t{1} << L, -1);

  uint64_t base = 0;
  for (uint32_t i = 0; i < L; ++i)
    if (ts.latch(i).init == LatchInit::one) base |= uint64_t{1} << i;
  std::vector<size_t> free = ts.free_init_latches();

  OracleResult res;
  std::queue<uint64_t> frontier;
  auto push_init = [&](uint64_t s) {
    if (dist[s] < 0) {
      dist[s] = 0;
      frontier.push(s);
    }
  };
  for (uint64_t mask = 0; mask < (uint64_t{1} << free.size()); ++mask) {
    uint64_t s = base;
    for (size_t j = 0; j < free.size(); ++j)
      if ((mask >> j) & 1) s |= uint64_t{1} << free[j];
    push_init(s);
  }

  int first_bad = -1;
  while (!frontier.empty()) {
    uint64_t s = frontier.front();
    frontier.pop();
    for (uint64_t in = 0; in < num_inputs_combos; ++in) {
      if (first_bad < 0 && ts.eval_bad(s, in)) first_bad = dist[s];
      uint64_t nxt = ts.step(s, in).next_state;
      if (dist[nxt] < 0) {
        dist[nxt] = dist[s] + 1;
        frontier.push(nxt);
      }
    }
    if (first_bad == dist[s]) break;  // earliest layer found
  }
  // Finish collecting reachable states (run to closure when safe).
  if (first_bad >= 0) {
    res.safe = false;
    res.shortest_cex = first_bad;
  }
  while (!frontier.empty()) {
    uint64_t s = frontier.front();
    frontier.pop();
    for (uint64_t in = 0; in < num_inputs_combos; ++in) {
      uint64_t nxt = ts.step(s, in).next_state;
      if (dist[nxt] < 0) {
        dist[nxt] = dist[s] + 1;
        frontier.push(nxt);
      }
    }
  }
  for (uint64_t s = 0; s < dist.size(); ++s)
    if (dist[s] >= 0) res.reachable.push_back(s);
  res.num_reachable = res.reachable.size();
  return res;
}

}  // namespace smc
