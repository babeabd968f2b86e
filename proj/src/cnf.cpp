#include "smc/cnf.hpp"

#include <cassert>
#include <ostream>
#include <stdexcept>

#include "smc/trace.hpp"

namespace smc {

sat::Var VarMap::record(Entry e) {
  sat::Var v = solver_.new_var();
  info_.emplace(v, e);
  return v;
}

sat::Var VarMap::latch_at(uint32_t latch, int t) {
  auto key = std::make_pair(latch, t);
  auto it = latch_vars_.find(key);
  if (it != latch_vars_.end()) return it->second;
  sat::Var v = record(Entry{Entry::Kind::latch, latch, t});
  latch_vars_.emplace(key, v);
  return v;
}

sat::Var VarMap::input_at(uint32_t input, int t) {
  auto key = std::make_pair(input, t);
  auto it = input_vars_.find(key);
  if (it != input_vars_.end()) return it->second;
  sat::Var v = record(Entry{Entry::Kind::input, input, t});
  input_vars_.emplace(key, v);
  return v;
}

sat::Var VarMap::fresh_aux(int t) {
  return record(Entry{Entry::Kind::aux, 0, t});
}

std::optional<VarMap::Entry> VarMap::lookup(sat::Var v) const {
  auto it = info_.find(v);
  if (it == info_.end()) return std::nullopt;
  return it->second;
}

MaybeLit ConeEncoder::encode(AigLit root) {
  if (root.is_const())
    return MaybeLit::constant(root.const_value());
  VarInfo vi = ts_.var_info(root.var());
  MaybeLit base;
  switch (vi.kind) {
    case VarKind::input:
      base = MaybeLit::of(sat::mk_lit(map_.input_at(vi.index, t_)));
      break;
    case VarKind::latch:
      base = MaybeLit::of(sat::mk_lit(map_.latch_at(vi.index, t_)));
      break;
    case VarKind::gate: {
      auto it = memo_.find(root.var());
      if (it != memo_.end()) {
        base = it->second;
        break;
      }
      const AndGate& g = ts_.gates()[vi.index];
      MaybeLit a = encode(g.rhs0);
      MaybeLit b = encode(g.rhs1);
      if ((a.is_const && !a.const_val) || (b.is_const && !b.const_val)) {
        base = MaybeLit::constant(false);
      } else if (a.is_const) {
        base = b;
      } else if (b.is_const) {
        base = a;
      } else if (a.lit == b.lit) {
        base = a;
      } else if (a.lit == sat::neg(b.lit)) {
        base = MaybeLit::constant(false);
      } else {
        sat::Var gv = map_.fresh_aux(t_);
        sat::Lit gl = sat::mk_lit(gv);
        out_.add({sat::neg(gl), a.lit});
        out_.add({sat::neg(gl), b.lit});
        out_.add({gl, sat::neg(a.lit), sat::neg(b.lit)});
        base = MaybeLit::of(gl);
      }
      memo_.emplace(root.var(), base);
      break;
    }
    case VarKind::constant:
      base = MaybeLit::constant(false);
      break;
  }
  return root.negated() ? base.negated() : base;
}

CnfFormula encode_tr(const TransitionSystem& ts, int t, VarMap& map) {
  CnfFormula out;
  ConeEncoder enc(ts, map, t, out);
  for (size_t i = 0; i < ts.num_latches(); ++i) {
    MaybeLit next = enc.encode(ts.latch(i).next);
    sat::Lit nv = sat::mk_lit(map.latch_at(static_cast<uint32_t>(i), t + 1));
    if (next.is_const) {
      out.add({next.const_val ? nv : sat::neg(nv)});
    } else {
      out.add({sat::neg(nv), next.lit});
      out.add({nv, sat::neg(next.lit)});
    }
  }
  return out;
}

MaybeLit encode_bad(const TransitionSystem& ts, int t, VarMap& map,
                    CnfFormula& out) {
  ConeEncoder enc(ts, map, t, out);
  return enc.encode(ts.bad());
}

CnfFormula encode_init(const TransitionSystem& ts, int t, VarMap& map) {
  CnfFormula out;
  for (size_t i = 0; i < ts.num_latches(); ++i) {
    switch (ts.latch(i).init) {
      case LatchInit::zero:
        out.add({sat::mk_lit(map.latch_at(static_cast<uint32_t>(i), t), true)});
        break;
      case LatchInit::one:
        out.add({sat::mk_lit(map.latch_at(static_cast<uint32_t>(i), t))});
        break;
      case LatchInit::free:
        break;
    }
  }
  return out;
}

CnfFormula instantiate(std::span<const StateClause> clauses, int t,
                       VarMap& map) {
  CnfFormula out;
  for (const StateClause& c : clauses) {
    std::vector<sat::Lit> lits;
    lits.reserve(c.size());
    for (StateLit l : c) lits.push_back(map.lit_at(l, t));
    out.add(std::move(lits));
  }
  return out;
}

CnfFormula unroll(const TransitionSystem& ts,
                  std::span<const std::vector<StateClause>> frames, int M,
                  int N, VarMap& map) {
  if (M > N) throw std::invalid_argument("unroll: M > N");
  CnfFormula out;
  // Reserve the boundary state variables even when the range is empty.
  for (size_t i = 0; i < ts.num_latches(); ++i) {
    map.latch_at(static_cast<uint32_t>(i), M);
    map.latch_at(static_cast<uint32_t>(i), N);
  }
  for (int t = M; t < N; ++t) {
    if (t < 0 || static_cast<size_t>(t) >= frames.size())
      throw std::out_of_range("unroll: missing frame formula");
    out.append(instantiate(frames[t], t, map));
    out.append(encode_tr(ts, t, map));
  }
  return out;
}

CnfFormula characteristic_formula(const InductiveTrace& trace,
                                  const TransitionSystem& ts, int i, int k,
                                  VarMap& map) {
  int N = trace.size();
  if (!(1 <= k && k <= i + 1 && i <= N))
    throw std::invalid_argument("characteristic_formula: bad (i, k)");
  CnfFormula out;
  std::vector<StateClause> fi = trace.frame_clauses(i);
  for (int t = i + 1 - k; t <= i; ++t) {
    out.append(instantiate(fi, t, map));
    out.append(encode_tr(ts, t, map));
  }
  for (int t = i + 1; t <= N; ++t) {
    out.append(instantiate(trace.frame_clauses(t), t, map));
    out.append(encode_tr(ts, t, map));
  }
  return out;
}

namespace {

MaybeLit encode_formula_rec(const FormulaStore& store, FormulaRef f, int t,
                            VarMap& map, CnfFormula& out,
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
      res = MaybeLit::of(map.lit_at(n.slit, t));
      break;
    case FormulaStore::Kind::land:
    case FormulaStore::Kind::lor: {
      bool is_and = n.kind == FormulaStore::Kind::land;
      std::vector<sat::Lit> kids;
      bool folded = false;
      for (FormulaRef c : n.children) {
        MaybeLit m = encode_formula_rec(store, c, t, map, out, memo);
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
      sat::Lit g = sat::mk_lit(map.fresh_aux(t));
      if (is_and) {
        std::vector<sat::Lit> big{g};
        for (sat::Lit l : kids) {
          out.add({sat::neg(g), l});
          big.push_back(sat::neg(l));
        }
        out.add(std::move(big));
      } else {
        std::vector<sat::Lit> big{sat::neg(g)};
        for (sat::Lit l : kids) {
          out.add({g, sat::neg(l)});
          big.push_back(l);
        }
        out.add(std::move(big));
      }
      res = MaybeLit::of(g);
      break;
    }
  }
  memo.emplace(f, res);
  return res;
}

}  // namespace

MaybeLit encode_formula(const FormulaStore& store, FormulaRef f, int t,
                        VarMap& map, CnfFormula& out) {
  std::map<FormulaRef, MaybeLit> memo;
  return encode_formula_rec(store, f, t, map, out, memo);
}

void dump_dimacs(const CnfFormula& cnf, const VarMap& map, size_t num_vars,
                 std::ostream& os) {
  os << "c solver variable legend\n";
  for (size_t v = 0; v < num_vars; ++v) {
    auto e = map.lookup(static_cast<sat::Var>(v));
    if (!e) continue;
    os << "c " << (v + 1) << " = ";
    switch (e->kind) {
      case VarMap::Entry::Kind::latch:
        os << "latch " << e->index;
        break;
      case VarMap::Entry::Kind::input:
        os << "input " << e->index;
        break;
      case VarMap::Entry::Kind::aux:
        os << "aux";
        break;
    }
    os << " @ frame " << e->time << "\n";
  }
  os << "p cnf " << num_vars << ' ' << cnf.clauses.size() << "\n";
  for (const auto& c : cnf.clauses) {
    for (sat::Lit l : c)
      os << (sat::sign_of(l) ? "-" : "") << (sat::var_of(l) + 1) << ' ';
    os << "0\n";
  }
}

}  // namespace smc
