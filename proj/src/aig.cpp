#include "smc/aig.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <sstream>

namespace smc {

TransitionSystem::TransitionSystem(uint32_t max_var,
                                   std::vector<uint32_t> inputs,
                                   std::vector<uint32_t> latch_vars,
                                   std::vector<Latch> latches,
                                   std::vector<AndGate> gates, AigLit bad)
    : max_var_(max_var),
      inputs_(std::move(inputs)),
      latch_vars_(std::move(latch_vars)),
      latches_(std::move(latches)),
      gates_(std::move(gates)),
      bad_(bad) {
  info_.assign(max_var_ + 1, VarInfo{VarKind::constant, 0});
  for (size_t i = 0; i < inputs_.size(); ++i)
    info_[inputs_[i]] = VarInfo{VarKind::input, static_cast<uint32_t>(i)};
  for (size_t i = 0; i < latch_vars_.size(); ++i)
    info_[latch_vars_[i]] = VarInfo{VarKind::latch, static_cast<uint32_t>(i)};
  for (size_t i = 0; i < gates_.size(); ++i)
    info_[gates_[i].lhs_var] = VarInfo{VarKind::gate, static_cast<uint32_t>(i)};
}

std::vector<size_t> TransitionSystem::free_init_latches() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < latches_.size(); ++i)
    if (latches_[i].init == LatchInit::free) out.push_back(i);
  return out;
}

bool TransitionSystem::has_free_init() const {
  return std::any_of(latches_.begin(), latches_.end(),
                     [](const Latch& l) { return l.init == LatchInit::free; });
}

void TransitionSystem::eval_gates(uint64_t state, uint64_t inputs,
                                  std::vector<bool>& val) const {
  val.assign(max_var_ + 1, false);
  for (size_t i = 0; i < inputs_.size(); ++i)
    val[inputs_[i]] = (inputs >> i) & 1;
  for (size_t i = 0; i < latch_vars_.size(); ++i)
    val[latch_vars_[i]] = (state >> i) & 1;
  auto lit_val = [&](AigLit l) {
    bool v = l.is_const() ? false : val[l.var()];
    return l.negated() ? !v : v;
  };
  for (const AndGate& g : gates_)
    val[g.lhs_var] = lit_val(g.rhs0) && lit_val(g.rhs1);
}

TransitionSystem::StepResult TransitionSystem::step(uint64_t state,
                                                    uint64_t inputs) const {
  std::vector<bool> val;
  eval_gates(state, inputs, val);
  auto lit_val = [&](AigLit l) {
    bool v = l.is_const() ? false : val[l.var()];
    return l.negated() ? !v : v;
  };
  StepResult r;
  for (size_t i = 0; i < latches_.size(); ++i)
    if (lit_val(latches_[i].next)) r.next_state |= (uint64_t{1} << i);
  r.bad = lit_val(bad_);
  return r;
}

bool TransitionSystem::eval_bad(uint64_t state, uint64_t inputs) const {
  std::vector<bool> val;
  eval_gates(state, inputs, val);
  bool v = bad_.is_const() ? false : val[bad_.var()];
  return bad_.negated() ? !v : v;
}

namespace {

struct LineReader {
  std::string_view text;
  size_t pos = 0;
  int line_no = 0;

  bool next(std::string_view& out) {
    if (pos >= text.size()) return false;
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return true;
  }
};

std::vector<uint64_t> parse_uints(std::string_view s, int line) {
  std::vector<uint64_t> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) break;
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr == s.data() + i)
      throw ParseError("expected unsigned integer", line);
    i = static_cast<size_t>(ptr - s.data());
    out.push_back(v);
  }
  return out;
}

}  // namespace

TransitionSystem parse_aiger(std::string_view text) {
  LineReader rd{text};
  std::string_view line;
  if (!rd.next(line)) throw ParseError("empty file", 0);

  if (line.substr(0, 4) == "aig ")
    throw ParseError("binary 'aig' format not supported, use ASCII 'aag'", 1);
  if (line.substr(0, 4) != "aag ")
    throw ParseError("missing 'aag' magic", 1);

  auto hdr = parse_uints(line.substr(4), 1);
  if (hdr.size() < 5) throw ParseError("short header", 1);
  // aag M I L O A [B [C [J [F]]]]
  uint64_t M = hdr[0], I = hdr[1], L = hdr[2], O = hdr[3], A = hdr[4];
  uint64_t B = hdr.size() > 5 ? hdr[5] : 0;
  if (hdr.size() > 6 && hdr[6] != 0)
    throw ParseError("invariant constraints (C) not supported", 1);
  if (hdr.size() > 7)
    throw ParseError("justice/fairness properties not supported", 1);
  if (O + B == 0) throw ParseError("no property", 1);
  if (O + B > 1)
    throw ParseError("exactly one output/bad property required, got " +
                         std::to_string(O + B),
                     1);
  if (M > (1u << 24)) throw ParseError("circuit too large", 1);

  auto check_lit = [&](uint64_t raw, int ln) {
    if (raw / 2 > M) throw ParseError("literal exceeds max var", ln);
    return AigLit{static_cast<uint32_t>(raw)};
  };

  std::vector<uint32_t> inputs;
  std::vector<bool> defined(M + 1, false);
  defined[0] = true;  // constants

  for (uint64_t i = 0; i < I; ++i) {
    if (!rd.next(line)) throw ParseError("missing input line", rd.line_no + 1);
    auto v = parse_uints(line, rd.line_no);
    if (v.size() != 1) throw ParseError("malformed input line", rd.line_no);
    AigLit lit = check_lit(v[0], rd.line_no);
    if (lit.negated() || lit.is_const())
      throw ParseError("input literal must be positive and non-constant",
                       rd.line_no);
    if (defined[lit.var()]) throw ParseError("redefined variable", rd.line_no);
    defined[lit.var()] = true;
    inputs.push_back(lit.var());
  }

  std::vector<uint32_t> latch_vars;
  std::vector<Latch> latches;
  std::vector<uint64_t> latch_next_raw;
  for (uint64_t i = 0; i < L; ++i) {
    if (!rd.next(line)) throw ParseError("missing latch line", rd.line_no + 1);
    auto v = parse_uints(line, rd.line_no);
    if (v.size() != 2 && v.size() != 3)
      throw ParseError("malformed latch line", rd.line_no);
    AigLit lit = check_lit(v[0], rd.line_no);
    if (lit.negated() || lit.is_const())
      throw ParseError("latch literal must be positive and non-constant",
                       rd.line_no);
    if (defined[lit.var()]) throw ParseError("redefined variable", rd.line_no);
    defined[lit.var()] = true;
    Latch l;
    l.next = check_lit(v[1], rd.line_no);
    if (v.size() == 3) {
      if (v[2] == 0)
        l.init = LatchInit::zero;
      else if (v[2] == 1)
        l.init = LatchInit::one;
      else if (v[2] == v[0])
        l.init = LatchInit::free;
      else
        throw ParseError("latch init must be 0, 1, or the latch literal",
                         rd.line_no);
    }
    latch_vars.push_back(lit.var());
    latches.push_back(l);
    latch_next_raw.push_back(v[1]);
  }

  AigLit bad = AigLit::f();
  for (uint64_t i = 0; i < O + B; ++i) {
    if (!rd.next(line))
      throw ParseError("missing property line", rd.line_no + 1);
    auto v = parse_uints(line, rd.line_no);
    if (v.size() != 1) throw ParseError("malformed property line", rd.line_no);
    bad = check_lit(v[0], rd.line_no);
  }

  std::vector<AndGate> gates;
  for (uint64_t i = 0; i < A; ++i) {
    if (!rd.next(line)) throw ParseError("missing and line", rd.line_no + 1);
    auto v = parse_uints(line, rd.line_no);
    if (v.size() != 3) throw ParseError("malformed and line", rd.line_no);
    AigLit lhs = check_lit(v[0], rd.line_no);
    AndGate g;
    g.rhs0 = check_lit(v[1], rd.line_no);
    g.rhs1 = check_lit(v[2], rd.line_no);
    if (lhs.negated() || lhs.is_const())
      throw ParseError("and lhs must be positive and non-constant",
                       rd.line_no);
    if (defined[lhs.var()]) throw ParseError("redefined variable", rd.line_no);
    if (!defined[g.rhs0.var()] || !defined[g.rhs1.var()])
      throw ParseError("non-topological gate order", rd.line_no);
    g.lhs_var = lhs.var();
    defined[lhs.var()] = true;
    gates.push_back(g);
  }
  // Remaining lines are the symbol table / comments; passed through unused.

  // Latch next-state literals may forward-reference gates; check now.
  for (size_t i = 0; i < latch_next_raw.size(); ++i)
    if (!defined[latch_next_raw[i] / 2])
      throw ParseError("latch next-state references undefined variable " +
                           std::to_string(latch_next_raw[i] / 2),
                       0);
  if (!defined[bad.var()])
    throw ParseError("property references undefined variable", 0);

  return TransitionSystem(static_cast<uint32_t>(M), std::move(inputs),
                          std::move(latch_vars), std::move(latches),
                          std::move(gates), bad);
}

std::string to_aiger_ascii(const TransitionSystem& ts) {
  std::ostringstream os;
  os << "aag " << ts.max_var() << ' ' << ts.num_inputs() << ' '
     << ts.num_latches() << " 0 " << ts.num_gates() << " 1\n";
  for (size_t i = 0; i < ts.num_inputs(); ++i)
    os << 2 * ts.input_var(i) << '\n';
  for (size_t i = 0; i < ts.num_latches(); ++i) {
    const Latch& l = ts.latch(i);
    os << 2 * ts.latch_var(i) << ' ' << l.next.raw;
    switch (l.init) {
      case LatchInit::zero:
        break;  // default, omitted
      case LatchInit::one:
        os << " 1";
        break;
      case LatchInit::free:
        os << ' ' << 2 * ts.latch_var(i);
        break;
    }
    os << '\n';
  }
  os << ts.bad().raw << '\n';
  for (const AndGate& g : ts.gates())
    os << 2 * g.lhs_var << ' ' << g.rhs0.raw << ' ' << g.rhs1.raw << '\n';
  return os.str();
}

bool structurally_equal(const TransitionSystem& a, const TransitionSystem& b) {
  if (a.max_var() != b.max_var() || a.num_inputs() != b.num_inputs() ||
      a.num_latches() != b.num_latches() || a.num_gates() != b.num_gates() ||
      !(a.bad() == b.bad()))
    return false;
  for (size_t i = 0; i < a.num_inputs(); ++i)
    if (a.input_var(i) != b.input_var(i)) return false;
  for (size_t i = 0; i < a.num_latches(); ++i) {
    if (a.latch_var(i) != b.latch_var(i)) return false;
    if (!(a.latch(i).next == b.latch(i).next)) return false;
    if (a.latch(i).init != b.latch(i).init) return false;
  }
  for (size_t i = 0; i < a.num_gates(); ++i) {
    const AndGate &x = a.gates()[i], &y = b.gates()[i];
    if (x.lhs_var != y.lhs_var || !(x.rhs0 == y.rhs0) || !(x.rhs1 == y.rhs1))
      return false;
  }
  return true;
}

}  // namespace smc
