#include "smc/formula.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace smc {

StateClause canonical_clause(StateClause c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

bool clause_subsumes(const StateClause& a, const StateClause& b) {
  // a subsumes b iff a is a subset of b; both canonical.
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

StateClause negate_cube(const StateCube& cube) {
  StateClause out;
  out.reserve(cube.size());
  for (StateLit l : cube) out.push_back(state_lit_neg(l));
  return canonical_clause(std::move(out));
}

std::string clause_to_string(const StateClause& c) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) os << " | ";
    if (state_lit_negated(c[i])) os << '!';
    os << 'x' << state_lit_latch(c[i]);
  }
  os << ')';
  return os.str();
}

FormulaStore::FormulaStore() {
  nodes_.push_back(Node{Kind::konst, true, 0, {}});
  nodes_.push_back(Node{Kind::konst, false, 0, {}});
}

FormulaRef FormulaStore::intern(Node n) {
  std::string key;
  key.push_back(static_cast<char>(n.kind));
  if (n.kind == Kind::lit) {
    key += std::to_string(n.slit);
  } else {
    for (FormulaRef c : n.children) {
      key += std::to_string(c);
      key.push_back(',');
    }
  }
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  FormulaRef id = static_cast<FormulaRef>(nodes_.size());
  nodes_.push_back(std::move(n));
  index_.emplace(std::move(key), id);
  return id;
}

FormulaRef FormulaStore::lit(StateLit l) {
  return intern(Node{Kind::lit, false, l, {}});
}

FormulaRef FormulaStore::mk_and(std::vector<FormulaRef> children) {
  std::vector<FormulaRef> flat;
  for (FormulaRef c : children) {
    if (c == bottom()) return bottom();
    if (c == top()) continue;
    if (nodes_[c].kind == Kind::land) {
      for (FormulaRef g : nodes_[c].children) flat.push_back(g);
    } else {
      flat.push_back(c);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return top();
  if (flat.size() == 1) return flat[0];
  return intern(Node{Kind::land, false, 0, std::move(flat)});
}

FormulaRef FormulaStore::mk_or(std::vector<FormulaRef> children) {
  std::vector<FormulaRef> flat;
  for (FormulaRef c : children) {
    if (c == top()) return top();
    if (c == bottom()) continue;
    if (nodes_[c].kind == Kind::lor) {
      for (FormulaRef g : nodes_[c].children) flat.push_back(g);
    } else {
      flat.push_back(c);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return bottom();
  if (flat.size() == 1) return flat[0];
  return intern(Node{Kind::lor, false, 0, std::move(flat)});
}

FormulaRef FormulaStore::negate(FormulaRef f) {
  const Node& n = nodes_[f];
  switch (n.kind) {
    case Kind::konst:
      return n.value ? bottom() : top();
    case Kind::lit:
      return lit(state_lit_neg(n.slit));
    case Kind::land: {
      std::vector<FormulaRef> ch;
      ch.reserve(n.children.size());
      for (FormulaRef c : n.children) ch.push_back(negate(c));
      return mk_or(std::move(ch));
    }
    case Kind::lor: {
      std::vector<FormulaRef> ch;
      ch.reserve(n.children.size());
      for (FormulaRef c : n.children) ch.push_back(negate(c));
      return mk_and(std::move(ch));
    }
  }
  return bottom();
}

FormulaRef FormulaStore::from_clauses(std::span<const StateClause> clauses) {
  std::vector<FormulaRef> cs;
  cs.reserve(clauses.size());
  for (const StateClause& c : clauses) {
    std::vector<FormulaRef> ls;
    ls.reserve(c.size());
    for (StateLit l : c) ls.push_back(lit(l));
    cs.push_back(mk_or(std::move(ls)));
  }
  return mk_and(std::move(cs));
}

FormulaRef FormulaStore::from_cube(const StateCube& cube) {
  std::vector<FormulaRef> ls;
  ls.reserve(cube.size());
  for (StateLit l : cube) ls.push_back(lit(l));
  return mk_and(std::move(ls));
}

bool FormulaStore::eval(FormulaRef f, uint64_t state) const {
  const Node& n = nodes_[f];
  switch (n.kind) {
    case Kind::konst:
      return n.value;
    case Kind::lit: {
      bool v = (state >> state_lit_latch(n.slit)) & 1;
      return state_lit_negated(n.slit) ? !v : v;
    }
    case Kind::land:
      for (FormulaRef c : n.children)
        if (!eval(c, state)) return false;
      return true;
    case Kind::lor:
      for (FormulaRef c : n.children)
        if (eval(c, state)) return true;
      return false;
  }
  return false;
}

void FormulaStore::collect_latches(FormulaRef f,
                                   std::vector<uint32_t>& out) const {
  const Node& n = nodes_[f];
  if (n.kind == Kind::lit) {
    out.push_back(state_lit_latch(n.slit));
  } else if (n.kind != Kind::konst) {
    for (FormulaRef c : n.children) collect_latches(c, out);
  }
}

std::string FormulaStore::to_string(FormulaRef f) const {
  const Node& n = nodes_[f];
  switch (n.kind) {
    case Kind::konst:
      return n.value ? "true" : "false";
    case Kind::lit:
      return (state_lit_negated(n.slit) ? "!x" : "x") +
             std::to_string(state_lit_latch(n.slit));
    case Kind::land:
    case Kind::lor: {
      std::string sep = n.kind == Kind::land ? " & " : " | ";
      std::string out = "(";
      for (size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += sep;
        out += to_string(n.children[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

}  // namespace smc
