#include "icp/icsp.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <set>

namespace icp {

std::string_view constraint_kind_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::Sum: return "sum";
    case ConstraintKind::Prod: return "prod";
    case ConstraintKind::Sq: return "sq";
    case ConstraintKind::Sin: return "sin";
    case ConstraintKind::Neg: return "neg";
    case ConstraintKind::LeqZero: return "leq0";
    case ConstraintKind::AllEq: return "alleq";
  }
  return "?";
}

VarId Icsp::find_var(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return static_cast<VarId>(i);
  }
  return -1;
}

std::vector<Interval> Icsp::domains_from_box(const Box& box) const {
  std::vector<Interval> out(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    switch (vars[i].kind) {
      case VarKind::User: {
        const std::string& key =
            vars[i].source.empty() ? vars[i].name : vars[i].source;
        auto it = box.find(key);
        out[i] = it == box.end() ? Interval::entire() : it->second;
        break;
      }
      case VarKind::Internal:
        out[i] = Interval::entire();
        break;
      case VarKind::Constant:
        out[i] = domains[i];
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Translation

namespace {

struct Builder {
  Icsp icsp;
  std::map<std::string, VarId> user_ids;
  std::set<std::string> taken_names;
  const Box* user_domains = nullptr;
  const std::map<std::string, std::string>* source_map = nullptr;
  int next_internal = 1;
  int next_const = 1;

  VarId add_var(VarInfo info, Interval dom) {
    VarId id = static_cast<VarId>(icsp.vars.size());
    taken_names.insert(info.name);
    icsp.vars.push_back(std::move(info));
    icsp.domains.push_back(dom);
    return id;
  }

  VarId user_var(const std::string& name) {
    auto it = user_ids.find(name);
    if (it != user_ids.end()) return it->second;
    std::string src = name;
    if (source_map) {
      auto s = source_map->find(name);
      if (s != source_map->end()) src = s->second;
    }
    Interval dom = Interval::entire();
    if (user_domains) {
      auto d = user_domains->find(name);
      if (d != user_domains->end()) dom = d->second;
    }
    VarId id = add_var({name, VarKind::User, src}, dom);
    user_ids.emplace(name, id);
    return id;
  }

  std::string fresh_name(const char* prefix, int* counter) {
    std::string name;
    do {
      name = prefix + std::to_string((*counter)++);
    } while (taken_names.count(name));
    return name;
  }

  VarId emit(const TermPtr& t, int depth) {
    switch (t->kind) {
      case Term::Kind::Variable:
        return user_var(t->name);
      case Term::Kind::Constant:
        return add_var({fresh_name("c", &next_const), VarKind::Constant, ""},
                       constant_enclosure(*t));
      case Term::Kind::Apply:
        break;
    }
    VarId own = add_var({fresh_name("t", &next_internal), VarKind::Internal, ""},
                        Interval::entire());
    // Reserve the constraint slot before recursing so the listing comes out
    // in pre-order.
    auto slot = icsp.constraints.size();
    icsp.constraints.emplace_back();
    std::vector<VarId> kid;
    kid.reserve(t->args.size());
    for (const auto& a : t->args) kid.push_back(emit(a, depth + 1));

    Constraint c;
    c.depth = depth;
    c.origin = render(*t);
    switch (t->symbol) {
      case Symbol::Add: c.kind = ConstraintKind::Sum; c.args = {kid[0], kid[1], own}; break;
      case Symbol::Sub: c.kind = ConstraintKind::Sum; c.args = {own, kid[1], kid[0]}; break;
      case Symbol::Neg: c.kind = ConstraintKind::Neg; c.args = {kid[0], own}; break;
      case Symbol::Mul: c.kind = ConstraintKind::Prod; c.args = {kid[0], kid[1], own}; break;
      case Symbol::Div: c.kind = ConstraintKind::Prod; c.args = {own, kid[1], kid[0]}; break;
      case Symbol::Sq: c.kind = ConstraintKind::Sq; c.args = {kid[0], own}; break;
      case Symbol::Sin: c.kind = ConstraintKind::Sin; c.args = {kid[0], own}; break;
    }
    icsp.constraints[slot] = std::move(c);
    return own;
  }

  void emit_formula(const AtomicFormula& f) {
    auto slot = icsp.constraints.size();
    icsp.constraints.emplace_back();
    VarId y = emit(f.lhs, 1);
    Constraint c;
    c.kind = ConstraintKind::LeqZero;
    c.args = {y};
    c.depth = 0;
    c.origin = render(*f.lhs) + " <= 0";
    icsp.constraints[slot] = std::move(c);
    icsp.leq_roots.emplace_back(static_cast<int>(slot), y);
    if (icsp.root < 0) icsp.root = y;
  }

  Icsp finish() {
    icsp.var_constraints.assign(icsp.vars.size(), {});
    for (std::size_t ci = 0; ci < icsp.constraints.size(); ++ci) {
      std::set<VarId> uniq(icsp.constraints[ci].args.begin(),
                           icsp.constraints[ci].args.end());
      for (VarId v : uniq)
        icsp.var_constraints[v].push_back(static_cast<int>(ci));
    }
    return std::move(icsp);
  }
};

}  // namespace

Icsp translate(const AtomicFormula& f, const Box& domains) {
  Builder b;
  b.user_domains = &domains;
  b.emit_formula(f);
  return b.finish();
}

Icsp translate_term(const TermPtr& t, const Box& domains) {
  Builder b;
  b.user_domains = &domains;
  b.icsp.root = b.emit(t, 0);
  return b.finish();
}

Icsp translate_system(const CanonicalSystem& cs) {
  std::map<std::string, std::string> source;
  for (const auto& [orig, members] : cs.classes) {
    for (const auto& m : members) source[m] = orig;
  }
  Builder b;
  b.user_domains = &cs.domains;
  b.source_map = &source;
  for (const auto& f : cs.formulas) b.emit_formula(f);
  for (const auto& [orig, members] : cs.classes) {
    if (members.size() < 2) continue;
    Constraint c;
    c.kind = ConstraintKind::AllEq;
    for (const auto& m : members) c.args.push_back(b.user_var(m));
    c.depth = kAllEqDepth;
    c.origin = "allEq(" + orig + ")";
    b.icsp.constraints.push_back(std::move(c));
  }
  return b.finish();
}

// ---------------------------------------------------------------------------
// Domain reduction operators

namespace {

// One chained pass over the projection formulas; returns true if any domain
// changed.  Sets *empty as soon as a projection empties a domain.
bool dro_pass(const Constraint& c, std::vector<Interval>& d, bool* empty) {
  auto shrink = [&](VarId v, const Interval& by) {
    Interval nd = intersect(d[v], by);
    if (nd == d[v]) return false;
    d[v] = nd;
    if (nd.is_empty()) *empty = true;
    return true;
  };
  // Hulling happens after the intersection with the current domain, so a
  // two-piece preimage trims both sides instead of collapsing early.
  auto shrink_pieces = [&](VarId v, const IntervalPair& p) {
    return shrink(v, hull(intersect(d[v], p.first), intersect(d[v], p.second)));
  };
  bool ch = false;
  const auto& a = c.args;
  switch (c.kind) {
    case ConstraintKind::Sum:
      ch |= shrink(a[0], sub(d[a[2]], d[a[1]]));
      if (*empty) return ch;
      ch |= shrink(a[1], sub(d[a[2]], d[a[0]]));
      if (*empty) return ch;
      ch |= shrink(a[2], add(d[a[0]], d[a[1]]));
      return ch;
    case ConstraintKind::Prod:
      ch |= shrink_pieces(a[0], div_pieces(d[a[2]], d[a[1]]));
      if (*empty) return ch;
      ch |= shrink_pieces(a[1], div_pieces(d[a[2]], d[a[0]]));
      if (*empty) return ch;
      ch |= shrink(a[2], mul(d[a[0]], d[a[1]]));
      return ch;
    case ConstraintKind::Sq:
      ch |= shrink(a[1], sq(d[a[0]]));
      if (*empty) return ch;
      ch |= shrink_pieces(a[0], sqrt_pieces(d[a[1]]));
      return ch;
    case ConstraintKind::Sin:
      ch |= shrink(a[1], sin_ext(d[a[0]]));
      if (*empty) return ch;
      ch |= shrink(a[0], sin_preimage(d[a[1]], d[a[0]]));
      return ch;
    case ConstraintKind::Neg:
      ch |= shrink(a[1], neg(d[a[0]]));
      if (*empty) return ch;
      ch |= shrink(a[0], neg(d[a[1]]));
      return ch;
    case ConstraintKind::LeqZero:
      return shrink(a[0], Interval(-std::numeric_limits<double>::infinity(), 0.0));
    case ConstraintKind::AllEq: {
      Interval common = d[a[0]];
      for (std::size_t i = 1; i < a.size(); ++i) common = intersect(common, d[a[i]]);
      for (VarId v : a) {
        ch |= shrink(v, common);
        if (*empty) return ch;
      }
      return ch;
    }
  }
  return ch;
}

}  // namespace

bool dro_apply_inplace(const Constraint& c, std::vector<Interval>& domains,
                       std::vector<VarId>* changed, bool* converged) {
  std::vector<std::pair<VarId, Interval>> before;
  before.reserve(c.args.size());
  for (VarId v : c.args) {
    bool dup = false;
    for (const auto& [w, old] : before) dup |= (w == v);
    if (!dup) before.emplace_back(v, domains[v]);
  }
  bool empty = false;
  bool stable = false;
  for (int pass = 0; pass < 64; ++pass) {
    if (!dro_pass(c, domains, &empty)) {
      stable = true;
      break;
    }
    if (empty) break;
  }
  if (converged) *converged = stable || empty;
  if (empty) {
    // Canonical inconsistent state: the box is empty as soon as any
    // component is, so all of the constraint's arguments collapse.
    for (const auto& [v, old] : before) domains[v] = Interval::empty();
  }
  if (changed) {
    for (const auto& [v, old] : before) {
      if (domains[v] != old) changed->push_back(v);
    }
  }
  return !empty;
}

std::vector<Interval> dro_apply(const Constraint& c, std::vector<Interval> domains) {
  bool converged = false;
  while (!converged) {
    if (!dro_apply_inplace(c, domains, nullptr, &converged)) break;
  }
  return domains;
}

std::vector<Interval> default_domains(ConstraintKind kind, std::size_t arity) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case ConstraintKind::Sum:
    case ConstraintKind::Prod:
      assert(arity == 3);
      return {Interval::entire(), Interval::entire(), Interval::entire()};
    case ConstraintKind::Neg:
      assert(arity == 2);
      return {Interval::entire(), Interval::entire()};
    case ConstraintKind::Sq:
      assert(arity == 2);
      return {Interval::entire(), Interval(0.0, inf)};
    case ConstraintKind::Sin:
      assert(arity == 2);
      return {Interval::entire(), Interval(-1.0, 1.0)};
    case ConstraintKind::LeqZero:
      assert(arity == 1);
      return {Interval(-inf, 0.0)};
    case ConstraintKind::AllEq:
      return std::vector<Interval>(arity, Interval::entire());
  }
  return {};
}

bool is_seed(const Constraint& c, const std::vector<Interval>& domains) {
  std::vector<Interval> defaults = default_domains(c.kind, c.args.size());
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (domains[c.args[i]] != defaults[i]) return true;
  }
  return false;
}

std::string render(const Constraint& c, const Icsp& icsp) {
  std::string out{constraint_kind_name(c.kind)};
  out += "(";
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) out += ",";
    out += icsp.vars[c.args[i]].name;
  }
  out += ") @";
  out += c.depth == kAllEqDepth ? "inf" : std::to_string(c.depth);
  return out;
}

std::string render(const Icsp& icsp) {
  std::string out;
  for (const auto& c : icsp.constraints) {
    out += render(c, icsp) + "\n";
  }
  for (std::size_t i = 0; i < icsp.vars.size(); ++i) {
    out += icsp.vars[i].name + " in " + icsp.domains[i].str() + "\n";
  }
  return out;
}

}  // namespace icp
