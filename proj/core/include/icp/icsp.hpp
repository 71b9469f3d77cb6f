// Interval CSPs: primitive constraints over interval domains, produced by
// translating inequality trees.  Every internal tree node is labeled with a
// fresh variable and yields one constraint; constants become fresh variables
// with the tightest enclosure of their literal.  Each constraint carries the
// distance from the root of the node that generated it, which drives the
// propagation priority queue.

#pragma once

#include <climits>
#include <string>
#include <vector>

#include "icp/expr.hpp"
#include "icp/interval.hpp"

namespace icp {

using VarId = int;

enum class VarKind { User, Internal, Constant };

struct VarInfo {
  std::string name;
  VarKind kind = VarKind::User;
  std::string source;  // original system variable a user variable stands for
};

// Sum(x,y,z): x+y=z.  Prod(x,y,z): x*y=z.  Sq(x,y): y=x^2.
// Sin(x,y): y=sin x.  Neg(x,y): y=-x.  LeqZero(y): y<=0.
// AllEq(v1..vq): all arguments equal.
// Subtraction and division are normalized away: a-b=c is Sum(c,b,a) and
// a/b=c is Prod(c,b,a).
enum class ConstraintKind { Sum, Prod, Sq, Sin, Neg, LeqZero, AllEq };

std::string_view constraint_kind_name(ConstraintKind k);

// AllEq spans trees, so it has no tree depth; the sentinel puts it at the
// very front of the priority queue.
inline constexpr int kAllEqDepth = INT_MAX;

struct Constraint {
  ConstraintKind kind;
  std::vector<VarId> args;
  int depth = 0;
  std::string origin;  // rendered source node, for traces
};

struct Icsp {
  std::vector<VarInfo> vars;
  std::vector<Interval> domains;  // initial domains, parallel to vars
  std::vector<Constraint> constraints;
  std::vector<std::vector<int>> var_constraints;  // var -> constraint indices

  VarId root = -1;  // label of the (first) formula's lhs / the bare term
  // (constraint index, root label) of each translated formula's LeqZero.
  std::vector<std::pair<int, VarId>> leq_roots;

  VarId find_var(const std::string& name) const;  // -1 when absent

  // Start domains for a propagation run over a user box: user variables
  // take the interval of their source variable (entire when absent),
  // internal variables reset to [-inf,+inf], constants keep their
  // enclosure.
  std::vector<Interval> domains_from_box(const Box& box) const;
};

Icsp translate(const AtomicFormula& f, const Box& domains);
// Bare-term translation: no LeqZero is emitted; the term's root label is
// icsp.root and its constraint (if any) sits at depth 0.
Icsp translate_term(const TermPtr& t, const Box& domains);
// Union of per-formula translations plus one AllEq per equivalence class
// with at least two members.
Icsp translate_system(const CanonicalSystem& cs);

// Applies every projection of c over `domains`, iterating the projection
// formulas to a local fixpoint so the operator is idempotent bit for bit.
// Entries of changed variables are overwritten and appended to *changed
// (when non-null).  Returns false as soon as a domain becomes empty.
//
// Constraints whose arguments repeat a variable can contract by vanishing
// steps; the iteration stops after a bounded number of passes and reports
// *converged = false, in which case a re-application can continue the
// contraction (the propagation loop re-enqueues such constraints).
bool dro_apply_inplace(const Constraint& c, std::vector<Interval>& domains,
                       std::vector<VarId>* changed, bool* converged = nullptr);

// Pure variant returning the reduced domain vector (unchanged entries are
// copied through).
std::vector<Interval> dro_apply(const Constraint& c, std::vector<Interval> domains);

// Per-argument domains produced by the DRO from all-[-inf,+inf] inputs.
std::vector<Interval> default_domains(ConstraintKind kind, std::size_t arity);

// A constraint is a seed iff some argument's domain differs from that
// argument's default domain.
bool is_seed(const Constraint& c, const std::vector<Interval>& domains);

// One constraint per line as "kind(args) @depth", then one "name in [a,b]"
// line per variable.
std::string render(const Icsp& icsp);
std::string render(const Constraint& c, const Icsp& icsp);

}  // namespace icp
