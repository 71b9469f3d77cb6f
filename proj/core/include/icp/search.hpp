// Branch-and-prune solving of inequality systems into guaranteed covers.
//
// Each node of the search is propagated (psi over the canonical ICSP with
// the conjunction's root cuts applied round-robin), classified by interval
// evaluation, optionally tightened by a box-consistency pass, and split on
// a widest variable.  Proven boxes contain only solutions; indeterminate
// boxes may; together they contain every solution of the initial box.

#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "icp/expr.hpp"
#include "icp/propagate.hpp"

namespace icp {

enum class Classification { Infeasible, AllSolutions, Indeterminate };
enum class Strategy { Greedy, BoxConsistencyFirst };
enum class BcMethod { Functional, Relational };
enum class Side { Left, Right };

struct SolveConfig {
  double min_width = 1e-3;   // stop splitting below this width
  long max_boxes = 100000;   // node expansion budget
  Strategy strategy = Strategy::Greedy;
  double bc_tolerance = 1e-8;
  BcMethod bc_method = BcMethod::Relational;
  int threads = 1;

  void validate() const;  // throws std::invalid_argument
};

struct SolveStats {
  long nodes_expanded = 0;
  long propagation_runs = 0;
  long dro_calls = 0;
};

struct Cover {
  std::vector<Box> proven;         // every point is a solution
  std::vector<Box> indeterminate;  // may contain solutions
  long infeasible_count = 0;       // pruned subproblems
  SolveStats stats;
};

// Interval evaluation of every inequality over the box: some lower bound
// positive -> Infeasible; every upper bound <= 0 -> AllSolutions; otherwise
// Indeterminate.
Classification classify(const System& sys, const Box& box);

// Declared domains for every variable of the system.
Box initial_box(const System& sys);

// Splits a widest variable with width > min_width (ties: first in `order`);
// nullopt when no variable is splittable.
std::optional<std::tuple<std::string, Box, Box>> split_widest(
    const Box& box, const std::vector<std::string>& order, double min_width);

// Canonical translation shared by every node and probe of one solve.
struct SearchContext {
  const System* system = nullptr;
  CanonicalSystem canonical;
  Icsp icsp;
  std::vector<std::string> order;  // original variables, declaration order

  static SearchContext make(const System& sys);
};

// Box-consistency narrowing of one bound of one variable: binary search for
// boundary slices provably free of solutions (by interval evaluation or by
// propagation, per cfg.bc_method), removing them until the undecided slice
// is narrower than cfg.bc_tolerance.  Returns the empty interval when the
// whole domain is provably solution-free.
Interval narrow_bound(const SearchContext& ctx, const Box& box,
                      const std::string& var, Side side, const SolveConfig& cfg);

// narrow_bound on both sides of every variable until no bound moves by more
// than bc_tolerance.  A returned box with an empty component signals an
// infeasible box.
Box box_consistency_pass(const SearchContext& ctx, Box box, const SolveConfig& cfg);

Cover solve_system(const System& sys, const SolveConfig& cfg);

// Greatest c (within `precision`) for which constraints + {objective <= c}
// is proven to have no solutions: a verified lower bound on the global
// minimum of the objective over the feasible set.  Returns -inf when the
// objective is unbounded below over the initial box.
double lower_bound_minimum(const TermPtr& objective, const System& constraints,
                           double precision, const SolveConfig& cfg = {});

// {"proven": [...], "indeterminate": [...], "infeasible_count": n,
//  "stats": {...}}; a box is an object of var: [lb, rb] pairs with infinite
// bounds rendered as "-inf"/"inf" strings.
std::string cover_to_json(const Cover& cover, const System& sys, int indent = -1);
std::string cover_to_text(const Cover& cover, const System& sys);

}  // namespace icp
