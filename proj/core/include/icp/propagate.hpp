// Fixpoint propagation over an ICSP.
//
// gpa() is the generic worklist loop: pick a constraint from the active set,
// apply its DRO, stop on an empty domain, re-enqueue the constraints of every
// changed variable, until the set drains.  psi() initializes the set with the
// seed constraints only and schedules by tree depth (deeper first); each
// formula's root cut y <= 0 is applied as an extraneous event followed by
// selective re-propagation, round-robin until nothing changes.  Both reach
// the same fixpoint; psi does it without touching constraints that cannot
// act.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "icp/icsp.hpp"

namespace icp {

struct SelectionPolicy {
  enum class Kind { Fifo, DepthPriority, Lifo, RandomSeeded };
  Kind kind = Kind::Fifo;
  std::uint64_t seed = 0;

  static SelectionPolicy fifo() { return {Kind::Fifo, 0}; }
  static SelectionPolicy depth_priority() { return {Kind::DepthPriority, 0}; }
  static SelectionPolicy lifo() { return {Kind::Lifo, 0}; }
  static SelectionPolicy random(std::uint64_t seed) {
    return {Kind::RandomSeeded, seed};
  }
};

// Duplicate-free worklist.  DepthPriority pops a constraint of maximal
// depth, breaking ties by insertion order.
class ActiveSet {
 public:
  ActiveSet(std::size_t n_constraints, SelectionPolicy policy);

  // No-op when the constraint is already queued.
  void push(int cidx, int depth);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  int pop();

 private:
  struct Entry {
    int cidx;
    int depth;
    long seq;
  };
  std::vector<Entry> entries_;
  std::vector<char> member_;
  long next_seq_ = 0;
  SelectionPolicy policy_;
  std::uint64_t rng_state_;
};

struct PropagationStats {
  std::vector<long> activations;  // per constraint index
  long total_dro_calls = 0;
  long changed_domain_events = 0;
  int initial_active_set = 0;
};

struct PropagationOutcome {
  bool consistent = true;
  std::vector<Interval> domains;  // state at the fixpoint (or at the stop)
  PropagationStats stats;
};

using TraceFn = std::function<void(const std::string&)>;

struct PropagationLimits {
  long max_activations = 1'000'000;  // exceeded -> std::runtime_error
};

struct InitSet {
  bool all = true;
  std::vector<int> subset;
  static InitSet all_constraints() { return {}; }
  static InitSet subset_of(std::vector<int> s) { return {false, std::move(s)}; }
};

PropagationOutcome gpa(const Icsp& icsp, std::vector<Interval> start,
                       const InitSet& init, const SelectionPolicy& order,
                       const TraceFn& trace = {},
                       const PropagationLimits& limits = {});
PropagationOutcome gpa(const Icsp& icsp, const InitSet& init,
                       const SelectionPolicy& order);

PropagationOutcome psi(const Icsp& icsp, std::vector<Interval> start,
                       const TraceFn& trace = {},
                       const PropagationLimits& limits = {});
PropagationOutcome psi(const Icsp& icsp);

// Evaluates a term by translating it and propagating; returns the root
// label's final domain.  Equals eval_term bound for bound.
Interval eval_by_propagation(const TermPtr& t, const Box& env);

// After an external shrink of one variable at a fixpoint, re-propagates with
// the active set initialized to the constraints involving that variable
// only.  Asserts (debug builds) that `fixpoint` really is one and that
// `shrunk` is a proper subset of the variable's domain.
PropagationOutcome repropagate(const Icsp& icsp, std::vector<Interval> fixpoint,
                               VarId changed, const Interval& shrunk,
                               const TraceFn& trace = {},
                               const PropagationLimits& limits = {});

enum class IneqStatus { Infeasible, AllSolutions, Indeterminate };

struct IneqResult {
  IneqStatus status;
  std::vector<Interval> domains;
  PropagationStats stats;
};

// Solves a single translated inequality: a bottom-up phase computes the
// lhs value [a,b]; a>0 means no solutions, b<=0 means every point of the
// box is a solution, otherwise the root cut is applied and propagated back
// down.
IneqResult solve_inequality(const Icsp& icsp, std::vector<Interval> start);
IneqResult solve_inequality(const Icsp& icsp);

// "constraint -> activation count" table plus totals.
std::string render_stats(const Icsp& icsp, const PropagationStats& stats);

}  // namespace icp
