#include "icp/propagate.hpp"

#include <cassert>
#include <limits>
#include <stdexcept>

namespace icp {

ActiveSet::ActiveSet(std::size_t n_constraints, SelectionPolicy policy)
    : member_(n_constraints, 0), policy_(policy), rng_state_(policy.seed | 1) {}

void ActiveSet::push(int cidx, int depth) {
  if (member_[cidx]) return;
  member_[cidx] = 1;
  entries_.push_back({cidx, depth, next_seq_++});
}

int ActiveSet::pop() {
  assert(!entries_.empty());
  std::size_t pick = 0;
  switch (policy_.kind) {
    case SelectionPolicy::Kind::Fifo:
      for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].seq < entries_[pick].seq) pick = i;
      break;
    case SelectionPolicy::Kind::Lifo:
      for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].seq > entries_[pick].seq) pick = i;
      break;
    case SelectionPolicy::Kind::DepthPriority:
      for (std::size_t i = 1; i < entries_.size(); ++i) {
        const Entry& e = entries_[i];
        const Entry& b = entries_[pick];
        if (e.depth > b.depth || (e.depth == b.depth && e.seq < b.seq)) pick = i;
      }
      break;
    case SelectionPolicy::Kind::RandomSeeded:
      // xorshift; any fair choice converges to the same fixpoint
      rng_state_ ^= rng_state_ << 13;
      rng_state_ ^= rng_state_ >> 7;
      rng_state_ ^= rng_state_ << 17;
      pick = static_cast<std::size_t>(rng_state_ % entries_.size());
      break;
  }
  int cidx = entries_[pick].cidx;
  member_[cidx] = 0;
  entries_[pick] = entries_.back();
  entries_.pop_back();
  return cidx;
}

namespace {

std::string trace_line(const Icsp& icsp, int cidx,
                       const std::vector<std::pair<VarId, Interval>>& before,
                       const std::vector<Interval>& after) {
  std::string line = render(icsp.constraints[cidx], icsp) + ":";
  for (const auto& [v, old] : before) {
    line += " " + icsp.vars[v].name + " " + old.str() + " -> " + after[v].str();
  }
  return line;
}

// The shared worklist loop.  When enqueue_leq is false, LeqZero constraints
// never enter the set; their cuts are applied by the caller as extraneous
// events.  Returns false on inconsistency.
bool run_loop(const Icsp& icsp, std::vector<Interval>& domains, ActiveSet& active,
              bool enqueue_leq, PropagationStats& stats, const TraceFn& trace,
              const PropagationLimits& limits) {
  std::vector<VarId> changed;
  while (!active.empty()) {
    int cidx = active.pop();
    const Constraint& c = icsp.constraints[cidx];
    ++stats.activations[cidx];
    ++stats.total_dro_calls;
    if (stats.total_dro_calls > limits.max_activations)
      throw std::runtime_error("propagation activation budget exceeded");

    std::vector<std::pair<VarId, Interval>> before;
    if (trace) {
      for (VarId v : c.args) before.emplace_back(v, domains[v]);
    }
    changed.clear();
    bool converged = true;
    bool ok = dro_apply_inplace(c, domains, &changed, &converged);
    stats.changed_domain_events += static_cast<long>(changed.size());
    if (trace) trace(trace_line(icsp, cidx, before, domains));
    for (VarId v : changed) {
      assert(icsp.domains.size() == domains.size());
      for (int d : icsp.var_constraints[v]) {
        if (d == cidx) continue;  // idempotent: an immediate re-run is a no-op
        if (!enqueue_leq &&
            icsp.constraints[d].kind == ConstraintKind::LeqZero)
          continue;
        active.push(d, icsp.constraints[d].depth);
      }
    }
    // Still contracting when the pass cap was hit (possible only with
    // repeated-variable constraints): keep it scheduled.
    if (!converged) active.push(cidx, c.depth);
    if (!ok) return false;
  }
  return true;
}

bool initial_domains_ok(const std::vector<Interval>& domains) {
  for (const auto& d : domains) {
    if (d.is_empty()) return false;
  }
  return true;
}

PropagationStats make_stats(const Icsp& icsp) {
  PropagationStats s;
  s.activations.assign(icsp.constraints.size(), 0);
  return s;
}

}  // namespace

PropagationOutcome gpa(const Icsp& icsp, std::vector<Interval> start,
                       const InitSet& init, const SelectionPolicy& order,
                       const TraceFn& trace, const PropagationLimits& limits) {
  PropagationOutcome out;
  out.stats = make_stats(icsp);
  out.domains = std::move(start);
  assert(out.domains.size() == icsp.vars.size());
  if (!initial_domains_ok(out.domains)) {
    out.consistent = false;
    return out;
  }
  ActiveSet active(icsp.constraints.size(), order);
  if (init.all) {
    for (std::size_t i = 0; i < icsp.constraints.size(); ++i)
      active.push(static_cast<int>(i), icsp.constraints[i].depth);
  } else {
    for (int i : init.subset) active.push(i, icsp.constraints[i].depth);
  }
  out.stats.initial_active_set = static_cast<int>(active.size());
  out.consistent =
      run_loop(icsp, out.domains, active, /*enqueue_leq=*/true, out.stats, trace, limits);
  return out;
}

PropagationOutcome gpa(const Icsp& icsp, const InitSet& init,
                       const SelectionPolicy& order) {
  return gpa(icsp, icsp.domains, init, order);
}

PropagationOutcome psi(const Icsp& icsp, std::vector<Interval> start,
                       const TraceFn& trace, const PropagationLimits& limits) {
  PropagationOutcome out;
  out.stats = make_stats(icsp);
  out.domains = std::move(start);
  assert(out.domains.size() == icsp.vars.size());
  if (!initial_domains_ok(out.domains)) {
    out.consistent = false;
    return out;
  }

  ActiveSet active(icsp.constraints.size(), SelectionPolicy::depth_priority());
  for (std::size_t i = 0; i < icsp.constraints.size(); ++i) {
    const Constraint& c = icsp.constraints[i];
    if (c.kind == ConstraintKind::LeqZero) continue;
    if (is_seed(c, out.domains)) active.push(static_cast<int>(i), c.depth);
  }
  out.stats.initial_active_set = static_cast<int>(active.size());
  if (!run_loop(icsp, out.domains, active, /*enqueue_leq=*/false, out.stats,
                trace, limits)) {
    out.consistent = false;
    return out;
  }

  // Root cuts y <= 0, applied as extraneous events round-robin, each
  // followed by selective re-propagation from the constraints involving y.
  bool any_change = true;
  while (any_change) {
    any_change = false;
    for (const auto& [cidx, y] : icsp.leq_roots) {
      Interval cut =
          intersect(out.domains[y], Interval(-std::numeric_limits<double>::infinity(), 0.0));
      ++out.stats.activations[cidx];
      ++out.stats.total_dro_calls;
      if (cut == out.domains[y]) continue;
      any_change = true;
      ++out.stats.changed_domain_events;
      out.domains[y] = cut;
      if (trace)
        trace(render(icsp.constraints[cidx], icsp) + ": cut " +
              icsp.vars[y].name + " -> " + cut.str());
      if (cut.is_empty()) {
        out.consistent = false;
        return out;
      }
      ActiveSet re(icsp.constraints.size(), SelectionPolicy::depth_priority());
      for (int d : icsp.var_constraints[y]) {
        if (icsp.constraints[d].kind == ConstraintKind::LeqZero) continue;
        re.push(d, icsp.constraints[d].depth);
      }
      if (!run_loop(icsp, out.domains, re, /*enqueue_leq=*/false, out.stats,
                    trace, limits)) {
        out.consistent = false;
        return out;
      }
    }
  }
  return out;
}

PropagationOutcome psi(const Icsp& icsp) { return psi(icsp, icsp.domains); }

Interval eval_by_propagation(const TermPtr& t, const Box& env) {
  Icsp icsp = translate_term(t, env);
  PropagationOutcome out = psi(icsp);
  if (!out.consistent) return Interval::empty();
  return out.domains[icsp.root];
}

PropagationOutcome repropagate(const Icsp& icsp, std::vector<Interval> fixpoint,
                               VarId changed, const Interval& shrunk,
                               const TraceFn& trace, const PropagationLimits& limits) {
#ifndef NDEBUG
  // The starting point must really be a common fixpoint of all DROs.
  for (const auto& c : icsp.constraints) {
    std::vector<Interval> copy = fixpoint;
    dro_apply_inplace(c, copy, nullptr);
    assert(copy == fixpoint && "repropagate: not a fixpoint");
  }
  assert(fixpoint[changed].contains(shrunk) && shrunk != fixpoint[changed] &&
         "repropagate: shrunk domain must be a proper subset");
#endif
  PropagationOutcome out;
  out.stats = make_stats(icsp);
  out.domains = std::move(fixpoint);
  out.domains[changed] = shrunk;
  if (shrunk.is_empty()) {
    out.consistent = false;
    return out;
  }
  ActiveSet active(icsp.constraints.size(), SelectionPolicy::depth_priority());
  for (int d : icsp.var_constraints[changed])
    active.push(d, icsp.constraints[d].depth);
  out.stats.initial_active_set = static_cast<int>(active.size());
  out.consistent = run_loop(icsp, out.domains, active, /*enqueue_leq=*/true,
                            out.stats, trace, limits);
  return out;
}

IneqResult solve_inequality(const Icsp& icsp, std::vector<Interval> start) {
  assert(icsp.leq_roots.size() == 1);
  const auto [leq_idx, y] = icsp.leq_roots[0];

  IneqResult res;
  res.stats = make_stats(icsp);
  res.domains = std::move(start);
  if (!initial_domains_ok(res.domains)) {
    res.status = IneqStatus::Infeasible;
    return res;
  }

  // Bottom-up: propagate with the root cut excluded from the active set.
  ActiveSet active(icsp.constraints.size(), SelectionPolicy::depth_priority());
  for (std::size_t i = 0; i < icsp.constraints.size(); ++i) {
    const Constraint& c = icsp.constraints[i];
    if (c.kind == ConstraintKind::LeqZero) continue;
    if (is_seed(c, res.domains)) active.push(static_cast<int>(i), c.depth);
  }
  res.stats.initial_active_set = static_cast<int>(active.size());
  PropagationLimits limits;
  if (!run_loop(icsp, res.domains, active, /*enqueue_leq=*/false, res.stats, {},
                limits)) {
    res.status = IneqStatus::Infeasible;
    return res;
  }

  Interval value = res.domains[y];
  if (value.lb() > 0.0) {
    res.status = IneqStatus::Infeasible;
    return res;
  }
  if (value.rb() <= 0.0) {
    res.status = IneqStatus::AllSolutions;
    return res;
  }

  // Top-down: the cut is an extraneous event, then selective re-propagation
  // from the constraints involving y.
  ++res.stats.activations[leq_idx];
  ++res.stats.total_dro_calls;
  ++res.stats.changed_domain_events;
  res.domains[y] = Interval(value.lb(), 0.0);
  ActiveSet re(icsp.constraints.size(), SelectionPolicy::depth_priority());
  for (int d : icsp.var_constraints[y]) {
    if (icsp.constraints[d].kind == ConstraintKind::LeqZero) continue;
    re.push(d, icsp.constraints[d].depth);
  }
  if (!run_loop(icsp, res.domains, re, /*enqueue_leq=*/false, res.stats, {},
                limits)) {
    res.status = IneqStatus::Infeasible;
    return res;
  }
  res.status = IneqStatus::Indeterminate;
  return res;
}

IneqResult solve_inequality(const Icsp& icsp) {
  return solve_inequality(icsp, icsp.domains);
}

std::string render_stats(const Icsp& icsp, const PropagationStats& stats) {
  std::string out;
  for (std::size_t i = 0; i < icsp.constraints.size(); ++i) {
    out += render(icsp.constraints[i], icsp) + " -> " +
           std::to_string(stats.activations[i]) + "\n";
  }
  out += "initial active set: " + std::to_string(stats.initial_active_set) + "\n";
  out += "total DRO calls: " + std::to_string(stats.total_dro_calls) + "\n";
  out += "changed-domain events: " + std::to_string(stats.changed_domain_events) + "\n";
  return out;
}

}  // namespace icp
