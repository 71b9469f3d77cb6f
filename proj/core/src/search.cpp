#include "icp/search.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "icp/eval.hpp"

namespace icp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void SolveConfig::validate() const {
  if (!(min_width > 0.0)) throw std::invalid_argument("min_width must be positive");
  if (!(bc_tolerance > 0.0))
    throw std::invalid_argument("bc_tolerance must be positive");
  if (max_boxes <= 0) throw std::invalid_argument("max_boxes must be positive");
  if (threads <= 0) throw std::invalid_argument("threads must be positive");
}

Classification classify(const System& sys, const Box& box) {
  if (box_empty(box)) return Classification::Infeasible;
  bool all_below = true;
  for (const auto& f : sys.formulas) {
    Interval v = eval_term(f.lhs, box);
    // An empty value means the lhs is undefined everywhere on the box, so
    // no point of it satisfies the inequality.
    if (v.is_empty()) return Classification::Infeasible;
    if (v.lb() > 0.0) return Classification::Infeasible;
    all_below &= v.rb() <= 0.0;
  }
  return all_below ? Classification::AllSolutions : Classification::Indeterminate;
}

Box initial_box(const System& sys) {
  Box box;
  for (const auto& var : sys.variable_order()) box[var] = sys.domain(var);
  return box;
}

std::optional<std::tuple<std::string, Box, Box>> split_widest(
    const Box& box, const std::vector<std::string>& order, double min_width) {
  const std::string* best = nullptr;
  double best_width = min_width;
  for (const auto& var : order) {
    auto it = box.find(var);
    if (it == box.end() || it->second.is_empty()) continue;
    double w = it->second.width();
    if (w > best_width) {
      best_width = w;
      best = &var;
    }
  }
  if (!best) return std::nullopt;
  auto [left, right] = box.at(*best).split();
  Box lo = box, hi = box;
  lo[*best] = left;
  hi[*best] = right;
  return std::make_tuple(*best, std::move(lo), std::move(hi));
}

SearchContext SearchContext::make(const System& sys) {
  SearchContext ctx;
  ctx.system = &sys;
  ctx.canonical = canonicalize(sys);
  ctx.icsp = translate_system(ctx.canonical);
  ctx.order = sys.variable_order();
  return ctx;
}

namespace {

// Intersection of all canonical copies of each original variable, folded
// back onto the original names.
Box project_to_box(const SearchContext& ctx, const std::vector<Interval>& domains,
                   const Box& base) {
  Box out = base;
  for (std::size_t i = 0; i < ctx.icsp.vars.size(); ++i) {
    const VarInfo& v = ctx.icsp.vars[i];
    if (v.kind != VarKind::User) continue;
    const std::string& key = v.source.empty() ? v.name : v.source;
    auto it = out.find(key);
    if (it == out.end()) continue;
    it->second = intersect(it->second, domains[i]);
  }
  return out;
}

// Slowly contracting cycles can make a single propagation run absurdly
// long; inside the search, propagation is best-effort narrowing, so a run
// that exhausts this budget simply reports no progress.
const PropagationLimits kNodeLimits{10000};

std::optional<PropagationOutcome> try_psi(const SearchContext& ctx, const Box& box,
                                          SolveStats* stats) {
  try {
    PropagationOutcome out = psi(ctx.icsp, ctx.icsp.domains_from_box(box), {}, kNodeLimits);
    if (stats) {
      ++stats->propagation_runs;
      stats->dro_calls += out.stats.total_dro_calls;
    }
    return out;
  } catch (const std::runtime_error&) {
    if (stats) ++stats->propagation_runs;
    return std::nullopt;
  }
}

bool no_solutions(const SearchContext& ctx, const Box& box, const SolveConfig& cfg,
                  SolveStats* stats) {
  if (cfg.bc_method == BcMethod::Functional) {
    return classify(*ctx.system, box) == Classification::Infeasible;
  }
  auto out = try_psi(ctx, box, stats);
  return out.has_value() && !out->consistent;
}

double bound_delta(double from, double to) {
  if (from == to) return 0.0;
  if (std::isinf(from) || std::isinf(to)) return kInf;
  return std::fabs(to - from);
}

}  // namespace

Interval narrow_bound(const SearchContext& ctx, const Box& box,
                      const std::string& var, Side side, const SolveConfig& cfg) {
  Interval dom = box.at(var);
  if (dom.is_empty()) return dom;

  auto empty_with = [&](const Interval& slice) {
    Box probe = box;
    probe[var] = slice;
    return no_solutions(ctx, probe, cfg, nullptr);
  };
  if (empty_with(dom)) return Interval::empty();

  const double tol = cfg.bc_tolerance;
  int guard = 0;
  bool done = false;
  while (!done && !dom.is_degenerate()) {
    double cut = dom.midpoint();  // probe starts at half the domain
    bool removed = false;
    while (true) {
      Interval slice = side == Side::Left ? Interval(dom.lb(), cut)
                                          : Interval(cut, dom.rb());
      if (slice.width() < tol || ++guard > 2000) {
        done = true;  // undecided boundary slice is narrow enough (or grid out)
        break;
      }
      if (empty_with(slice)) {
        dom = side == Side::Left ? Interval(cut, dom.rb())
                                 : Interval(dom.lb(), cut);
        removed = true;
        break;
      }
      double next_cut = slice.midpoint();
      bool progress = side == Side::Left ? next_cut < cut : next_cut > cut;
      if (!progress) {
        done = true;
        break;
      }
      cut = next_cut;
    }
    (void)removed;
  }
  return dom;
}

Box box_consistency_pass(const SearchContext& ctx, Box box, const SolveConfig& cfg) {
  if (box_empty(box)) return box;
  for (int sweep = 0; sweep < 1000; ++sweep) {
    double max_delta = 0.0;
    for (const auto& var : ctx.order) {
      for (Side side : {Side::Left, Side::Right}) {
        Interval old = box.at(var);
        Interval narrowed = narrow_bound(ctx, box, var, side, cfg);
        box[var] = narrowed;
        if (narrowed.is_empty()) return box;
        double delta = side == Side::Left ? bound_delta(old.lb(), narrowed.lb())
                                          : bound_delta(old.rb(), narrowed.rb());
        max_delta = std::max(max_delta, delta);
      }
    }
    if (max_delta <= cfg.bc_tolerance) break;
  }
  return box;
}

// ---------------------------------------------------------------------------
// Branch and prune

namespace {

enum class NodeAction { Pruned, Proven, Leaf, Split };

NodeAction process_node(const SearchContext& ctx, const SolveConfig& cfg, Box& box,
                        Box* left, Box* right, SolveStats* stats) {
  ++stats->nodes_expanded;
  if (auto out = try_psi(ctx, box, stats)) {
    if (!out->consistent) return NodeAction::Pruned;
    box = project_to_box(ctx, out->domains, box);
    if (box_empty(box)) return NodeAction::Pruned;
  }

  Classification cls = classify(*ctx.system, box);
  if (cls == Classification::Infeasible) return NodeAction::Pruned;
  if (cls == Classification::AllSolutions) return NodeAction::Proven;

  if (cfg.strategy == Strategy::BoxConsistencyFirst) {
    box = box_consistency_pass(ctx, std::move(box), cfg);
    if (box_empty(box)) return NodeAction::Pruned;
    cls = classify(*ctx.system, box);
    if (cls == Classification::Infeasible) return NodeAction::Pruned;
    if (cls == Classification::AllSolutions) return NodeAction::Proven;
  }

  auto split = split_widest(box, ctx.order, cfg.min_width);
  if (!split) return NodeAction::Leaf;
  *left = std::move(std::get<1>(*split));
  *right = std::move(std::get<2>(*split));
  return NodeAction::Split;
}

// Deterministic ordering of the output lists.
void sort_boxes(std::vector<Box>* boxes, const std::vector<std::string>& order) {
  std::sort(boxes->begin(), boxes->end(), [&](const Box& a, const Box& b) {
    for (const auto& var : order) {
      const Interval& x = a.at(var);
      const Interval& y = b.at(var);
      if (x.lb() != y.lb()) return x.lb() < y.lb();
      if (x.rb() != y.rb()) return x.rb() < y.rb();
    }
    return false;
  });
}

void solve_worker_pool(const SearchContext& ctx, const SolveConfig& cfg, Box root,
                       Cover* cover) {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<Box> stack;
  stack.push_back(std::move(root));
  long in_flight = 1;  // queued + being processed
  std::atomic<long> budget{0};

  auto worker = [&] {
    std::unique_lock<std::mutex> lk(mu);
    for (;;) {
      cv.wait(lk, [&] { return !stack.empty() || in_flight == 0; });
      if (stack.empty()) {
        if (in_flight == 0) return;
        continue;
      }
      Box box = std::move(stack.back());
      stack.pop_back();
      lk.unlock();

      SolveStats local;
      Box left, right;
      bool over_budget = budget.fetch_add(1) >= cfg.max_boxes;
      NodeAction action = NodeAction::Leaf;
      if (!over_budget)
        action = process_node(ctx, cfg, box, &left, &right, &local);

      lk.lock();
      cover->stats.nodes_expanded += local.nodes_expanded;
      cover->stats.propagation_runs += local.propagation_runs;
      cover->stats.dro_calls += local.dro_calls;
      long spawned = 0;
      if (over_budget) {
        cover->indeterminate.push_back(std::move(box));
      } else {
        switch (action) {
          case NodeAction::Pruned:
            ++cover->infeasible_count;
            break;
          case NodeAction::Proven:
            cover->proven.push_back(std::move(box));
            break;
          case NodeAction::Leaf:
            cover->indeterminate.push_back(std::move(box));
            break;
          case NodeAction::Split:
            stack.push_back(std::move(right));
            stack.push_back(std::move(left));
            spawned = 2;
            break;
        }
      }
      in_flight += spawned - 1;
      if (in_flight == 0 || spawned > 0) cv.notify_all();
    }
  };

  int n = std::max(1, cfg.threads);
  if (n == 1) {
    worker();
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (int i = 0; i < n; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

}  // namespace

Cover solve_system(const System& sys, const SolveConfig& cfg) {
  cfg.validate();
  SearchContext ctx = SearchContext::make(sys);
  Cover cover;
  solve_worker_pool(ctx, cfg, initial_box(sys), &cover);
  sort_boxes(&cover.proven, ctx.order);
  sort_boxes(&cover.indeterminate, ctx.order);
  return cover;
}

namespace {

// Single-threaded probe that stops as soon as infeasibility can no longer
// be concluded.
bool proves_infeasible(const System& sys, const SolveConfig& cfg) {
  SearchContext ctx = SearchContext::make(sys);
  std::vector<Box> stack;
  stack.push_back(initial_box(sys));
  SolveStats stats;
  long used = 0;
  while (!stack.empty()) {
    if (++used > cfg.max_boxes) return false;  // budget out: inconclusive
    Box box = std::move(stack.back());
    stack.pop_back();
    Box left, right;
    switch (process_node(ctx, cfg, box, &left, &right, &stats)) {
      case NodeAction::Pruned:
        break;
      case NodeAction::Proven:
      case NodeAction::Leaf:
        return false;
      case NodeAction::Split:
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
        break;
    }
  }
  return true;
}

void collect_term_vars(const Term& t, Box* box, const System& sys) {
  if (t.kind == Term::Kind::Variable) {
    if (!box->count(t.name)) (*box)[t.name] = sys.domain(t.name);
    return;
  }
  for (const auto& a : t.args) collect_term_vars(*a, box, sys);
}

}  // namespace

double lower_bound_minimum(const TermPtr& objective, const System& constraints,
                           double precision, const SolveConfig& cfg) {
  if (!(precision > 0.0))
    throw std::invalid_argument("precision must be positive");
  Box box0 = initial_box(constraints);
  collect_term_vars(*objective, &box0, constraints);
  Interval f0 = eval_term(objective, box0);
  if (f0.is_empty())
    throw std::invalid_argument("objective undefined over the initial box");
  double lo = f0.lb();
  if (lo == -kInf) return -kInf;
  double hi = f0.rb();

  auto provable = [&](double c) {
    System augmented = constraints;
    TermPtr g = Term::apply(Symbol::Sub, {objective, Term::constant(c)});
    augmented.formulas.push_back({g});
    // Objective variables must exist in the augmented system's box even when
    // the original constraint set never mentions them; variable_order covers
    // them via the appended formula.
    SolveConfig sub = cfg;
    sub.strategy = Strategy::Greedy;
    sub.threads = 1;
    sub.min_width = std::min(cfg.min_width, std::max(precision / 4.0, 1e-9));
    sub.max_boxes = std::min<long>(cfg.max_boxes, 20000);
    return proves_infeasible(augmented, sub);
  };

  if (std::isinf(hi)) {
    double c = std::max(1.0, 2.0 * std::fabs(lo));
    int rounds = 0;
    while (rounds++ < 128 && provable(c)) {
      lo = c;
      c *= 2.0;
      if (!std::isfinite(c)) return lo;
    }
    if (rounds > 128) return lo;
    hi = c;
  }

  while (hi - lo > precision) {
    double c = std::midpoint(lo, hi);
    if (!(c > lo && c < hi)) break;  // grid exhausted
    if (provable(c)) {
      lo = c;
    } else {
      hi = c;
    }
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

nlohmann::ordered_json bound_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

nlohmann::ordered_json box_json(const Box& box, const std::vector<std::string>& order) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& var : order) {
    const Interval& d = box.at(var);
    obj[var] = nlohmann::ordered_json::array({bound_json(d.lb()), bound_json(d.rb())});
  }
  return obj;
}

}  // namespace

std::string cover_to_json(const Cover& cover, const System& sys, int indent) {
  auto order = sys.variable_order();
  nlohmann::ordered_json j;
  j["proven"] = nlohmann::ordered_json::array();
  for (const auto& b : cover.proven) j["proven"].push_back(box_json(b, order));
  j["indeterminate"] = nlohmann::ordered_json::array();
  for (const auto& b : cover.indeterminate)
    j["indeterminate"].push_back(box_json(b, order));
  j["infeasible_count"] = cover.infeasible_count;
  j["stats"] = {{"nodes_expanded", cover.stats.nodes_expanded},
                {"propagation_runs", cover.stats.propagation_runs},
                {"dro_calls", cover.stats.dro_calls}};
  return j.dump(indent);
}

std::string cover_to_text(const Cover& cover, const System& sys) {
  auto order = sys.variable_order();
  auto box_line = [&](const Box& b) {
    std::string s;
    for (const auto& var : order) {
      if (!s.empty()) s += "  ";
      s += var + " in " + b.at(var).str();
    }
    return s;
  };
  std::string out;
  out += "proven: " + std::to_string(cover.proven.size()) + " boxes\n";
  for (const auto& b : cover.proven) out += "  " + box_line(b) + "\n";
  out += "indeterminate: " + std::to_string(cover.indeterminate.size()) + " boxes\n";
  for (const auto& b : cover.indeterminate) out += "  " + box_line(b) + "\n";
  out += "infeasible subproblems: " + std::to_string(cover.infeasible_count) + "\n";
  out += "nodes expanded: " + std::to_string(cover.stats.nodes_expanded) + "\n";
  return out;
}

}  // namespace icp
