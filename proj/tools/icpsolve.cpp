// icpsolve: solve systems of nonlinear real inequalities into guaranteed
// box covers via interval constraint propagation.
//
// Subcommands: solve, eval, propagate, bench, minlb.  Exit codes: 0 on
// success, 1 when the input is proven infeasible, 2 on input errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "icp/eval.hpp"
#include "icp/propagate.hpp"
#include "icp/search.hpp"

namespace {

using icp::Box;
using icp::Cover;
using icp::Icsp;
using icp::Interval;
using icp::System;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

System load_system(const std::string& path) {
  try {
    return icp::parse_system(read_file(path));
  } catch (const icp::ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

ordered_json interval_json(const Interval& iv) {
  if (iv.is_empty()) return "empty";
  auto bound = [](double v) -> ordered_json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  return ordered_json::array({bound(iv.lb()), bound(iv.rb())});
}

ordered_json stats_json(const Icsp& icsp, const icp::PropagationStats& stats) {
  ordered_json per = ordered_json::array();
  for (std::size_t i = 0; i < icsp.constraints.size(); ++i) {
    per.push_back({{"constraint", icp::render(icsp.constraints[i], icsp)},
                   {"activations", stats.activations[i]}});
  }
  return {{"initial_active_set", stats.initial_active_set},
          {"total_dro_calls", stats.total_dro_calls},
          {"changed_domain_events", stats.changed_domain_events},
          {"per_constraint", per}};
}

// ---------------------------------------------------------------------------
// solve

void write_svg(const Cover& cover, const System& sys, const std::string& path) {
  auto order = sys.variable_order();
  if (order.size() != 2)
    throw InputError("--plot requires a system over exactly 2 variables");
  Box init = icp::initial_box(sys);
  const Interval& dx = init.at(order[0]);
  const Interval& dy = init.at(order[1]);
  if (!dx.is_finite() || !dy.is_finite())
    throw InputError("--plot requires finite declared domains");

  const double size = 720.0;
  auto sx = [&](double v) { return (v - dx.lb()) / dx.width() * size; };
  auto sy = [&](double v) { return size - (v - dy.lb()) / dy.width() * size; };

  std::ofstream out(path);
  if (!out.good()) throw InputError("cannot write " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size << "' height='"
      << size << "' viewBox='0 0 " << size << " " << size << "'>\n";
  out << "<rect x='0' y='0' width='" << size << "' height='" << size
      << "' fill='white' stroke='#444'/>\n";
  auto rect = [&](const Box& b, const char* fill) {
    const Interval& ix = b.at(order[0]);
    const Interval& iy = b.at(order[1]);
    double x = sx(ix.lb()), w = sx(ix.rb()) - x;
    double y = sy(iy.rb()), h = sy(iy.lb()) - y;
    out << "<rect x='" << x << "' y='" << y << "' width='" << w << "' height='" << h
        << "' fill='" << fill << "' stroke='#33506b' stroke-width='0.4'/>\n";
  };
  for (const auto& b : cover.indeterminate) rect(b, "#cfe3f7");
  for (const auto& b : cover.proven) rect(b, "#2a6fbb");
  out << "</svg>\n";
}

struct SolveFlags {
  icp::SolveConfig cfg;
  bool json = false;
  bool stats = false;
  std::string plot;
  std::string strategy = "greedy";
  std::string method = "relational";

  void finish() {
    if (strategy == "greedy") {
      cfg.strategy = icp::Strategy::Greedy;
    } else if (strategy == "bc") {
      cfg.strategy = icp::Strategy::BoxConsistencyFirst;
    } else {
      throw InputError("unknown --strategy (use greedy|bc)");
    }
    if (method == "functional") {
      cfg.bc_method = icp::BcMethod::Functional;
    } else if (method == "relational") {
      cfg.bc_method = icp::BcMethod::Relational;
    } else {
      throw InputError("unknown --method (use functional|relational)");
    }
  }
};

void add_solve_flags(CLI::App* cmd, SolveFlags* f) {
  cmd->add_option("--min-width", f->cfg.min_width, "stop splitting below this width");
  cmd->add_option("--max-boxes", f->cfg.max_boxes, "node expansion budget");
  cmd->add_option("--tolerance", f->cfg.bc_tolerance, "box-consistency tolerance");
  cmd->add_option("--strategy", f->strategy, "greedy|bc");
  cmd->add_option("--method", f->method, "functional|relational");
  cmd->add_option("--threads", f->cfg.threads, "search worker threads");
  cmd->add_flag("--json", f->json, "machine-readable output");
  cmd->add_flag("--stats", f->stats, "print solver statistics");
  cmd->add_option("--plot", f->plot, "write an SVG of the cover (2-variable systems)");
}

int run_solve(const std::string& file, SolveFlags f) {
  f.finish();
  System sys = load_system(file);
  Cover cover = icp::solve_system(sys, f.cfg);
  if (!f.plot.empty()) write_svg(cover, sys, f.plot);
  if (f.json) {
    std::cout << icp::cover_to_json(cover, sys, 2) << "\n";
  } else {
    std::cout << icp::cover_to_text(cover, sys);
  }
  bool infeasible = cover.proven.empty() && cover.indeterminate.empty();
  return infeasible ? kExitInfeasible : kExitOk;
}

// ---------------------------------------------------------------------------
// eval

int run_eval(const std::string& file, const std::string& term_sel, bool json,
             bool by_propagation) {
  System sys = load_system(file);
  icp::TermPtr term;
  std::string label;
  try {
    std::size_t pos = 0;
    int idx = std::stoi(term_sel, &pos);
    if (pos != term_sel.size()) throw std::invalid_argument("");
    if (idx < 1 || idx > static_cast<int>(sys.formulas.size()))
      throw InputError("--term index out of range (1.." +
                       std::to_string(sys.formulas.size()) + ")");
    term = sys.formulas[idx - 1].lhs;
    label = render(*term);
  } catch (const std::invalid_argument&) {
    term = icp::Term::variable(term_sel);  // a variable name
    label = term_sel;
  }
  Box box = icp::initial_box(sys);
  if (!box.count(term_sel) && term->kind == icp::Term::Kind::Variable)
    box[term_sel] = sys.domain(term_sel);
  Interval value =
      by_propagation ? icp::eval_by_propagation(term, box) : icp::eval_term(term, box);
  if (json) {
    ordered_json j{{"term", label}, {"value", interval_json(value)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << label << " = " << value.str() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// propagate

int run_propagate(const std::string& file, const std::string& engine, bool trace,
                  bool stats, bool json) {
  System sys = load_system(file);
  icp::CanonicalSystem canonical = icp::canonicalize(sys);
  Icsp icsp = icp::translate_system(canonical);
  icp::TraceFn tracer;
  if (trace) tracer = [](const std::string& line) { std::cerr << line << "\n"; };

  icp::PropagationOutcome out;
  if (engine == "psi") {
    out = icp::psi(icsp, icsp.domains, tracer);
  } else if (engine == "gpa") {
    out = icp::gpa(icsp, icsp.domains, icp::InitSet::all_constraints(),
                   icp::SelectionPolicy::fifo(), tracer);
  } else {
    throw InputError("unknown --engine (use gpa|psi)");
  }

  // fold the canonical copies back onto the original variables
  Box result = icp::initial_box(sys);
  for (std::size_t i = 0; i < icsp.vars.size(); ++i) {
    if (icsp.vars[i].kind != icp::VarKind::User) continue;
    const std::string& key = icsp.vars[i].source;
    auto it = result.find(key);
    if (it != result.end()) it->second = intersect(it->second, out.domains[i]);
  }

  if (json) {
    ordered_json domains = ordered_json::object();
    for (const auto& v : sys.variable_order())
      domains[v] = interval_json(out.consistent ? result.at(v) : Interval::empty());
    ordered_json j{{"engine", engine},
                   {"consistent", out.consistent},
                   {"domains", domains},
                   {"stats", stats_json(icsp, out.stats)}};
    std::cout << j.dump(2) << "\n";
  } else {
    if (!out.consistent) {
      std::cout << "inconsistent\n";
    } else {
      for (const auto& v : sys.variable_order())
        std::cout << v << " in " << result.at(v).str() << "\n";
    }
    if (stats) std::cout << render_stats(icsp, out.stats);
  }
  return out.consistent ? kExitOk : kExitInfeasible;
}

// ---------------------------------------------------------------------------
// bench

int run_bench(const std::string& file, bool json) {
  System sys = load_system(file);
  Icsp icsp = icp::translate_system(icp::canonicalize(sys));
  auto g = icp::gpa(icsp, icsp.domains, icp::InitSet::all_constraints(),
                    icp::SelectionPolicy::fifo());
  auto p = icp::psi(icsp, icsp.domains);
  if (json) {
    ordered_json j{{"constraints", icsp.constraints.size()},
                   {"gpa", stats_json(icsp, g.stats)},
                   {"psi", stats_json(icsp, p.stats)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("%-28s %10s %10s\n", "", "gpa", "psi");
    std::printf("%-28s %10d %10d\n", "initial active set",
                g.stats.initial_active_set, p.stats.initial_active_set);
    std::printf("%-28s %10ld %10ld\n", "total DRO calls", g.stats.total_dro_calls,
                p.stats.total_dro_calls);
    std::printf("%-28s %10ld %10ld\n", "changed-domain events",
                g.stats.changed_domain_events, p.stats.changed_domain_events);
    for (std::size_t i = 0; i < icsp.constraints.size(); ++i) {
      std::printf("%-28s %10ld %10ld\n",
                  icp::render(icsp.constraints[i], icsp).c_str(),
                  g.stats.activations[i], p.stats.activations[i]);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// minlb

int run_minlb(const std::string& file, const std::string& objective, double precision,
              bool json, SolveFlags f) {
  f.finish();
  System sys = load_system(file);
  System obj_holder;
  try {
    obj_holder = icp::parse_system(objective + " <= 0;");
  } catch (const icp::ParseError& e) {
    throw InputError(std::string("--objective: ") + e.what());
  }
  icp::TermPtr obj = obj_holder.formulas[0].lhs;
  double bound = icp::lower_bound_minimum(obj, sys, precision, f.cfg);
  if (json) {
    ordered_json j{{"objective", render(*obj)},
                   {"precision", precision},
                   {"lower_bound", interval_json(Interval::point(bound))[0]}};
    if (std::isinf(bound)) j["lower_bound"] = "-inf";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "lower bound of " << render(*obj) << " >= "
              << icp::format_double(bound) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interval-propagation solver for nonlinear inequality systems"};
  app.require_subcommand(1);

  std::string file;
  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "compute a guaranteed cover of the solution set");
  solve->add_option("file", file, "input system")->required();
  add_solve_flags(solve, &solve_flags);

  std::string term_sel = "1";
  bool eval_json = false, eval_prop = false;
  auto* eval = app.add_subcommand("eval", "evaluate a formula's left-hand side over the declared box");
  eval->add_option("file", file, "input system")->required();
  eval->add_option("--term", term_sel, "formula index (1-based) or variable name");
  eval->add_flag("--json", eval_json, "machine-readable output");
  eval->add_flag("--propagation", eval_prop,
                 "evaluate by translating and propagating instead of direct interval evaluation");

  std::string engine = "psi";
  bool prop_trace = false, prop_stats = false, prop_json = false;
  auto* propagate = app.add_subcommand("propagate", "propagate the system to its fixpoint box");
  propagate->add_option("file", file, "input system")->required();
  propagate->add_option("--engine", engine, "gpa|psi");
  propagate->add_flag("--trace", prop_trace, "log every DRO application to stderr");
  propagate->add_flag("--stats", prop_stats, "print the activation table");
  propagate->add_flag("--json", prop_json, "machine-readable output");

  bool bench_json = false;
  auto* bench = app.add_subcommand("bench", "compare gpa and psi activation counts");
  bench->add_option("file", file, "input system")->required();
  bench->add_flag("--json", bench_json, "machine-readable output");

  std::string objective;
  double precision = 1e-3;
  SolveFlags minlb_flags;
  auto* minlb = app.add_subcommand("minlb", "verified lower bound on an objective's global minimum");
  minlb->add_option("file", file, "constraint system")->required();
  minlb->add_option("--objective", objective, "objective expression")->required();
  minlb->add_option("--precision", precision, "bisection precision");
  add_solve_flags(minlb, &minlb_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (solve->parsed()) return run_solve(file, solve_flags);
    if (eval->parsed()) return run_eval(file, term_sel, eval_json, eval_prop);
    if (propagate->parsed())
      return run_propagate(file, engine, prop_trace, prop_stats, prop_json);
    if (bench->parsed()) return run_bench(file, bench_json);
    if (minlb->parsed())
      return run_minlb(file, objective, precision, minlb_flags.json, minlb_flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
