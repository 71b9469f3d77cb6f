// Acceptance suite: every criterion runs at its stated tolerance and prints
// one PASS/FAIL line.  The process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "icp/eval.hpp"
#include "icp/icsp.hpp"
#include "icp/propagate.hpp"
#include "icp/search.hpp"
#include "support/test_support.hpp"

using namespace icp;
using namespace icp::testsupport;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

bool same_outcome(const PropagationOutcome& a, const PropagationOutcome& b) {
  if (a.consistent != b.consistent) return false;
  if (!a.consistent) return true;
  for (std::size_t i = 0; i < a.domains.size(); ++i)
    if (!(a.domains[i] == b.domains[i])) return false;
  return true;
}

const PropagationLimits kProbe{50000};

bool settles(const Icsp& icsp, const std::vector<Interval>& start) {
  try {
    gpa(icsp, start, InitSet::all_constraints(), SelectionPolicy::fifo(), {}, kProbe);
    return true;
  } catch (const std::runtime_error&) {
    return false;
  }
}

std::vector<Interval> randomize_domains(Rng& rng, const Icsp& icsp, bool finite_users) {
  std::vector<Interval> d = icsp.domains;
  for (std::size_t i = 0; i < icsp.vars.size(); ++i) {
    if (icsp.vars[i].kind != VarKind::User) continue;
    if (finite_users) {
      d[i] = rand_finite_interval(rng, 6.0);
    } else if (rng() % 3 != 0) {
      d[i] = rand_interval(rng, 6.0);
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// 1. On bare terms, psi activates each constraint at most once and
//    reproduces interval evaluation bit for bit.

Check criterion1() {
  Check c;
  Rng rng(101);
  for (int i = 0; i < 500; ++i) {
    auto vars = var_names(1 + static_cast<int>(rng() % 8));
    TermPtr t = rand_term(rng, 1 + static_cast<int>(rng() % 6), vars);
    Box env = rand_box_for(rng, vars, 5.0, /*allow_infinite=*/false);
    Icsp icsp = translate_term(t, env);
    PropagationOutcome out = psi(icsp);
    long total = 0;
    for (long n : out.stats.activations) {
      c.expect(n <= 1, "a constraint was selected more than once");
      total += n;
    }
    c.expect(total <= static_cast<long>(icsp.constraints.size()),
             "more activations than constraints");
    Interval direct = eval_term(t, env);
    Interval propagated = out.consistent ? out.domains[icsp.root] : Interval::empty();
    c.expect(propagated == direct, "root domain differs from interval evaluation");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 2. psi and gpa(all constraints, FIFO) reach the same box bit for bit on
//    translated formulas.

Check criterion2() {
  Check c;
  Rng rng(102);
  int done = 0;
  while (done < 200) {
    auto vars = var_names(1 + static_cast<int>(rng() % 5));
    TermPtr t = rand_term(rng, 1 + static_cast<int>(rng() % 5), vars);
    System sys;
    sys.formulas.push_back({t});
    Icsp icsp = translate(sys.formulas[0], Box{});
    std::vector<Interval> start = randomize_domains(rng, icsp, false);
    if (!settles(icsp, start)) continue;
    auto a = psi(icsp, start, {}, kProbe);
    auto b = gpa(icsp, start, InitSet::all_constraints(), SelectionPolicy::fifo(), {}, kProbe);
    c.expect(same_outcome(a, b), "psi and gpa boxes differ");
    ++done;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 3. Confluence: five fair selection orders, identical fixpoints.

Check criterion3() {
  Check c;
  Rng rng(103);
  int done = 0;
  while (done < 200) {
    auto vars = var_names(1 + static_cast<int>(rng() % 5));
    TermPtr t = rand_term(rng, 1 + static_cast<int>(rng() % 5), vars);
    System sys;
    sys.formulas.push_back({t});
    Icsp icsp = translate(sys.formulas[0], Box{});
    std::vector<Interval> start = randomize_domains(rng, icsp, false);
    if (!settles(icsp, start)) continue;
    auto base = gpa(icsp, start, InitSet::all_constraints(), SelectionPolicy::fifo(), {}, kProbe);
    for (SelectionPolicy pol :
         {SelectionPolicy::depth_priority(), SelectionPolicy::lifo(),
          SelectionPolicy::random(1000 + done), SelectionPolicy::random(99991 + done)}) {
      auto out = gpa(icsp, start, InitSet::all_constraints(), pol, {}, kProbe);
      c.expect(same_outcome(base, out), "selection order changed the fixpoint");
    }
    ++done;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 4. Selective re-initialization after a proper shrink equals a full
//    re-run.

Check criterion4() {
  Check c;
  Rng rng(104);
  int done = 0;
  while (done < 200) {
    auto vars = var_names(1 + static_cast<int>(rng() % 5));
    TermPtr t = rand_term(rng, 1 + static_cast<int>(rng() % 5), vars);
    System sys;
    sys.formulas.push_back({t});
    Icsp icsp = translate(sys.formulas[0], Box{});
    std::vector<Interval> start = randomize_domains(rng, icsp, false);
    if (!settles(icsp, start)) continue;
    auto fix = gpa(icsp, start, InitSet::all_constraints(), SelectionPolicy::fifo(), {}, kProbe);
    if (!fix.consistent) continue;
    std::vector<VarId> candidates;
    for (std::size_t v = 0; v < fix.domains.size(); ++v)
      if (!fix.domains[v].is_degenerate()) candidates.push_back(static_cast<VarId>(v));
    if (candidates.empty()) continue;
    VarId v = candidates[rng() % candidates.size()];
    auto [a, b] = fix.domains[v].split();
    Interval shrunk = rng() % 2 ? a : b;
    if (shrunk == fix.domains[v]) continue;
    std::vector<Interval> full_start = fix.domains;
    full_start[v] = shrunk;
    if (!settles(icsp, full_start)) continue;
    auto selective = repropagate(icsp, fix.domains, v, shrunk, {}, kProbe);
    auto full = gpa(icsp, full_start, InitSet::all_constraints(), SelectionPolicy::fifo(), {}, kProbe);
    c.expect(same_outcome(selective, full),
             "selective re-initialization differs from a full re-run");
    ++done;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 5. Worked example: the quadratic inequality translates to exactly the six
//    expected constraints (golden file), and seed detection reproduces the
//    three sine configurations.

Check criterion5() {
  Check c;
  {
    System sys = parse_system("x^2 + x*y - y^2 <= 0;");
    Box domains{{"x", Interval::entire()}, {"y", Interval::entire()}};
    Icsp icsp = translate(sys.formulas[0], domains);
    c.expect(icsp.constraints.size() == 6, "expected exactly 6 constraints");
    int sums = 0, sqs = 0, prods = 0, leqs = 0;
    for (const auto& k : icsp.constraints) {
      sums += k.kind == ConstraintKind::Sum;
      sqs += k.kind == ConstraintKind::Sq;
      prods += k.kind == ConstraintKind::Prod;
      leqs += k.kind == ConstraintKind::LeqZero;
    }
    c.expect(sums == 2 && sqs == 2 && prods == 1 && leqs == 1,
             "constraint kinds do not match {leq0, sum, sq, sum, prod, sq}");
    std::ifstream golden(std::string(TESTS_DATA_DIR) + "/eq3_icsp.golden");
    std::ostringstream ss;
    ss << golden.rdbuf();
    c.expect(render(icsp) == ss.str(), "golden rendering mismatch");
  }
  {
    System sys = parse_system("sin(x1) + sin(x2) <= 0;");
    Icsp icsp = translate(sys.formulas[0],
                          Box{{"x1", Interval::entire()}, {"x2", Interval::entire()}});
    VarId x1 = icsp.find_var("x1");
    VarId u = -1, v = -1;
    int sum_idx = -1;
    std::vector<int> sin_idx;
    for (std::size_t i = 0; i < icsp.constraints.size(); ++i) {
      const Constraint& k = icsp.constraints[i];
      if (k.kind == ConstraintKind::Sin) {
        sin_idx.push_back(static_cast<int>(i));
        (k.args[0] == x1 ? u : v) = k.args[1];
      }
      if (k.kind == ConstraintKind::Sum) sum_idx = static_cast<int>(i);
    }
    auto seed_set = [&](const std::vector<Interval>& d) {
      std::vector<int> s;
      for (std::size_t i = 0; i < icsp.constraints.size(); ++i) {
        if (icsp.constraints[i].kind == ConstraintKind::LeqZero) continue;
        if (is_seed(icsp.constraints[i], d)) s.push_back(static_cast<int>(i));
      }
      return s;
    };
    std::vector<Interval> d0(icsp.vars.size(), Interval::entire());
    c.expect(seed_set(d0) == sin_idx, "all-unbounded seeds are not the two sines");

    std::vector<Interval> d1 = d0;
    d1[u] = Interval(-1, 1);
    d1[v] = Interval(-1, 1);
    c.expect(seed_set(d1) == std::vector<int>{sum_idx},
             "u,v at [-1,1] should seed only the sum");

    std::vector<Interval> d2 = d1;
    d2[x1] = Interval(-1, 1);
    std::vector<int> expected{std::min(sum_idx, sin_idx[0])};
    expected.push_back(std::max(sum_idx, sin_idx[0]));
    c.expect(seed_set(d2) == expected, "x1 narrowing should add sin(x1) to the seeds");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 6. DRO optimality against a 512-cell brute-force hull, plus zero excluded
//    exactly-consistent samples.

namespace oracle {

// Scan the cells of `axis_dom` from one end; a cell is flagged when some
// witness cell makes the relation possible, which (by continuity of the
// corner-range test) guarantees a truly consistent point inside it.  The
// flagged hull therefore brackets the true consistent hull within one cell.
constexpr int kGrid = 512;

struct Flagged {
  bool any = false;
  double lo = 0, hi = 0;
};

template <typename PossibleFn>
Flagged scan(const Interval& axis_dom, PossibleFn possible) {
  double a = axis_dom.lb(), w = axis_dom.width();
  if (w == 0.0) {
    if (possible(a, a)) return {true, a, a};
    return {};
  }
  auto cell = [&](int i) {
    double lo = a + w * i / kGrid;
    double hi = a + w * (i + 1) / kGrid;
    return std::pair<double, double>(lo, hi);
  };
  int first = -1, last = -1;
  for (int i = 0; i < kGrid && first < 0; ++i) {
    auto [lo, hi] = cell(i);
    if (possible(lo, hi)) first = i;
  }
  if (first < 0) return {};
  for (int i = kGrid - 1; i >= 0 && last < 0; --i) {
    auto [lo, hi] = cell(i);
    if (possible(lo, hi)) last = i;
  }
  return {true, cell(first).first, cell(last).second};
}

bool range_meets(double lo, double hi, const Interval& z) {
  return hi >= z.lb() && lo <= z.rb();
}

// Product range over a cell pair: corner extremes.
std::pair<double, double> prod_range(double x0, double x1, double y0, double y1) {
  double c1 = x0 * y0, c2 = x0 * y1, c3 = x1 * y0, c4 = x1 * y1;
  return {std::min(std::min(c1, c2), std::min(c3, c4)),
          std::max(std::max(c1, c2), std::max(c3, c4))};
}

std::pair<double, double> sq_range(double x0, double x1) {
  double m = std::max(x0 * x0, x1 * x1);
  double lo = (x0 <= 0.0 && 0.0 <= x1) ? 0.0 : std::min(x0 * x0, x1 * x1);
  return {lo, m};
}

template <typename CellRel>
Flagged scan_with_witness(const Interval& axis, const Interval& witness, CellRel rel) {
  return scan(axis, [&](double a0, double a1) {
    double b = witness.lb(), wb = witness.width();
    if (wb == 0.0) return rel(a0, a1, b, b);
    for (int j = 0; j < kGrid; ++j) {
      double b0 = b + wb * j / kGrid;
      double b1 = b + wb * (j + 1) / kGrid;
      if (rel(a0, a1, b0, b1)) return true;
    }
    return false;
  });
}

}  // namespace oracle

Check criterion6() {
  Check c;
  Rng rng(106);
  auto step = [](const Interval& iv) { return iv.width() / oracle::kGrid; };

  auto compare = [&](const Interval& ours, const oracle::Flagged& hull, double st,
                     const char* what) {
    double guard = 1e-7 * (1.0 + std::fabs(hull.any ? hull.lo : 0.0)) + 1e-12;
    if (!hull.any || ours.is_empty()) {
      // at most a one-cell sliver may separate an empty side from the other
      if (hull.any) c.expect(hull.hi - hull.lo <= 2 * st + guard, what);
      if (!ours.is_empty()) c.expect(ours.width() <= 2 * st + guard, what);
      return;
    }
    c.expect(std::fabs(ours.lb() - hull.lo) <= st + guard, what);
    c.expect(std::fabs(ours.rb() - hull.hi) <= st + guard, what);
  };

  auto rand_box3 = [&](double lo_w, double hi_w) {
    std::vector<Interval> d;
    for (int i = 0; i < 3; ++i) {
      double w = rand_double(rng, lo_w, hi_w);
      double c0 = rand_double(rng, -15, 15);
      d.push_back(Interval(c0 - w / 2, c0 + w / 2));
    }
    return d;
  };

  for (int rep = 0; rep < 250; ++rep) {
    // Sum
    {
      auto d = rand_box3(4.0, 8.0);
      Constraint k{ConstraintKind::Sum, {0, 1, 2}, 0, ""};
      auto out = dro_apply(k, d);
      auto relx = [&](double a0, double a1, double b0, double b1) {
        return oracle::range_meets(a0 + b0, a1 + b1, d[2]);
      };
      compare(out[0], oracle::scan_with_witness(d[0], d[1], relx), step(d[0]), "sum x");
      compare(out[1], oracle::scan_with_witness(d[1], d[0], relx), step(d[1]), "sum y");
      auto relz = [&](double z0, double z1, double b0, double b1) {
        return oracle::range_meets(d[0].lb() + b0, d[0].rb() + b1, Interval(z0, z1));
      };
      compare(out[2], oracle::scan_with_witness(d[2], d[1], relz), step(d[2]), "sum z");
    }
    // Prod
    {
      auto d = rand_box3(4.0, 8.0);
      Constraint k{ConstraintKind::Prod, {0, 1, 2}, 0, ""};
      auto out = dro_apply(k, d);
      auto relx = [&](double a0, double a1, double b0, double b1) {
        auto [lo, hi] = oracle::prod_range(a0, a1, b0, b1);
        return oracle::range_meets(lo, hi, d[2]);
      };
      compare(out[0], oracle::scan_with_witness(d[0], d[1], relx), step(d[0]), "prod x");
      auto rely = [&](double a0, double a1, double b0, double b1) {
        auto [lo, hi] = oracle::prod_range(b0, b1, a0, a1);
        return oracle::range_meets(lo, hi, d[2]);
      };
      compare(out[1], oracle::scan_with_witness(d[1], d[0], rely), step(d[1]), "prod y");
      auto relz = [&](double z0, double z1, double b0, double b1) {
        auto [lo, hi] = oracle::prod_range(d[0].lb(), d[0].rb(), b0, b1);
        return oracle::range_meets(lo, hi, Interval(z0, z1));
      };
      compare(out[2], oracle::scan_with_witness(d[2], d[1], relz), step(d[2]), "prod z");
    }
    // Sq
    {
      auto d = rand_box3(4.0, 8.0);
      d.resize(2);
      Constraint k{ConstraintKind::Sq, {0, 1}, 0, ""};
      auto out = dro_apply(k, d);
      auto hull_x = oracle::scan(d[0], [&](double x0, double x1) {
        auto [lo, hi] = oracle::sq_range(x0, x1);
        return oracle::range_meets(lo, hi, d[1]);
      });
      compare(out[0], hull_x, step(d[0]), "sq x");
      auto hull_y = oracle::scan(d[1], [&](double y0, double y1) {
        if (y1 < 0) return false;
        auto [lo, hi] = oracle::sq_range(d[0].lb(), d[0].rb());
        return oracle::range_meets(lo, hi, Interval(y0, y1));
      });
      compare(out[1], hull_y, step(d[1]), "sq y");
    }
    // Neg
    {
      auto d = rand_box3(4.0, 8.0);
      d.resize(2);
      Constraint k{ConstraintKind::Neg, {0, 1}, 0, ""};
      auto out = dro_apply(k, d);
      auto hull_x = oracle::scan(d[0], [&](double x0, double x1) {
        return oracle::range_meets(-x1, -x0, d[1]);
      });
      compare(out[0], hull_x, step(d[0]), "neg x");
      auto hull_y = oracle::scan(d[1], [&](double y0, double y1) {
        return oracle::range_meets(-y1, -y0, d[0]);
      });
      compare(out[1], hull_y, step(d[1]), "neg y");
    }
    // LeqZero
    {
      auto d = rand_box3(4.0, 8.0);
      d.resize(1);
      Constraint k{ConstraintKind::LeqZero, {0}, 0, ""};
      auto out = dro_apply(k, d);
      auto hull_y = oracle::scan(d[0], [&](double y0, double y1) { return y0 <= 0.0; });
      compare(out[0], hull_y, step(d[0]), "leq0 y");
    }
  }

  // 1e5 exactly-consistent samples, none excluded
  long kept = 0, violations = 0;
  auto trunc26 = [](double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    int e;
    double m = std::frexp(v, &e);
    m = std::round(m * 67108864.0) / 67108864.0;
    return std::ldexp(m, e);
  };
  while (kept < 100000) {
    Interval X = rand_finite_interval(rng), Y = rand_finite_interval(rng);
    double x = rand_point_in(rng, X), y = rand_point_in(rng, Y);
    double z = x + y;
    double bb = z - x, err = (x - (z - bb)) + (y - bb);
    if (err == 0.0) {
      Interval Z(z - 1e-2 - std::fabs(z) * 1e-3, z + 1e-2 + std::fabs(z) * 1e-3);
      Constraint k{ConstraintKind::Sum, {0, 1, 2}, 0, ""};
      auto out = dro_apply(k, {X, Y, Z});
      violations += !(out[0].contains(x) && out[1].contains(y) && out[2].contains(z));
      ++kept;
    }
    double xt = trunc26(x), yt = trunc26(y);
    if (X.contains(xt) && Y.contains(yt)) {
      double z2 = xt * yt;
      Interval Z(z2 - 1e-2 - std::fabs(z2) * 1e-3, z2 + 1e-2 + std::fabs(z2) * 1e-3);
      Constraint k{ConstraintKind::Prod, {0, 1, 2}, 0, ""};
      auto out = dro_apply(k, {X, Y, Z});
      violations += !(out[0].contains(xt) && out[1].contains(yt) && out[2].contains(z2));
      ++kept;
      Constraint ksq{ConstraintKind::Sq, {0, 1}, 0, ""};
      Interval Ysq(0, xt * xt + 1.0);
      auto out2 = dro_apply(ksq, {X, Ysq});
      violations += !(out2[0].contains(xt) && out2[1].contains(xt * xt));
      ++kept;
      Constraint kneg{ConstraintKind::Neg, {0, 1}, 0, ""};
      Interval Yneg(-X.rb() - 1.0, -X.lb() + 1.0);
      auto out3 = dro_apply(kneg, {X, Yneg});
      violations += !(out3[0].contains(x) && out3[1].contains(-x));
      ++kept;
    }
  }
  c.expect(violations == 0, "an exactly-consistent sample was excluded");
  return c;
}

// ---------------------------------------------------------------------------
// 7. Box consistency narrows x^2 = 1 on [0,10] to 1 within 1e-7.

Check criterion7() {
  Check c;
  System sys = parse_system("var x in [0,10]; x^2 - 1 <= 0; 1 - x^2 <= 0;");
  SearchContext ctx = SearchContext::make(sys);
  SolveConfig cfg;
  cfg.bc_tolerance = 1e-8;

  Interval functional, relational;
  for (BcMethod m : {BcMethod::Functional, BcMethod::Relational}) {
    cfg.bc_method = m;
    Box out = box_consistency_pass(ctx, initial_box(sys), cfg);
    c.expect(!box_empty(out), "box consistency emptied a feasible box");
    if (box_empty(out)) return c;
    Interval x = out.at("x");
    c.expect(x.lb() >= 1.0 - 1e-7 && x.lb() <= 1.0, "left bound not within 1e-7 of 1");
    c.expect(x.rb() <= 1.0 + 1e-7 && x.rb() >= 1.0, "right bound not within 1e-7 of 1");
    (m == BcMethod::Functional ? functional : relational) = x;
  }
  c.expect(relational.width() <= functional.width() + 1e-12,
           "relational narrowing looser than functional");
  return c;
}

// ---------------------------------------------------------------------------
// 8. Unit-disc cover at min_width 0.25, cross-checked against a grid
//    classifier at the same resolution.

Check criterion8() {
  Check c;
  System sys = parse_system(
      "var x in [-2,2]; var y in [-2,2];\n"
      "x^2 + y^2 - 1 <= 0;\n");
  SolveConfig cfg;
  cfg.min_width = 0.25;
  Cover cover = solve_system(sys, cfg);

  auto area = [](const std::vector<Box>& boxes) {
    double s = 0;
    for (const auto& b : boxes) s += b.at("x").width() * b.at("y").width();
    return s;
  };
  double proven = area(cover.proven);
  double total = proven + area(cover.indeterminate);

  // grid classifier at the same 0.25 resolution
  double grid_inner = 0, grid_outer = 0;
  const int n = 16;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double x0 = -2 + 4.0 * i / n, x1 = -2 + 4.0 * (i + 1) / n;
      double y0 = -2 + 4.0 * j / n, y1 = -2 + 4.0 * (j + 1) / n;
      double fx = std::max(x0 * x0, x1 * x1), fy = std::max(y0 * y0, y1 * y1);
      double nx = (x0 <= 0 && 0 <= x1) ? 0 : std::min(x0 * x0, x1 * x1);
      double ny = (y0 <= 0 && 0 <= y1) ? 0 : std::min(y0 * y0, y1 * y1);
      double cell = (x1 - x0) * (y1 - y0);
      if (fx + fy <= 1.0) grid_inner += cell;
      if (nx + ny <= 1.0) grid_outer += cell;
    }
  }
  c.expect(grid_inner <= kPi && kPi <= grid_outer, "grid classifier sanity");
  c.expect(proven >= 2.0, "proven area below 2.0");
  c.expect(proven <= kPi + 1e-9, "proven area exceeds the disc");
  c.expect(total >= kPi - 1e-9, "cover area below the disc area");
  c.expect(total <= kPi + 0.9, "cover area more than 0.9 above pi");
  c.expect(total <= grid_outer + 1e-9, "cover exceeds the grid outer area");

  Rng rng(108);
  long excluded = 0;
  for (int s = 0; s < 10000; ++s) {
    double x = rand_double(rng, -2, 2), y = rand_double(rng, -2, 2);
    if (x * x + y * y > 1.0 - 1e-12) continue;
    bool covered = false;
    auto in_box = [&](const Box& b) {
      return b.at("x").contains(x) && b.at("y").contains(y);
    };
    for (const auto& b : cover.proven) covered |= in_box(b);
    for (const auto& b : cover.indeterminate) covered |= in_box(b);
    excluded += !covered;
  }
  c.expect(excluded == 0, "a sampled solution fell outside the cover");
  return c;
}

// ---------------------------------------------------------------------------
// 9. Verified lower bounds on global minima.

Check criterion9() {
  Check c;
  // each instance must finish within 30 seconds on its own
  auto timed = [&](const std::function<void()>& fn, const char* what) {
    auto start = std::chrono::steady_clock::now();
    fn();
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 30.0, std::string(what) + " over its 30 s limit");
  };
  timed(
      [&] {
        System sys = parse_system("var x in [-2,2]; var y in [-2,2]; x + y = 1;");
        TermPtr obj =
            Term::apply(Symbol::Add, {Term::apply(Symbol::Sq, {Term::variable("x")}),
                                      Term::apply(Symbol::Sq, {Term::variable("y")})});
        double lb = lower_bound_minimum(obj, sys, 1e-3);
        c.expect(lb <= 0.5, "bound exceeds the true minimum 0.5");
        c.expect(lb >= 0.5 - 1e-2, "bound more than 1e-2 below the true minimum");
      },
      "constrained quadratic");
  timed(
      [&] {
        System sys = parse_system("var x in [-1,1];");
        double lb = lower_bound_minimum(Term::apply(Symbol::Sq, {Term::variable("x")}),
                                        sys, 1e-3);
        c.expect(lb <= 0.0, "bound exceeds the true minimum 0");
        c.expect(lb >= -1e-3, "bound more than 1e-3 below 0");
      },
      "unconstrained quadratic");
  return c;
}

// ---------------------------------------------------------------------------
// 10. Soundness fuzzing over random systems.

Check criterion10() {
  Check c;
  Rng rng(110);
  int systems = 0;
  while (systems < 100) {
    System sys = rand_system(rng, 1 + static_cast<int>(rng() % 3),
                             1 + static_cast<int>(rng() % 3), 2);
    SolveConfig cfg;
    cfg.min_width = 0.05;
    cfg.max_boxes = 3000;
    Cover cover;
    try {
      cover = solve_system(sys, cfg);
    } catch (const std::runtime_error&) {
      continue;
    }
    ++systems;
    auto vars = sys.variable_order();
    for (int s = 0; s < 10000; ++s) {
      Box pt;
      std::map<std::string, long double> env;
      for (const auto& v : vars) {
        double x = rand_point_in(rng, sys.domain(v));
        pt[v] = Interval::point(x);
        env[v] = x;
      }
      bool satisfied = true;
      bool near_boundary = false;
      for (const auto& f : sys.formulas) {
        long double g = eval_ld(*f.lhs, env);
        if (std::isnan(static_cast<double>(g)) || g > 0.0L) satisfied = false;
        if (g > -1e-9L) near_boundary = true;
      }
      if (satisfied && !near_boundary) {
        bool covered = false;
        auto in_box = [&](const Box& b) {
          for (const auto& [name, iv] : pt)
            if (!b.at(name).contains(iv.lb())) return false;
          return true;
        };
        for (const auto& b : cover.proven) covered |= in_box(b);
        for (const auto& b : cover.indeterminate) covered |= in_box(b);
        if (!covered) {
          c.fail("a solution point fell outside the cover");
          return c;
        }
      }
    }
    // sampled points of proven boxes satisfy every inequality
    for (const auto& b : cover.proven) {
      for (int s = 0; s < 20; ++s) {
        std::map<std::string, long double> env;
        for (const auto& v : vars) env[v] = rand_point_in(rng, b.at(v));
        for (const auto& f : sys.formulas) {
          long double g = eval_ld(*f.lhs, env);
          if (std::isnan(static_cast<double>(g)) || g > 1e-9L) {
            c.fail("a point of a proven box violates a constraint");
            return c;
          }
        }
      }
    }
  }
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 = none
  std::function<Check()> fn;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "operation count and evaluation equality on bare terms", 10.0, criterion1},
      {2, "psi == gpa(all, fifo) on translated formulas", 10.0, criterion2},
      {3, "confluence across five fair selection orders", 10.0, criterion3},
      {4, "selective re-initialization == full re-run", 10.0, criterion4},
      {5, "worked translation golden and seed configurations", 0.0, criterion5},
      {6, "DRO optimality at 512-cell oracle resolution", 0.0, criterion6},
      {7, "box consistency pins x^2 = 1 within 1e-7", 1.0, criterion7},
      {8, "unit-disc cover areas and sampled coverage", 5.0, criterion8},
      {9, "verified lower bounds on global minima", 0.0, criterion9},
      {10, "soundness fuzzing over random systems", 0.0, criterion10},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    auto start = std::chrono::steady_clock::now();
    Check result = cr.fn();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = cr.time_limit == 0.0 || secs <= cr.time_limit;
    bool ok = result.ok && in_time;
    std::printf("%s  criterion %2d: %-55s (%.2fs%s)\n", ok ? "PASS" : "FAIL", cr.id,
                cr.name, secs, in_time ? "" : ", over time limit");
    if (!result.ok) std::printf("      %s\n", result.detail.c_str());
    failed += !ok;
  }
  if (failed) std::printf("%d criterion(s) failed\n", failed);
  return failed == 0 ? 0 : 1;
}
