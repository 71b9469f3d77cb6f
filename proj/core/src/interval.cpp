#include "icp/interval.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rounding.hpp"

namespace icp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Double enclosures of pi, pi/2 and 2*pi.  The double nearest to pi is
// below the true value, so [v, nextafter(v)] brackets it; halving and
// doubling are exact.
const double kPiLo = 3.141592653589793238462643383279502884;
const double kPiHi = std::nextafter(kPiLo, kInf);
const double kTwoPiLo = 2.0 * kPiLo;
const double kTwoPiHi = std::nextafter(kTwoPiLo, kInf);
const double kPiHalfLo = kPiLo / 2.0;
const double kPiHalfHi = std::nextafter(kPiHalfLo, kInf);

// Beyond this magnitude the integer period index is no longer exactly
// representable enough to locate critical points; fall back to [-1,1].
constexpr double kHugeSinArg = 0x1p45;

double next2_down(double v) {
  return std::nextafter(std::nextafter(v, -kInf), -kInf);
}

double next2_up(double v) { return std::nextafter(std::nextafter(v, kInf), kInf); }

// libm sin/asin are within ~1 ulp; two outward steps give a sound bracket.
Interval sin_point(double x) {
  if (x == 0.0) return Interval::point(0.0);
  double s = std::sin(x);
  return Interval(std::max(-1.0, next2_down(s)), std::min(1.0, next2_up(s)));
}

double asin_lo(double v) { return next2_down(std::asin(v)); }
double asin_hi(double v) { return next2_up(std::asin(v)); }

double min_skip_nan(std::initializer_list<double> vs) {
  double m = kInf;
  bool any = false;
  for (double v : vs) {
    if (std::isnan(v)) continue;
    m = std::min(m, v);
    any = true;
  }
  assert(any);
  return m;
}

double max_skip_nan(std::initializer_list<double> vs) {
  double m = -kInf;
  bool any = false;
  for (double v : vs) {
    if (std::isnan(v)) continue;
    m = std::max(m, v);
    any = true;
  }
  assert(any);
  return m;
}

double canon_zero(double v) { return v == 0.0 ? 0.0 : v; }

}  // namespace

Interval::Interval(double lo, double hi) : lo_(canon_zero(lo)), hi_(canon_zero(hi)) {
  assert(!std::isnan(lo) && !std::isnan(hi));
  assert(lo <= hi);
  assert(lo != kInf && hi != -kInf);
}

bool Interval::is_finite() const {
  return !is_empty() && lo_ != -kInf && hi_ != kInf;
}

double Interval::lb() const {
  assert(!is_empty());
  return lo_;
}

double Interval::rb() const {
  assert(!is_empty());
  return hi_;
}

bool Interval::contains(const Interval& other) const {
  if (other.is_empty()) return true;
  if (is_empty()) return false;
  return lo_ <= other.lo_ && other.hi_ <= hi_;
}

bool Interval::operator==(const Interval& other) const {
  if (is_empty() || other.is_empty()) return is_empty() == other.is_empty();
  return lo_ == other.lo_ && hi_ == other.hi_;
}

double Interval::width() const {
  if (is_empty()) return 0.0;
  return hi_ - lo_;  // +inf when unbounded
}

double Interval::midpoint() const {
  assert(!is_empty());
  if (lo_ == -kInf && hi_ == kInf) return 0.0;
  if (lo_ == -kInf) {
    if (hi_ > 0.0) return 0.0;
    return -std::max(2.0 * std::fabs(hi_), 1.0);
  }
  if (hi_ == kInf) {
    if (lo_ < 0.0) return 0.0;
    return std::max(2.0 * std::fabs(lo_), 1.0);
  }
  return std::midpoint(lo_, hi_);
}

std::pair<Interval, Interval> Interval::split() const {
  if (is_empty() || is_degenerate())
    throw std::invalid_argument("split: interval has no interior");
  double m = midpoint();
  assert(std::isfinite(m));
  return {Interval(lo_, m), Interval(m, hi_)};
}

std::string Interval::str() const {
  if (is_empty()) return "empty";
  return "[" + format_double(lo_) + "," + format_double(hi_) + "]";
}

Interval add(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return Interval(rnd::add_down(a.lb(), b.lb()), rnd::add_up(a.rb(), b.rb()));
}

Interval sub(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return Interval(rnd::sub_down(a.lb(), b.rb()), rnd::sub_up(a.rb(), b.lb()));
}

Interval neg(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  return Interval(-a.rb(), -a.lb());
}

Interval mul(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  double al = a.lb(), ah = a.rb(), bl = b.lb(), bh = b.rb();
  double lo = min_skip_nan({rnd::mul_down(al, bl), rnd::mul_down(al, bh),
                            rnd::mul_down(ah, bl), rnd::mul_down(ah, bh)});
  double hi = max_skip_nan({rnd::mul_up(al, bl), rnd::mul_up(al, bh),
                            rnd::mul_up(ah, bl), rnd::mul_up(ah, bh)});
  return Interval(lo, hi);
}

IntervalPair div_pieces(const Interval& n, const Interval& d) {
  if (n.is_empty() || d.is_empty()) return {};
  double nl = n.lb(), nh = n.rb(), dl = d.lb(), dh = d.rb();
  if (dl == 0.0 && dh == 0.0) {
    // z*0 = x is solvable (by every z) iff 0 is in n.
    return n.contains(0.0) ? IntervalPair{Interval::entire(), Interval::empty()}
                           : IntervalPair{};
  }
  if (dl > 0.0 || dh < 0.0) {
    // Divisor sign is fixed; the quotient is one interval spanned by the
    // corner quotients.  inf/inf corners are limits already covered by a
    // finite corner and are skipped.
    auto q = [](double x, double y, bool down) {
      if (std::isinf(x) && std::isinf(y)) return std::nan("");
      if (x == 0.0) return 0.0;
      return down ? rnd::div_down(x, y) : rnd::div_up(x, y);
    };
    double lo = min_skip_nan(
        {q(nl, dl, true), q(nl, dh, true), q(nh, dl, true), q(nh, dh, true)});
    double hi = max_skip_nan(
        {q(nl, dl, false), q(nl, dh, false), q(nh, dl, false), q(nh, dh, false)});
    return {Interval(lo, hi), Interval::empty()};
  }
  // 0 is interior to d or on one of its edges.
  if (n.contains(0.0)) return {Interval::entire(), Interval::empty()};
  if (nl > 0.0) {
    Interval pos = dh > 0.0 ? Interval(rnd::div_down(nl, dh), kInf) : Interval::empty();
    Interval neg = dl < 0.0 ? Interval(-kInf, rnd::div_up(nl, dl)) : Interval::empty();
    return {neg, pos};
  }
  // n strictly negative
  Interval neg = dh > 0.0 ? Interval(-kInf, rnd::div_up(nh, dh)) : Interval::empty();
  Interval pos = dl < 0.0 ? Interval(rnd::div_down(nh, dl), kInf) : Interval::empty();
  return {neg, pos};
}

Interval div_hull(const Interval& n, const Interval& d) {
  IntervalPair p = div_pieces(n, d);
  return hull(p.first, p.second);
}

Interval sq(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  double al = a.lb(), ah = a.rb();
  double lo;
  if (a.contains(0.0)) {
    lo = 0.0;
  } else if (al > 0.0) {
    lo = rnd::mul_down(al, al);
  } else {
    lo = rnd::mul_down(ah, ah);
  }
  double hi = std::max(rnd::mul_up(al, al), rnd::mul_up(ah, ah));
  return Interval(lo, hi);
}

IntervalPair sqrt_pieces(const Interval& a) {
  if (a.is_empty() || a.rb() < 0.0) return {};
  double hi = a.rb() == kInf ? kInf : rnd::sqrt_up(a.rb());
  double lo = a.lb() <= 0.0 ? 0.0 : rnd::sqrt_down(a.lb());
  if (lo == 0.0) return {Interval(-hi, hi), Interval::empty()};
  return {Interval(-hi, -lo), Interval(lo, hi)};
}

Interval sqrt_hull(const Interval& a) {
  IntervalPair p = sqrt_pieces(a);
  return hull(p.first, p.second);
}

Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  double lo = std::max(a.lb(), b.lb());
  double hi = std::min(a.rb(), b.rb());
  if (lo > hi) return Interval::empty();
  return Interval(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return Interval(std::min(a.lb(), b.lb()), std::max(a.rb(), b.rb()));
}

namespace {

// Enclosure of 2*k*pi + offs (ascending-branch anchor) or (2k+1)*pi - offs
// is built from interval products so the direction of every rounding is
// handled uniformly.
Interval period_anchor(double two_k, const Interval& offs) {
  Interval pi_enc(kPiLo, kPiHi);
  return add(mul(Interval::point(two_k), pi_enc), offs);
}

// Does [a,b] possibly contain a point congruent to offs (mod 2*pi)?
// Errs toward "yes", which only widens the sine image.
bool maybe_contains_phase(const Interval& x, const Interval& offs) {
  double a = x.lb(), b = x.rb();
  double k0 = std::floor((a - offs.rb()) / kTwoPiLo);
  for (int i = -1; i <= 3; ++i) {
    double two_k = 2.0 * (k0 + i);
    Interval m = period_anchor(two_k, offs);
    if (m.lb() <= b && m.rb() >= a) return true;
  }
  return false;
}

}  // namespace

Interval sin_ext(const Interval& a) {
  if (a.is_empty()) return Interval::empty();
  const Interval whole(-1.0, 1.0);
  double lo = a.lb(), hi = a.rb();
  if (!std::isfinite(lo) || !std::isfinite(hi)) return whole;
  if (std::fabs(lo) > kHugeSinArg || std::fabs(hi) > kHugeSinArg) return whole;
  if (hi - lo >= kTwoPiLo) return whole;
  if (lo == hi) return sin_point(lo);

  Interval pi_half(kPiHalfLo, kPiHalfHi);
  bool has_max = maybe_contains_phase(a, pi_half);
  bool has_min = maybe_contains_phase(a, neg(pi_half));
  if (has_max && has_min) return whole;

  Interval sa = sin_point(lo);
  Interval sb = sin_point(hi);
  double out_lo = has_min ? -1.0 : std::min(sa.lb(), sb.lb());
  double out_hi = has_max ? 1.0 : std::max(sa.rb(), sb.rb());
  return intersect(Interval(out_lo, out_hi), whole);
}

Interval sin_preimage(const Interval& y, const Interval& x) {
  if (x.is_empty()) return Interval::empty();
  Interval yc = intersect(y, Interval(-1.0, 1.0));
  if (yc.is_empty()) return Interval::empty();
  double xl = x.lb(), xh = x.rb();
  if (!std::isfinite(xl) || !std::isfinite(xh)) return x;
  if (std::fabs(xl) > kHugeSinArg || std::fabs(xh) > kHugeSinArg) return x;
  if (xh - xl >= kTwoPiLo) return x;

  // On each period the preimage has an ascending branch 2k*pi + [asin lo,
  // asin hi] and a descending branch (2k+1)*pi - [asin lo, asin hi].
  Interval arc(asin_lo(yc.lb()), asin_hi(yc.rb()));
  double k0 = std::floor(xl / kTwoPiLo) - 1.0;
  double k1 = std::ceil(xh / kTwoPiLo) + 1.0;
  Interval acc = Interval::empty();
  for (double k = k0; k <= k1; k += 1.0) {
    Interval up = period_anchor(2.0 * k, arc);
    Interval down = sub(period_anchor(2.0 * k + 1.0, Interval::point(0.0)), arc);
    acc = hull(acc, intersect(up, x));
    acc = hull(acc, intersect(down, x));
  }
  return acc;
}

std::string format_double(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

bool box_empty(const Box& box) {
  for (const auto& [name, dom] : box) {
    if (dom.is_empty()) return true;
  }
  return false;
}

std::string box_str(const Box& box) {
  std::string out;
  for (const auto& [name, dom] : box) {
    out += name + " in " + dom.str() + "\n";
  }
  return out;
}

}  // namespace icp
