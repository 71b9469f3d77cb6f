// Outward-rounded floating-point interval arithmetic.
//
// An Interval is a closed connected set of reals whose bounds, when they
// exist, are finite doubles; unbounded sides are represented by +-inf.  NaN
// is never a legal bound.  The empty interval is a distinguished value and
// every operation propagates it.  All arithmetic results contain the exact
// set image of their inputs, with each computed bound correctly rounded or
// one representable step outward.

#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>

namespace icp {

class Interval {
 public:
  // Default-constructs the whole real line [-inf, +inf].
  Interval() : lo_(-kInf), hi_(kInf) {}

  // Requires lo <= hi, no NaN, lo != +inf, hi != -inf.
  Interval(double lo, double hi);

  static Interval empty() { return Interval(Tag::kEmpty); }
  static Interval entire() { return Interval(); }
  static Interval point(double v) { return Interval(v, v); }

  bool is_empty() const { return lo_ > hi_; }
  bool is_entire() const { return lo_ == -kInf && hi_ == kInf; }
  bool is_degenerate() const { return lo_ == hi_; }
  bool is_finite() const;

  // Bounds of a non-empty interval.
  double lb() const;
  double rb() const;

  bool contains(double v) const { return !is_empty() && lo_ <= v && v <= hi_; }
  // Superset test: does *this contain every point of other?
  bool contains(const Interval& other) const;

  // Value equality of bounds (zeros are canonicalized, so this coincides
  // with bitwise identity for all legal intervals).
  bool operator==(const Interval& other) const;
  bool operator!=(const Interval& other) const { return !(*this == other); }

  // rb - lb as an extended real; +inf when unbounded, 0 when degenerate.
  double width() const;

  // A finite interior pivot: the arithmetic midpoint for bounded intervals,
  // 0 for [-inf,+inf] and for half-lines with 0 in the interior, otherwise a
  // magnitude-doubling pivot max(2*|finite bound|, 1) toward the open side.
  double midpoint() const;

  // Splits at midpoint() into ([lb,m], [m,rb]).  The halves reunite to the
  // input exactly and are both non-empty.  Throws std::invalid_argument for
  // empty or degenerate intervals.
  std::pair<Interval, Interval> split() const;

  // "[lb,rb]" with -inf/inf for unbounded sides, "empty" for the empty
  // interval; bounds printed with enough digits to round-trip exactly.
  std::string str() const;

 private:
  enum class Tag { kEmpty };
  explicit Interval(Tag) : lo_(kInf), hi_(-kInf) {}

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double lo_, hi_;
};

Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval neg(const Interval& a);
Interval mul(const Interval& a, const Interval& b);

// A set of reals representable as at most two disjoint intervals (the
// relational quotient and the square-root preimage are of this shape).
struct IntervalPair {
  Interval first = Interval::empty();
  Interval second = Interval::empty();
};

// The relational quotient {z : exists x in n, y in d with z*y = x}, exactly:
// two opposite half-lines when d straddles 0 and 0 is outside n.
IntervalPair div_pieces(const Interval& n, const Interval& d);

// Hull of the relational quotient; may be [-inf,+inf] when d straddles 0,
// empty when d = [0,0] and 0 is not in n.
Interval div_hull(const Interval& n, const Interval& d);

// Image {x^2 : x in a}; never extends below 0.
Interval sq(const Interval& a);

// The preimage {x : x^2 in a}: symmetric pieces around 0.
IntervalPair sqrt_pieces(const Interval& a);

// Hull of the preimage {x : x^2 in a}.
Interval sqrt_hull(const Interval& a);

// Contains {sin x : x in a} and is always within [-1,1]; exact up to
// outward rounding for inputs narrower than 2*pi, conservative [-1,1]
// otherwise.
Interval sin_ext(const Interval& a);

// Conservative hull of {v in x : sin v in y}; returns x unchanged when x is
// wider than 2*pi.
Interval sin_preimage(const Interval& y, const Interval& x);

// Exact set intersection; empty when disjoint.
Interval intersect(const Interval& a, const Interval& b);

// Smallest interval containing both arguments.
Interval hull(const Interval& a, const Interval& b);

// Shortest decimal form of a double that parses back to the same value;
// "-inf"/"inf" for infinities.
std::string format_double(double v);

// A box assigns an interval domain to each variable.  A box is empty iff
// any component is empty.
using Box = std::map<std::string, Interval>;

bool box_empty(const Box& box);
std::string box_str(const Box& box);

}  // namespace icp
