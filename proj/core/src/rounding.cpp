#include "rounding.hpp"

#include <cfenv>
#include <cmath>

// The optimizer must not constant-fold or move an operation across the
// fesetround calls.  This TU is compiled with -frounding-math and every
// operand/result is additionally laundered through an opaque register
// barrier, which pins the instruction between the two mode switches.

namespace icp::rnd {
namespace {

inline double opaque(double x) {
#if defined(__GNUC__) || defined(__clang__)
  __asm__ volatile("" : "+x"(x));
#endif
  return x;
}

class ScopedRounding {
 public:
  explicit ScopedRounding(int mode) : saved_(std::fegetround()) {
    std::fesetround(mode);
  }
  ~ScopedRounding() { std::fesetround(saved_); }
  ScopedRounding(const ScopedRounding&) = delete;
  ScopedRounding& operator=(const ScopedRounding&) = delete;

 private:
  int saved_;
};

}  // namespace

double add_down(double a, double b) {
  ScopedRounding mode(FE_DOWNWARD);
  return opaque(opaque(a) + opaque(b));
}

double add_up(double a, double b) {
  ScopedRounding mode(FE_UPWARD);
  return opaque(opaque(a) + opaque(b));
}

double sub_down(double a, double b) {
  ScopedRounding mode(FE_DOWNWARD);
  return opaque(opaque(a) - opaque(b));
}

double sub_up(double a, double b) {
  ScopedRounding mode(FE_UPWARD);
  return opaque(opaque(a) - opaque(b));
}

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  ScopedRounding mode(FE_DOWNWARD);
  return opaque(opaque(a) * opaque(b));
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  ScopedRounding mode(FE_UPWARD);
  return opaque(opaque(a) * opaque(b));
}

double div_down(double a, double b) {
  ScopedRounding mode(FE_DOWNWARD);
  return opaque(opaque(a) / opaque(b));
}

double div_up(double a, double b) {
  ScopedRounding mode(FE_UPWARD);
  return opaque(opaque(a) / opaque(b));
}

double sqrt_down(double a) {
  ScopedRounding mode(FE_DOWNWARD);
  return opaque(std::sqrt(opaque(a)));
}

double sqrt_up(double a) {
  ScopedRounding mode(FE_UPWARD);
  return opaque(std::sqrt(opaque(a)));
}

}  // namespace icp::rnd
