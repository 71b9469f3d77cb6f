// Directed-rounding scalar kernels used by the interval layer.
//
// Each function computes one floating-point operation with the FPU rounding
// mode forced toward -inf or +inf, so the result is the correctly rounded
// lower/upper bound of the exact real result.  Operations that are exact in
// binary floating point (e.g. 1+3) are unaffected by the mode and stay exact.

#pragma once

namespace icp::rnd {

double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);

// 0 * +-inf is defined as 0 (set-image convention); never NaN.
double mul_down(double a, double b);
double mul_up(double a, double b);

// Caller must not request inf/inf or x/0; those cases are resolved
// structurally before reaching the scalar kernel.
double div_down(double a, double b);
double div_up(double a, double b);

double sqrt_down(double a);
double sqrt_up(double a);

}  // namespace icp::rnd
