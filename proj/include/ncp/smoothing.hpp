#pragma once

#include <vector>

namespace ncp {

/// Smoothing kernel family. Both kernels are built from a nondecreasing
/// concave generator theta with theta(0) = 0 and theta(t) -> 1 as t -> +inf:
///
///   Rational:     theta(t) = t/(t+1)   (t >= 0),  theta(t) = t  (t < 0)
///   Exponential:  theta(t) = 1 - exp(-t)
///
/// psi = 1 - theta. The coupled kernel
///
///   G_r(s, t) = r * psi_inv( psi(s/r) + psi(t/r) ),   r > 0,
///
/// is a smooth surrogate for min(s, t): G_r <= min(s, t) always, and
/// G_r -> min as r -> 0 for the exponential kernel (for the rational one the
/// limit is s*t/(s+t) when both arguments are positive, and 0 iff min = 0).
enum class ThetaKernel { Rational, Exponential };

/// Partial derivatives of G_r with respect to its two arguments and r.
struct KernelDerivatives {
  double d_s = 0.0;
  double d_t = 0.0;
  double d_r = 0.0;
};

/// theta(t). Throws std::domain_error on non-finite input.
double theta(ThetaKernel kernel, double t);

/// psi(t) = 1 - theta(t).
double psi(ThetaKernel kernel, double t);

/// Inverse of psi on (0, +inf). Rational: 1/y - 1 for y in (0, 1], 1 - y for
/// y >= 1 (both branches vanish at y = 1). Exponential: -log(y).
/// Throws std::domain_error for y <= 0 or non-finite y.
double psi_inv(ThetaKernel kernel, double y);

/// G_r(s, t) through the generic psi composition. For the exponential kernel
/// this is evaluated through the shifted form (identical in exact arithmetic,
/// overflow-safe in floating point). Throws std::domain_error for r <= 0.
double g_generic(ThetaKernel kernel, double s, double t, double r);

/// Closed form of the rational kernel: (s*t - r^2) / (s + t + 2r).
/// Coincides with g_generic(Rational, ...) whenever s, t >= 0 and s*t >= r^2.
/// If |s + t + 2r| falls below the floor 1e-300 the denominator is clamped
/// sign-preservingly and *clamped (when non-null) is set.
double g1_closed(double s, double t, double r, bool* clamped = nullptr);

/// Exponential kernel: -r * log(exp(-s/r) + exp(-t/r)), evaluated as
/// min(s,t) - r*log1p(exp(-|s-t|/r)). Satisfies
/// min(s,t) - r*log(2) <= result <= min(s,t). Throws for r <= 0.
double g2_stable(double s, double t, double r);

/// Partials of g1_closed: d_s = ((t+r)/(s+t+2r))^2, d_t = ((s+r)/(s+t+2r))^2,
/// d_r = -2r/(s+t+2r) + 2(r^2 - s*t)/(s+t+2r)^2. Same denominator floor as
/// g1_closed.
KernelDerivatives g1_derivatives(double s, double t, double r,
                                 bool* clamped = nullptr);

/// Partials of g2_stable: softmin weights d_s + d_t = 1 and
/// d_r = (G - s*d_s - t*d_t)/r, all evaluated through the shifted form.
KernelDerivatives g2_derivatives(double s, double t, double r);

/// Kernel dispatch used by the solver Jacobian. The rational kernel always
/// goes through the closed form (the Jacobian entries are derived from it).
double g_value(ThetaKernel kernel, double s, double t, double r,
               bool* clamped = nullptr);
KernelDerivatives g_derivatives(ThetaKernel kernel, double s, double t,
                                double r, bool* clamped = nullptr);

/// Checks psi(s) <= psi(a*s)/2 at every grid point. The bound holds for all
/// s >= s_a with s_a = log(2)/(1-a) for the exponential kernel (any a in
/// (0,1)) and s_a = 1/(1-2a) for the rational one, which admits no such
/// threshold when a >= 1/2 (returns false by construction in that case).
/// Throws std::domain_error when a is outside (0, 1).
bool check_Ha(ThetaKernel kernel, double a, const std::vector<double>& s_grid);

}  // namespace ncp
