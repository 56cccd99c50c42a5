#include "ncp/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncp {

namespace {

constexpr double kDenominatorFloor = 1e-300;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
}

void require_positive_r(double r) {
  require_finite(r, "r");
  if (r <= 0.0) throw std::domain_error("smoothing parameter r must be > 0");
}

double clamp_denominator(double den, bool* clamped) {
  if (std::abs(den) < kDenominatorFloor) {
    if (clamped) *clamped = true;
    return std::copysign(kDenominatorFloor, den == 0.0 ? 1.0 : den);
  }
  return den;
}

}  // namespace

double theta(ThetaKernel kernel, double t) {
  require_finite(t, "t");
  switch (kernel) {
    case ThetaKernel::Rational:
      return t >= 0.0 ? t / (t + 1.0) : t;
    case ThetaKernel::Exponential:
      return 1.0 - std::exp(-t);
  }
  throw std::logic_error("unknown kernel");
}

double psi(ThetaKernel kernel, double t) {
  require_finite(t, "t");
  switch (kernel) {
    case ThetaKernel::Rational:
      return t >= 0.0 ? 1.0 / (t + 1.0) : 1.0 - t;
    case ThetaKernel::Exponential:
      return std::exp(-t);
  }
  throw std::logic_error("unknown kernel");
}

double psi_inv(ThetaKernel kernel, double y) {
  if (!std::isfinite(y) || y <= 0.0)
    throw std::domain_error("psi_inv requires y > 0");
  switch (kernel) {
    case ThetaKernel::Rational:
      // join at y = 1; both branches vanish there
      return y <= 1.0 ? 1.0 / y - 1.0 : 1.0 - y;
    case ThetaKernel::Exponential:
      return -std::log(y);
  }
  throw std::logic_error("unknown kernel");
}

double g_generic(ThetaKernel kernel, double s, double t, double r) {
  require_positive_r(r);
  require_finite(s, "s");
  require_finite(t, "t");
  if (kernel == ThetaKernel::Exponential) {
    // exp(-s/r) overflows for s/r < -709; the shifted form is exact
    return g2_stable(s, t, r);
  }
  return r * psi_inv(kernel, psi(kernel, s / r) + psi(kernel, t / r));
}

double g1_closed(double s, double t, double r, bool* clamped) {
  require_positive_r(r);
  const double den = clamp_denominator(s + t + 2.0 * r, clamped);
  return (s * t - r * r) / den;
}

double g2_stable(double s, double t, double r) {
  require_positive_r(r);
  return std::min(s, t) - r * std::log1p(std::exp(-std::abs(s - t) / r));
}

KernelDerivatives g1_derivatives(double s, double t, double r, bool* clamped) {
  require_positive_r(r);
  const double den = clamp_denominator(s + t + 2.0 * r, clamped);
  KernelDerivatives d;
  d.d_s = (t + r) / den * ((t + r) / den);
  d.d_t = (s + r) / den * ((s + r) / den);
  d.d_r = -2.0 * r / den + 2.0 * (r * r - s * t) / (den * den);
  return d;
}

KernelDerivatives g2_derivatives(double s, double t, double r) {
  require_positive_r(r);
  // u >= 0 measures the gap to the smaller argument; the weight of the
  // larger argument is w = 1/(1 + e^u) and d_r = -(u*w + log1p(e^-u)).
  const double u = std::abs(s - t) / r;
  const double eu = std::exp(-u);
  const double w = eu / (1.0 + eu);
  KernelDerivatives d;
  if (s <= t) {
    d.d_s = 1.0 - w;
    d.d_t = w;
  } else {
    d.d_s = w;
    d.d_t = 1.0 - w;
  }
  d.d_r = -(u * w + std::log1p(eu));
  return d;
}

double g_value(ThetaKernel kernel, double s, double t, double r,
               bool* clamped) {
  return kernel == ThetaKernel::Rational ? g1_closed(s, t, r, clamped)
                                         : g2_stable(s, t, r);
}

KernelDerivatives g_derivatives(ThetaKernel kernel, double s, double t,
                                double r, bool* clamped) {
  return kernel == ThetaKernel::Rational ? g1_derivatives(s, t, r, clamped)
                                         : g2_derivatives(s, t, r);
}

bool check_Ha(ThetaKernel kernel, double a,
              const std::vector<double>& s_grid) {
  if (!std::isfinite(a) || a <= 0.0 || a >= 1.0)
    throw std::domain_error("check_Ha requires a in (0, 1)");
  // 1/(s+1) <= 1/(2*(a*s+1)) forces (1-2a)*s >= 1, impossible for a >= 1/2
  if (kernel == ThetaKernel::Rational && a >= 0.5) return false;
  for (double s : s_grid) {
    if (psi(kernel, s) > 0.5 * psi(kernel, a * s)) return false;
  }
  return true;
}

}  // namespace ncp
