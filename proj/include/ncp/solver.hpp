#pragma once

#include <optional>
#include <vector>

#include "ncp/problem.hpp"
#include "ncp/smoothing.hpp"
#include "ncp/types.hpp"

namespace ncp {

/// The enlarged unknown (x, z, r): primal, slack z ~ F(x), and the smoothing
/// parameter promoted to a Newton variable.
struct EnlargedState {
  Vec x;
  Vec z;
  double r = 0.0;
};

struct SolverConfig {
  ThetaKernel kernel = ThetaKernel::Rational;
  double eps_reg = 1e-6;  // regularizer of the closing equation r^2 + eps*r
  double tol = 1e-9;      // stop on ||H||_inf <= tol
  int max_iter = 1000;
  double tau = 1e-4;       // Armijo constant, in (0, 1/2)
  double rho = 0.5;        // backtracking ratio, in (0, 1)
  double min_step = 1e-5;  // failure threshold for the step length
  bool damping = false;    // clip (x, z) to the nonnegative orthant at trials
};

enum class SolveStatus { Solved, MaxIter, StepTooSmall, LinearSolveFailure };

const char* to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
  EnlargedState final_state;
  double opt = 0.0;
  double feas = 0.0;
  std::vector<double> merit_history;     // Theta = ||H||^2 / 2 per iterate
  std::vector<double> residual_history;  // ||H||_2 per iterate
  std::vector<double> step_history;      // accepted zeta per iteration
  double wall_time = 0.0;
  bool r_positive_throughout = true;

  bool solved() const { return status == SolveStatus::Solved; }
};

/// Stacked residual of the enlarged system, ordered as
/// [F(u) - z; E(u); G_r(u_P, z); ||u^-||^2/2 + ||z^-||^2/2 + r^2 + eps*r].
Vec residual(const NcpProblem& problem, const EnlargedState& state,
             const SolverConfig& cfg);

/// Jacobian of the residual with respect to (u, z, r). The last row is
/// [(u^-)^T, (z^-)^T, 2r + eps].
Mat jacobian(const NcpProblem& problem, const EnlargedState& state,
             const SolverConfig& cfg);

/// Newton direction solving H + grad(H) d = 0. Empty on pivot failure.
std::optional<Vec> newton_direction(const NcpProblem& problem,
                                    const EnlargedState& state,
                                    const SolverConfig& cfg);

/// Armijo backtracking on Theta = ||H||^2/2 along d, with the directional
/// derivative taken as -||H||^2 (exact for Newton directions). Returns the
/// accepted step, or nothing once the trial falls below cfg.min_step.
std::optional<double> armijo_search(const NcpProblem& problem,
                                    const EnlargedState& state, const Vec& d,
                                    const SolverConfig& cfg);

/// Full nonparametric Newton driver. Starts at u0 (default_start when absent)
/// with slack policy z0 = max(F(u0), 1) (or the problem's stored slack) and
/// r0 = <u0_P, z0> / pairs.
SolveReport solve(const NcpProblem& problem, const SolverConfig& cfg,
                  const std::optional<Vec>& start = std::nullopt,
                  const std::optional<Vec>& start_slack = std::nullopt);

/// Paper metrics: Opt = max_i |x_i F_i|, Feas = ||min(x,0)||_1 + ||min(F,0)||_1.
double opt_metric(const Vec& x, const Vec& fx);
double feas_metric(const Vec& x, const Vec& fx);

}  // namespace ncp
