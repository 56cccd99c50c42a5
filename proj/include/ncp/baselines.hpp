#pragma once

#include <utility>
#include <vector>

#include "ncp/problem.hpp"
#include "ncp/solver.hpp"

namespace ncp {

enum class BaselineMethod { Projection, NewtonMin, FischerBurmeister, InteriorPoint };

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::NewtonMin;
  double lambda = 10.0;            // Projection: x <- max(0, x - F(x)/lambda)
  double sigma = 0.1;              // InteriorPoint centering parameter
  double frac_to_boundary = 0.995; // InteriorPoint step cap
  double tol = 1e-9;
  int max_iter = 1000;
  double tau = 1e-4;
  double rho = 0.5;
  double min_step = 1e-5;
};

/// The paper's lambda grid for the projection sweep.
const std::vector<double>& projection_lambda_grid();

/// Fixed-point projection x^{k+1} = max(0, x^k - F(x^k)/lambda) until
/// Opt <= tol. Divergence (Opt growing 1e6x over its start) stops the run
/// early with MaxIter. Pure NCPs only.
SolveReport projection_solve(const NcpProblem& problem,
                             const BaselineConfig& cfg);

/// Runs projection_solve over the lambda grid and returns the best report
/// (fewest iterations among solved runs) with the lambda that achieved it.
std::pair<SolveReport, double> projection_sweep(const NcpProblem& problem,
                                                BaselineConfig cfg);

/// Semismooth Newton on the min reformulation. Pure problems use
/// H_i = min(x_i, F_i(x)) with B-subdifferential rows (the unit row where
/// x_i < F_i, the F-row otherwise, ties included); mixed problems use the
/// lifted system [F(u) - z; E(u); min(u_P, z)].
SolveReport newton_min_solve(const NcpProblem& problem,
                             const BaselineConfig& cfg);

/// Semismooth Newton on the Fischer-Burmeister reformulation
/// phi(a, b) = sqrt(a^2 + b^2) - (a + b), with the symmetric subgradient
/// (sqrt(1/2) - 1, sqrt(1/2) - 1) at the origin.
SolveReport fb_solve(const NcpProblem& problem, const BaselineConfig& cfg);

/// Classical primal-dual interior-point smoothing: damped Newton on
/// [F(x) - z; E; x_P . z - r 1] with the schedule r = sigma <x_P, z>/pairs
/// and a fraction-to-boundary cap keeping x_P, z > 0. Stops when the
/// complementarity average and ||F(x) - z||_inf (plus ||E||_inf) reach tol.
SolveReport ipm_solve(const NcpProblem& problem, const BaselineConfig& cfg);

/// phi_FB and its partials; exposed for the property tests.
double fischer_burmeister(double a, double b);

}  // namespace ncp
