#include "ncp/solver.hpp"

#include <chrono>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "ncp/linalg.hpp"

namespace ncp {

namespace {

Vec negative_part(const Vec& v) { return v.cwiseMin(0.0); }

EnlargedState advance(const NcpProblem& problem, const EnlargedState& s,
                      const Vec& d, double zeta, bool damping) {
  const int n = problem.n, l = problem.pairs;
  EnlargedState out;
  out.x = s.x + zeta * d.head(n);
  out.z = s.z + zeta * d.segment(n, l);
  out.r = s.r + zeta * d[n + l];
  if (damping) {
    out.x = out.x.cwiseMax(0.0);
    out.z = out.z.cwiseMax(0.0);
  }
  return out;
}

double merit(const Vec& h) { return 0.5 * h.squaredNorm(); }

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "Solved";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::StepTooSmall: return "StepTooSmall";
    case SolveStatus::LinearSolveFailure: return "LinearSolveFailure";
  }
  return "?";
}

Vec residual(const NcpProblem& problem, const EnlargedState& state,
             const SolverConfig& cfg) {
  const int n = problem.n, l = problem.pairs, k = problem.equality_rows();
  Vec h(n + l + 1);
  const Vec f = problem.F(state.x);
  if (!f.allFinite())
    throw std::runtime_error("non-finite F evaluation in residual");
  h.head(l) = f - state.z;
  if (k > 0) h.segment(l, k) = problem.E(state.x);
  for (int i = 0; i < l; ++i) {
    h[l + k + i] =
        g_value(cfg.kernel, state.x[problem.comp_index[i]], state.z[i], state.r);
  }
  const Vec xm = negative_part(state.x);
  const Vec zm = negative_part(state.z);
  h[n + l] = 0.5 * xm.squaredNorm() + 0.5 * zm.squaredNorm() +
             state.r * state.r + cfg.eps_reg * state.r;
  return h;
}

Mat jacobian(const NcpProblem& problem, const EnlargedState& state,
             const SolverConfig& cfg) {
  const int n = problem.n, l = problem.pairs, k = problem.equality_rows();
  Mat m = Mat::Zero(n + l + 1, n + l + 1);
  m.block(0, 0, l, n) = problem.J(state.x);
  m.block(0, n, l, l) = -Mat::Identity(l, l);
  if (k > 0) m.block(l, 0, k, n) = problem.JE(state.x);
  for (int i = 0; i < l; ++i) {
    const KernelDerivatives d = g_derivatives(
        cfg.kernel, state.x[problem.comp_index[i]], state.z[i], state.r);
    m(l + k + i, problem.comp_index[i]) = d.d_s;
    m(l + k + i, n + i) = d.d_t;
    m(l + k + i, n + l) = d.d_r;
  }
  m.block(n + l, 0, 1, n) = negative_part(state.x).transpose();
  m.block(n + l, n, 1, l) = negative_part(state.z).transpose();
  m(n + l, n + l) = 2.0 * state.r + cfg.eps_reg;
  return m;
}

std::optional<Vec> newton_direction(const NcpProblem& problem,
                                    const EnlargedState& state,
                                    const SolverConfig& cfg) {
  const Vec h = residual(problem, state, cfg);
  const LuResult lu = lu_solve(jacobian(problem, state, cfg), -h);
  if (!lu.ok) return std::nullopt;
  return lu.x;
}

std::optional<double> armijo_search(const NcpProblem& problem,
                                    const EnlargedState& state, const Vec& d,
                                    const SolverConfig& cfg) {
  const double theta0 = merit(residual(problem, state, cfg));
  // grad(Theta)^T d = -||H||^2 for exact Newton directions
  const double slope = -2.0 * theta0;
  double zeta = 1.0;
  while (zeta >= cfg.min_step) {
    const EnlargedState trial = advance(problem, state, d, zeta, cfg.damping);
    double theta = std::numeric_limits<double>::infinity();
    if (trial.r > 0.0) {  // H is undefined outside r > 0; reject such trials
      try {
        theta = merit(residual(problem, trial, cfg));
      } catch (const std::exception&) {
        // evaluation failure counts as no decrease
      }
    }
    if (theta - theta0 <= cfg.tau * zeta * slope) return zeta;
    zeta *= cfg.rho;
  }
  return std::nullopt;
}

SolveReport solve(const NcpProblem& problem, const SolverConfig& cfg,
                  const std::optional<Vec>& start,
                  const std::optional<Vec>& start_slack) {
  if (!(cfg.tau > 0.0 && cfg.tau < 0.5) || !(cfg.rho > 0.0 && cfg.rho < 1.0) ||
      !(cfg.eps_reg > 0.0) || !(cfg.tol > 0.0) || !(cfg.min_step > 0.0))
    throw std::invalid_argument("solver config outside its admissible ranges");
  const auto t0 = std::chrono::steady_clock::now();
  EnlargedState s;
  s.x = start.value_or(problem.default_start);
  s.z = start_slack ? *start_slack : problem.start_slack(s.x);
  const Vec p0 = problem.comp_part(s.x);
  if ((p0.array() <= 0.0).any() || (s.z.array() <= 0.0).any())
    throw std::invalid_argument("solve requires an interior start (x0, z0 > 0)");
  s.r = p0.dot(s.z) / problem.pairs;

  SolveReport rep;
  rep.status = SolveStatus::MaxIter;
  int k = 0;
  for (; k < cfg.max_iter; ++k) {
    const Vec h = residual(problem, s, cfg);
    rep.merit_history.push_back(merit(h));
    rep.residual_history.push_back(h.norm());
    if (h.lpNorm<Eigen::Infinity>() <= cfg.tol) {
      rep.status = SolveStatus::Solved;
      break;
    }
    const LuResult lu = lu_solve(jacobian(problem, s, cfg), -h);
    if (!lu.ok) {
      rep.status = SolveStatus::LinearSolveFailure;
      break;
    }
    const auto zeta = armijo_search(problem, s, lu.x, cfg);
    if (!zeta) {
      rep.status = SolveStatus::StepTooSmall;
      break;
    }
    s = advance(problem, s, lu.x, *zeta, cfg.damping);
    rep.step_history.push_back(*zeta);
    if (!(s.r > 0.0)) rep.r_positive_throughout = false;
  }
  rep.iterations = k;
  rep.final_state = s;
  const Vec fx = problem.F(s.x);
  const Vec xp = problem.comp_part(s.x);
  rep.opt = opt_metric(xp, fx);
  rep.feas = feas_metric(xp, fx);
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

double opt_metric(const Vec& x, const Vec& fx) {
  if (x.size() != fx.size())
    throw std::invalid_argument("opt_metric: length mismatch");
  if (x.size() == 0) return 0.0;
  return x.cwiseProduct(fx).cwiseAbs().maxCoeff();
}

double feas_metric(const Vec& x, const Vec& fx) {
  if (x.size() != fx.size())
    throw std::invalid_argument("feas_metric: length mismatch");
  return negative_part(x).lpNorm<1>() + negative_part(fx).lpNorm<1>();
}

}  // namespace ncp
