#include "ncp/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ncp/linalg.hpp"

namespace ncp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void finish(SolveReport& rep, const NcpProblem& problem, const Vec& u,
            const Vec& z, Clock::time_point t0) {
  rep.final_state.x = u;
  rep.final_state.z = z;
  const Vec fx = problem.F(u);
  rep.opt = opt_metric(problem.comp_part(u), fx);
  rep.feas = feas_metric(problem.comp_part(u), fx);
  rep.wall_time = seconds_since(t0);
}

// rows of the lifted semismooth system [F(u) - z; E(u); phi(u_P, z)]
struct PhiRow {
  double value;
  double d_a;  // w.r.t. the primal component
  double d_b;  // w.r.t. the slack
};

template <typename Phi>
SolveReport semismooth_newton(const NcpProblem& problem,
                              const BaselineConfig& cfg, Phi phi) {
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.status = SolveStatus::MaxIter;

  const int n = problem.n, l = problem.pairs, k = problem.equality_rows();
  const bool lifted = !problem.pure();
  const int dim = lifted ? n + l : n;

  Vec u = problem.default_start;
  Vec z = lifted ? problem.start_slack(u) : Vec();

  auto assemble = [&](const Vec& uu, const Vec& zz, Vec& h, Mat* m) {
    if (!lifted) {
      const Vec f = problem.F(uu);
      const Mat jf = m ? problem.J(uu) : Mat();
      h.resize(n);
      if (m) m->setZero(n, n);
      for (int i = 0; i < n; ++i) {
        const PhiRow row = phi(uu[i], f[i]);
        h[i] = row.value;
        if (m) {
          m->row(i) = row.d_b * jf.row(i);
          (*m)(i, i) += row.d_a;
        }
      }
      return;
    }
    const Vec f = problem.F(uu);
    h.resize(n + l);
    h.head(l) = f - zz;
    h.segment(l, k) = problem.E(uu);
    if (m) {
      m->setZero(n + l, n + l);
      m->block(0, 0, l, n) = problem.J(uu);
      m->block(0, n, l, l) = -Mat::Identity(l, l);
      m->block(l, 0, k, n) = problem.JE(uu);
    }
    for (int i = 0; i < l; ++i) {
      const PhiRow row = phi(uu[problem.comp_index[i]], zz[i]);
      h[l + k + i] = row.value;
      if (m) {
        (*m)(l + k + i, problem.comp_index[i]) = row.d_a;
        (*m)(l + k + i, n + i) = row.d_b;
      }
    }
  };

  Vec h;
  Mat m;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    assemble(u, z, h, &m);
    rep.merit_history.push_back(0.5 * h.squaredNorm());
    rep.residual_history.push_back(h.norm());
    if (h.lpNorm<Eigen::Infinity>() <= cfg.tol) {
      rep.status = SolveStatus::Solved;
      break;
    }
    const LuResult lu = lu_solve(m, -h);
    if (!lu.ok) {
      rep.status = SolveStatus::LinearSolveFailure;
      break;
    }
    const double theta0 = 0.5 * h.squaredNorm();
    double zeta = 1.0;
    bool accepted = false;
    Vec un, zn, hn;
    while (zeta >= cfg.min_step) {
      un = u + zeta * lu.x.head(n);
      if (lifted) zn = z + zeta * lu.x.tail(l);
      assemble(un, zn, hn, nullptr);
      if (0.5 * hn.squaredNorm() - theta0 <= -2.0 * cfg.tau * zeta * theta0) {
        accepted = true;
        break;
      }
      zeta *= cfg.rho;
    }
    if (!accepted) {
      rep.status = SolveStatus::StepTooSmall;
      break;
    }
    rep.step_history.push_back(zeta);
    u = un;
    if (lifted) z = zn;
  }
  rep.iterations = it;
  finish(rep, problem, u, lifted ? z : problem.F(u), t0);
  return rep;
}

}  // namespace

const std::vector<double>& projection_lambda_grid() {
  static const std::vector<double> grid{0.1, 1.0, 10.0, 20.0, 50.0, 100.0};
  return grid;
}

SolveReport projection_solve(const NcpProblem& problem,
                             const BaselineConfig& cfg) {
  if (!problem.pure())
    throw std::invalid_argument("projection_solve expects a pure NCP");
  if (cfg.lambda <= 0.0)
    throw std::invalid_argument("projection_solve requires lambda > 0");
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.status = SolveStatus::MaxIter;

  Vec x = problem.default_start;
  double opt0 = opt_metric(x, problem.F(x));
  if (opt0 == 0.0) opt0 = 1.0;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const Vec fx = problem.F(x);
    const double opt = opt_metric(x, fx);
    rep.residual_history.push_back(opt);
    if (opt <= cfg.tol) {
      rep.status = SolveStatus::Solved;
      break;
    }
    if (!std::isfinite(opt) || opt > 1e6 * opt0) break;  // divergence flag
    x = (x - fx / cfg.lambda).cwiseMax(0.0);
  }
  rep.iterations = it;
  finish(rep, problem, x, problem.F(x), t0);
  return rep;
}

std::pair<SolveReport, double> projection_sweep(const NcpProblem& problem,
                                                BaselineConfig cfg) {
  SolveReport best;
  best.status = SolveStatus::MaxIter;
  best.iterations = std::numeric_limits<int>::max();
  double best_lambda = projection_lambda_grid().front();
  for (double lambda : projection_lambda_grid()) {
    cfg.lambda = lambda;
    SolveReport rep = projection_solve(problem, cfg);
    const bool better =
        rep.status == SolveStatus::Solved &&
        (best.status != SolveStatus::Solved || rep.iterations < best.iterations);
    if (better || (best.status != SolveStatus::Solved &&
                   best.iterations == std::numeric_limits<int>::max())) {
      best = rep;
      best_lambda = lambda;
    }
  }
  return {best, best_lambda};
}

SolveReport newton_min_solve(const NcpProblem& problem,
                             const BaselineConfig& cfg) {
  // tie x == F broken toward the F-row
  return semismooth_newton(problem, cfg, [](double a, double b) -> PhiRow {
    if (a < b) return {a, 1.0, 0.0};
    return {b, 0.0, 1.0};
  });
}

double fischer_burmeister(double a, double b) {
  return std::hypot(a, b) - (a + b);
}

SolveReport fb_solve(const NcpProblem& problem, const BaselineConfig& cfg) {
  return semismooth_newton(problem, cfg, [](double a, double b) -> PhiRow {
    const double norm = std::hypot(a, b);
    if (norm == 0.0) {
      const double g = std::sqrt(0.5) - 1.0;
      return {0.0, g, g};
    }
    return {norm - (a + b), a / norm - 1.0, b / norm - 1.0};
  });
}

SolveReport ipm_solve(const NcpProblem& problem, const BaselineConfig& cfg) {
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.status = SolveStatus::MaxIter;

  const int n = problem.n, l = problem.pairs, k = problem.equality_rows();
  Vec u = problem.default_start;
  Vec z = problem.start_slack(u);
  if ((problem.comp_part(u).array() <= 0.0).any() ||
      (z.array() <= 0.0).any())
    throw std::invalid_argument("ipm_solve requires a strictly interior start");

  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const Vec f = problem.F(u);
    const Vec p = problem.comp_part(u);
    const double mu = p.dot(z) / l;
    Vec top(l + k);
    top.head(l) = f - z;
    if (k > 0) top.segment(l, k) = problem.E(u);
    const double res = std::max(top.lpNorm<Eigen::Infinity>(), mu);
    rep.residual_history.push_back(res);
    if (res <= cfg.tol) {
      rep.status = SolveStatus::Solved;
      break;
    }
    const double r = cfg.sigma * mu;
    Vec h(n + l);
    h.head(l) = top.head(l);
    if (k > 0) h.segment(l, k) = top.segment(l, k);
    for (int i = 0; i < l; ++i) h[l + k + i] = p[i] * z[i] - r;
    Mat m = Mat::Zero(n + l, n + l);
    m.block(0, 0, l, n) = problem.J(u);
    m.block(0, n, l, l) = -Mat::Identity(l, l);
    if (k > 0) m.block(l, 0, k, n) = problem.JE(u);
    for (int i = 0; i < l; ++i) {
      m(l + k + i, problem.comp_index[i]) = z[i];
      m(l + k + i, n + i) = p[i];
    }
    const LuResult lu = lu_solve(m, -h);
    if (!lu.ok) {
      rep.status = SolveStatus::LinearSolveFailure;
      break;
    }
    // fraction-to-boundary on the complementarity variables
    double zeta = 1.0;
    for (int i = 0; i < l; ++i) {
      const double dp = lu.x[problem.comp_index[i]];
      const double dz = lu.x[n + i];
      if (dp < 0.0) zeta = std::min(zeta, -cfg.frac_to_boundary * p[i] / dp);
      if (dz < 0.0) zeta = std::min(zeta, -cfg.frac_to_boundary * z[i] / dz);
    }
    if (zeta < cfg.min_step) {
      rep.status = SolveStatus::StepTooSmall;
      break;
    }
    u += zeta * lu.x.head(n);
    z += zeta * lu.x.tail(l);
    rep.step_history.push_back(zeta);
  }
  rep.iterations = it;
  finish(rep, problem, u, z, t0);
  return rep;
}

}  // namespace ncp
