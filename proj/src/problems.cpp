#include "ncp/problem.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ncp {

namespace {

constexpr double kPositivityClamp = 1e-12;

Vec ones(int n) { return Vec::Ones(n); }

void require_size(int n) {
  if (n < 1) throw std::invalid_argument("problem dimension must be >= 1");
}

NcpProblem pure_problem(std::string name, int n,
                        std::function<Vec(const Vec&)> F,
                        std::function<Mat(const Vec&)> J) {
  NcpProblem p;
  p.name = std::move(name);
  p.n = n;
  p.pairs = n;
  p.comp_index.resize(n);
  for (int i = 0; i < n; ++i) p.comp_index[i] = i;
  p.F = std::move(F);
  p.J = std::move(J);
  p.default_start = ones(n);
  return p;
}

// uniform double in [0,1) from the top 53 bits, portable across platforms
double unit_u01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * unit_u01(gen);
}

}  // namespace

Vec NcpProblem::comp_part(const Vec& u) const {
  Vec p(pairs);
  for (int i = 0; i < pairs; ++i) p[i] = u[comp_index[i]];
  return p;
}

Vec NcpProblem::start_slack(const Vec& u0) const {
  if (default_slack.size() > 0) return default_slack;
  return F(u0).cwiseMax(1.0);
}

NcpProblem build_p1_p2(P1P2Variant variant, int n) {
  require_size(n);
  Vec b(n);
  for (int i = 0; i < n; ++i) {
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^i with i 1-based
    b[i] = variant == P1P2Variant::P1 ? sign : sign / std::sqrt(i + 1.0);
  }
  auto F = [n, b](const Vec& x) {
    Vec f(n);
    for (int i = 0; i < n; ++i) {
      const double xm = i > 0 ? x[i - 1] : 0.0;
      const double xp = i + 1 < n ? x[i + 1] : 0.0;
      f[i] = -xp + 2.0 * x[i] - xm + x[i] * x[i] * x[i] / 3.0 - b[i];
    }
    return f;
  };
  auto J = [n](const Vec& x) {
    Mat m = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = 2.0 + x[i] * x[i];
      if (i > 0) m(i, i - 1) = -1.0;
      if (i + 1 < n) m(i, i + 1) = -1.0;
    }
    return m;
  };
  return pure_problem(variant == P1P2Variant::P1 ? "P1" : "P2", n, F, J);
}

NcpProblem build_p3(int n) {
  require_size(n);
  auto F = [n](const Vec& x) {
    Vec f(n);
    for (int i = 0; i < n; ++i) {
      const double xm = i > 0 ? x[i - 1] : 0.0;
      const double xp = i + 1 < n ? x[i + 1] : 0.0;
      f[i] = -xp + 2.0 * x[i] - xm + std::atan(x[i]) +
             (i + 1.0 - std::numbers::pi / 2.0);
    }
    return f;
  };
  auto J = [n](const Vec& x) {
    Mat m = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = 2.0 + 1.0 / (1.0 + x[i] * x[i]);
      if (i > 0) m(i, i - 1) = -1.0;
      if (i + 1 < n) m(i, i + 1) = -1.0;
    }
    return m;
  };
  return pure_problem("P3", n, F, J);
}

NcpProblem build_kojima_shindo(KojimaShindoVariant variant) {
  const bool degen = variant == KojimaShindoVariant::Degenerate;
  auto F = [degen](const Vec& x) {
    Vec f(4);
    f[0] = 3 * x[0] * x[0] + 2 * x[0] * x[1] + 2 * x[1] * x[1] + x[2] +
           3 * x[3] - 6;
    f[1] = 2 * x[0] * x[0] + x[0] + x[1] * x[1] + 10 * x[2] + 2 * x[3] - 2;
    f[2] = 3 * x[0] * x[0] + x[0] * x[1] + 2 * x[1] * x[1] + 2 * x[2] +
           (degen ? 9 * x[3] - 9 : 3 * x[3] - 1);
    f[3] = x[0] * x[0] + 3 * x[1] * x[1] + 2 * x[2] + 3 * x[3] - 3;
    return f;
  };
  auto J = [degen](const Vec& x) {
    Mat m(4, 4);
    m << 6 * x[0] + 2 * x[1], 2 * x[0] + 4 * x[1], 1, 3,  //
        4 * x[0] + 1, 2 * x[1], 10, 2,                    //
        6 * x[0] + x[1], x[0] + 4 * x[1], 2, degen ? 9.0 : 3.0,
        2 * x[0], 6 * x[1], 2, 3;
    return m;
  };
  NcpProblem p = pure_problem(degen ? "P4" : "P5", 4, F, J);
  const double s6h = std::sqrt(6.0) / 2.0;
  Vec xs(4);
  xs << s6h, 0, 0, 0.5;
  p.known_solutions.push_back({xs, p.F(xs)});
  if (degen) {
    Vec xss(4);
    xss << 1, 0, 3, 0;
    p.known_solutions.push_back({xss, p.F(xss)});
  }
  return p;
}

NcpProblem build_p6() {
  Mat M(7, 7);
  M << 2, 0, -1, 0, 1, 3, 0,    //
      0, 1, 0, 0, 2, 1, -1,     //
      -1, 0, 2, 1, 1, 2, -4,    //
      0, 0, 1, 1, 1, -1, 0,     //
      -1, -2, -1, -1, 0, 0, 0,  //
      -3, -1, -2, 1, 0, 0, 0,   //
      0, 1, 4, 0, 0, 0, 0;
  Vec c(7);
  c << -1, -3, 1, -1, 5, 4, -1.5;
  NcpProblem p = pure_problem(
      "P6", 7, [M, c](const Vec& x) { return Vec(M * x + c); },
      [M](const Vec&) { return M; });
  Vec xs(7);
  xs << 0.2727, 2.0909, 0, 0.54545, 0.4545, 0, 0;
  p.known_solutions.push_back({xs, p.F(xs)});
  return p;
}

NcpProblem build_nash_cournot(NashCournotVariant variant) {
  const bool five = variant == NashCournotVariant::FiveFirms;
  const int n = five ? 5 : 10;
  Vec c(n), b(n), L(n);
  double gamma;
  if (five) {
    c << 10, 8, 6, 4, 2;
    b << 1.2, 1.1, 1.0, 0.9, 0.8;
    L.setConstant(5.0);
    gamma = 1.1;
  } else {
    c << 5, 3, 8, 5, 1, 3, 7, 4, 6, 3;
    b << 1.2, 1.0, 0.9, 0.6, 1.5, 1.0, 0.7, 1.1, 0.95, 0.75;
    L.setConstant(10.0);
    gamma = 1.2;
  }
  const double demand_scale = std::pow(5000.0, 1.0 / gamma);
  auto clamp = [](const Vec& x) {
    return Vec(x.cwiseMax(kPositivityClamp));
  };
  auto F = [=](const Vec& xin) {
    const Vec x = clamp(xin);
    const double Q = x.sum();
    const double P = demand_scale * std::pow(Q, -1.0 / gamma);
    const double Pp = -P / (gamma * Q);
    Vec f(n);
    for (int i = 0; i < n; ++i) {
      const double cprime =
          c[i] + std::pow(L[i], 1.0 / b[i]) * std::pow(x[i], 1.0 / b[i]);
      f[i] = cprime - P - x[i] * Pp;
    }
    return f;
  };
  auto J = [=](const Vec& xin) {
    const Vec x = clamp(xin);
    const double Q = x.sum();
    const double P = demand_scale * std::pow(Q, -1.0 / gamma);
    const double Pp = -P / (gamma * Q);
    const double Ppp = -Pp * (1.0 / gamma + 1.0) / Q;
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
      const double csecond = std::pow(L[i], 1.0 / b[i]) / b[i] *
                             std::pow(x[i], 1.0 / b[i] - 1.0);
      for (int j = 0; j < n; ++j) {
        m(i, j) = -Pp - x[i] * Ppp;
        if (i == j) m(i, j) += csecond - Pp;
      }
    }
    return m;
  };
  return pure_problem(five ? "P7" : "P8", n, F, J);
}

RandomMonotoneSpec parse_random_monotone_descriptor(const std::string& json) {
  const auto parsed = nlohmann::json::parse(json);
  RandomMonotoneSpec spec;
  spec.n = parsed.at("n").get<int>();
  spec.seed = parsed.at("seed").get<std::uint64_t>();
  if (spec.n < 1) throw std::invalid_argument("descriptor needs n >= 1");
  return spec;
}

RandomMonotoneParts random_monotone_parts(const RandomMonotoneSpec& spec) {
  require_size(spec.n);
  const int n = spec.n;
  std::mt19937_64 gen(spec.seed);
  RandomMonotoneParts parts;
  parts.A.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) parts.A(i, j) = uniform(gen, -5.0, 5.0);
  parts.B = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      parts.B(i, j) = uniform(gen, -5.0, 5.0);
      parts.B(j, i) = -parts.B(i, j);
    }
  parts.D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) parts.D(i, i) = uniform(gen, 0.0, 3.0);
  parts.q.resize(n);
  for (int i = 0; i < n; ++i) parts.q[i] = uniform(gen, -500.0, 0.0);
  return parts;
}

NcpProblem build_random_monotone(const RandomMonotoneSpec& spec) {
  const RandomMonotoneParts parts = random_monotone_parts(spec);
  const Mat M = parts.A * parts.A.transpose() + parts.B + parts.D;
  const Vec q = parts.q;
  return pure_problem(
      "random-monotone", spec.n,
      [M, q](const Vec& x) { return Vec(M * x + q); },
      [M](const Vec&) { return M; });
}

GeoChemParams default_geochem_params() {
  GeoChemParams p;
  p.T << 2.0, 6.0;
  p.K << 37.5837, 7.6208;
  return p;
}

NcpProblem build_geochem(const GeoChemParams& params) {
  if ((params.K.array() <= 0).any() || (params.T.array() < 0).any())
    throw std::invalid_argument("geochem requires K > 0 and T >= 0");
  const double T1 = params.T[0], T2 = params.T[1];
  const double K1 = params.K[0], K2 = params.K[1];
  NcpProblem p;
  p.name = "geochem";
  p.n = 5;
  p.pairs = 2;
  p.comp_index = {3, 4};  // p1, p2
  p.F = [K1, K2](const Vec& u) {
    Vec f(2);
    f << K1 - u[0] * u[2], K2 - u[1] * u[2];
    return f;
  };
  p.J = [](const Vec& u) {
    Mat m = Mat::Zero(2, 5);
    m(0, 0) = -u[2];
    m(0, 2) = -u[0];
    m(1, 1) = -u[2];
    m(1, 2) = -u[1];
    return m;
  };
  p.E = [T1, T2](const Vec& u) {
    Vec e(3);
    e << T1 - u[0] - u[3], T2 - u[1] - u[4], u[2] - u[1] - u[0];
    return e;
  };
  p.JE = [](const Vec&) {
    Mat m = Mat::Zero(3, 5);
    m(0, 0) = -1;
    m(0, 3) = -1;
    m(1, 1) = -1;
    m(1, 4) = -1;
    m(2, 0) = -1;
    m(2, 1) = -1;
    m(2, 2) = 1;
    return m;
  };
  p.default_start = Vec(5);
  p.default_start << 3, 1, 4, 5, 6;
  p.default_slack = Vec(2);
  p.default_slack << 1, 1;

  const GeoChemSolution sol = geochem_exact_solution(params);
  Vec u(5);
  u << sol.x[0], sol.x[1], sol.x[2], sol.p[0], sol.p[1];
  p.known_solutions.push_back({u, p.F(u)});
  return p;
}

GeoChemSolution geochem_exact_solution(const GeoChemParams& params) {
  const double T1 = params.T[0], T2 = params.T[1];
  const double K1 = params.K[0], K2 = params.K[1];
  const double tol = 1e-12;

  auto accept = [&](Eigen::Vector3d x, Eigen::Vector2d p,
                    int id) -> std::optional<GeoChemSolution> {
    const Eigen::Vector2d f(K1 - x[0] * x[2], K2 - x[1] * x[2]);
    if ((p.array() < -tol).any() || (f.array() < -tol).any()) return {};
    if ((x.array() < -tol).any()) return {};
    if (std::abs(std::min(p[0], f[0])) > 1e-9 ||
        std::abs(std::min(p[1], f[1])) > 1e-9)
      return {};
    return GeoChemSolution{x, p, id};
  };

  const double s = std::sqrt(K1 + K2);
  // case 1: both salts dissolve incompletely (p1, p2 > 0)
  if (auto r = accept({K1 / s, K2 / s, s}, {T1 - K1 / s, T2 - K2 / s}, 1))
    return *r;
  // case 2: p1 = 0
  {
    const double x2 = (-T1 + std::sqrt(T1 * T1 + 4.0 * K2)) / 2.0;
    if (auto r = accept({T1, x2, T1 + x2}, {0.0, T2 - x2}, 2)) return *r;
  }
  // case 3: p2 = 0
  {
    const double x1 = (-T2 + std::sqrt(T2 * T2 + 4.0 * K1)) / 2.0;
    if (auto r = accept({x1, T2, T2 + x1}, {T1 - x1, 0.0}, 3)) return *r;
  }
  // case 4: p = 0
  if (auto r = accept({T1, T2, T1 + T2}, {0.0, 0.0}, 4)) return *r;
  throw std::runtime_error(
      "geochem_exact_solution: no case admits these parameters");
}

std::pair<OdeLcpSpec, NcpProblem> build_ode_lcp(int N) {
  if (N < 3) throw std::invalid_argument("ode grid needs N >= 3");
  OdeLcpSpec spec;
  spec.N = N;
  spec.h = 5.0 / N;
  const double h = spec.h;
  spec.ill_conditioned = h >= 1.0;
  const double ih2 = 1.0 / (h * h);

  // bands: second subdiagonal 1, subdiagonal -2, diagonal 1 -/+ h^2 with the
  // first row scaled to 2 -/+ h^2 by the eliminated Neumann ghost point
  spec.N1 = Mat::Zero(N, N);
  spec.N2 = Mat::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    const double lead = i == 0 ? 2.0 : 1.0;
    spec.N1(i, i) = (lead - h * h) * ih2;
    spec.N2(i, i) = (lead + h * h) * ih2;
    if (i >= 1) {
      spec.N1(i, i - 1) = -2.0 * ih2;
      spec.N2(i, i - 1) = -2.0 * ih2;
    }
    if (i >= 2) {
      spec.N1(i, i - 2) = ih2;
      spec.N2(i, i - 2) = ih2;
    }
  }
  spec.q = Vec::Zero(N);
  for (int i = 0; i < N; ++i) spec.q[i] = -(2.0 + (i + 1) * h);
  spec.q[0] -= (8.0 - 10.0 * h) * ih2;  // x(0) = -4 and x'(0) = 5 eliminated
  spec.q[1] += 4.0 * ih2;               // x_0 = -4 appearing in row 2

  // w = x^- is the primal; F(w) = N1^{-1}(N2 w + q) = x^+
  auto lu = std::make_shared<Eigen::PartialPivLU<Mat>>(spec.N1);
  const Mat M = lu->solve(spec.N2);
  const Vec f0 = lu->solve(spec.q);
  NcpProblem p = pure_problem(
      "ode-lcp", N, [M, f0](const Vec& w) { return Vec(M * w + f0); },
      [M](const Vec&) { return M; });
  return {spec, p};
}

Trajectory rk4_reference(double x0, double dx0, double t_end, int steps) {
  Trajectory traj;
  traj.t.push_back(0.0);
  traj.x.push_back(x0);
  if (t_end == 0.0) return traj;
  if (steps < 10) throw std::invalid_argument("rk4_reference needs steps >= 10");
  auto rhs = [](double t, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(y[1], std::abs(y[0]) - 2.0 - t);
  };
  const double h = t_end / steps;
  Eigen::Vector2d y(x0, dx0);
  double t = 0.0;
  for (int k = 0; k < steps; ++k) {
    const Eigen::Vector2d k1 = rhs(t, y);
    const Eigen::Vector2d k2 = rhs(t + h / 2, y + h / 2 * k1);
    const Eigen::Vector2d k3 = rhs(t + h / 2, y + h / 2 * k2);
    const Eigen::Vector2d k4 = rhs(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    traj.t.push_back(t);
    traj.x.push_back(y[0]);
  }
  return traj;
}

NcpProblem make_problem(const std::string& id, int size, std::uint64_t seed) {
  auto sized = [size](int fallback) { return size > 0 ? size : fallback; };
  if (id == "P1") return build_p1_p2(P1P2Variant::P1, sized(10));
  if (id == "P2") return build_p1_p2(P1P2Variant::P2, sized(10));
  if (id == "P3") return build_p3(sized(10));
  if (id == "P4") return build_kojima_shindo(KojimaShindoVariant::Degenerate);
  if (id == "P5")
    return build_kojima_shindo(KojimaShindoVariant::Nondegenerate);
  if (id == "P6") return build_p6();
  if (id == "P7") return build_nash_cournot(NashCournotVariant::FiveFirms);
  if (id == "P8") return build_nash_cournot(NashCournotVariant::TenFirms);
  if (id == "geochem") return build_geochem(default_geochem_params());
  if (id == "ode-lcp") return build_ode_lcp(sized(100)).second;
  if (id == "random-monotone")
    return build_random_monotone({sized(30), seed});
  throw std::invalid_argument("unknown problem id: " + id);
}

std::vector<int> default_sizes(const std::string& id) {
  if (id == "P1" || id == "P2" || id == "P3") return {10, 100, 500, 1000};
  if (id == "P4" || id == "P5") return {4};
  if (id == "P6") return {7};
  if (id == "P7") return {5};
  if (id == "P8") return {10};
  if (id == "geochem") return {5};
  if (id == "ode-lcp") return {100};
  if (id == "random-monotone") return {30};
  throw std::invalid_argument("unknown problem id: " + id);
}

}  // namespace ncp
