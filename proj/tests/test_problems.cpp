#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ncp/problem.hpp"
#include "ncp/solver.hpp"

using namespace ncp;

namespace {

// central-difference Jacobian of the complementarity map
Mat fd_jacobian(const NcpProblem& p, const Vec& x) {
  Mat m(p.pairs, p.n);
  for (int j = 0; j < p.n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    m.col(j) = (p.F(xp) - p.F(xm)) / (2.0 * h);
  }
  return m;
}

void check_jacobian_consistency(const NcpProblem& p, unsigned seed,
                                double lo = 0.2, double hi = 2.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x(p.n);
    for (int i = 0; i < p.n; ++i) x[i] = dist(gen);
    const Mat analytic = p.J(x);
    const Mat numeric = fd_jacobian(p, x);
    const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
    CHECK((analytic - numeric).cwiseAbs().maxCoeff() / scale <= 1e-5);
  }
}

}  // namespace

TEST_CASE("P1/P2 stencil values") {
  const NcpProblem p1 = build_p1_p2(P1P2Variant::P1, 2);
  const Vec f0 = p1.F(Vec::Zero(2));
  CHECK(f0[0] == doctest::Approx(1.0));   // -b_1 with b_1 = -1
  CHECK(f0[1] == doctest::Approx(-1.0));  // -b_2 with b_2 = +1

  const NcpProblem p1b = build_p1_p2(P1P2Variant::P1, 6);
  const Mat j0 = p1b.J(Vec::Zero(6));
  for (int i = 0; i < 6; ++i) {
    CHECK(j0(i, i) == 2.0);
    if (i > 0) CHECK(j0(i, i - 1) == -1.0);
    if (i < 5) CHECK(j0(i, i + 1) == -1.0);
  }
  const NcpProblem p2 = build_p1_p2(P1P2Variant::P2, 4);
  CHECK(p2.F(Vec::Zero(4))[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(build_p1_p2(P1P2Variant::P1, 0), std::invalid_argument);
}

TEST_CASE("P3 values") {
  const NcpProblem tiny = build_p3(1);
  CHECK(tiny.F(Vec::Zero(1))[0] ==
        doctest::Approx(1.0 - std::numbers::pi / 2.0));
  const NcpProblem p = build_p3(5);
  const Mat j0 = p.J(Vec::Zero(5));
  for (int i = 0; i < 5; ++i) CHECK(j0(i, i) == doctest::Approx(3.0));
}

TEST_CASE("Kojima-Shindo known solutions") {
  const NcpProblem p5 = build_kojima_shindo(KojimaShindoVariant::Nondegenerate);
  REQUIRE(p5.known_solutions.size() == 1);
  const auto& sol = p5.known_solutions[0];
  CHECK(opt_metric(sol.x, sol.fx) <= 1e-12);
  CHECK(feas_metric(sol.x, sol.fx) <= 1e-12);

  const NcpProblem p4 = build_kojima_shindo(KojimaShindoVariant::Degenerate);
  REQUIRE(p4.known_solutions.size() == 2);
  // degeneracy witness: x3* = F3(x*) = 0 at the first solution
  CHECK(p4.known_solutions[0].x[2] == 0.0);
  CHECK(p4.known_solutions[0].fx[2] == doctest::Approx(0.0));
  const Vec fxx = p4.known_solutions[1].fx;
  CHECK(fxx[0] == doctest::Approx(0.0));
  CHECK(fxx[1] == doctest::Approx(31.0));
  CHECK(fxx[2] == doctest::Approx(0.0));
  CHECK(fxx[3] == doctest::Approx(4.0));
}

TEST_CASE("P6 constants and truncated-decimal solution") {
  const NcpProblem p = build_p6();
  const Vec f0 = p.F(Vec::Zero(7));
  Vec expected(7);
  expected << -1, -3, 1, -1, 5, 4, -1.5;
  CHECK((f0 - expected).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(p.known_solutions.size() == 1);
  const auto& sol = p.known_solutions[0];
  // the printed solution carries 4-5 digits only
  CHECK(opt_metric(sol.x, sol.fx) <= 1e-3);
  CHECK(feas_metric(sol.x, sol.fx) <= 1e-3);
}

TEST_CASE("Nash-Cournot evaluation and domain guard") {
  const NcpProblem p7 = build_nash_cournot(NashCournotVariant::FiveFirms);
  // at x = 1000 * ones, Q = 5000 and the inverse demand is exactly 1;
  // firm 3 has b = 1, L = 5, c = 6: F = 6 + 5*1000 - 1 + 1000/(1.1*5000)
  const Vec x = Vec::Constant(5, 1000.0);
  CHECK(p7.F(x)[2] == doctest::Approx(5005.181818181818).epsilon(1e-13));

  // clamped evaluation stays finite at and below zero
  Vec bad = Vec::Constant(5, 1.0);
  bad[0] = -2.0;
  CHECK(p7.F(bad).allFinite());
  CHECK(p7.J(bad).allFinite());

  const NcpProblem p8 = build_nash_cournot(NashCournotVariant::TenFirms);
  CHECK(p8.n == 10);
}

TEST_CASE("Jacobians match finite differences on the catalog") {
  check_jacobian_consistency(build_p1_p2(P1P2Variant::P1, 8), 1);
  check_jacobian_consistency(build_p1_p2(P1P2Variant::P2, 8), 2);
  check_jacobian_consistency(build_p3(8), 3);
  check_jacobian_consistency(
      build_kojima_shindo(KojimaShindoVariant::Degenerate), 4);
  check_jacobian_consistency(
      build_kojima_shindo(KojimaShindoVariant::Nondegenerate), 5);
  check_jacobian_consistency(build_p6(), 6);
  check_jacobian_consistency(build_nash_cournot(NashCournotVariant::FiveFirms),
                             7, 0.5, 3.0);
  check_jacobian_consistency(build_nash_cournot(NashCournotVariant::TenFirms),
                             8, 0.5, 3.0);
  check_jacobian_consistency(build_random_monotone({12, 99}), 9);
  check_jacobian_consistency(build_geochem(default_geochem_params()), 10);
  check_jacobian_consistency(build_ode_lcp(40).second, 11);
}

TEST_CASE("random monotone generator") {
  const RandomMonotoneSpec spec{25, 1234};
  const NcpProblem a = build_random_monotone(spec);
  const NcpProblem b = build_random_monotone(spec);
  std::mt19937_64 gen(7);
  Vec x(25);
  for (int i = 0; i < 25; ++i)
    x[i] = -1.0 + 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
  // determinism is bitwise
  CHECK((a.F(x) - b.F(x)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.J(x) - b.J(x)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(
      (a.F(x) - build_random_monotone({25, 4321}).F(x)).cwiseAbs().maxCoeff() >
      0.0);

  // the symmetric part A A^T + D is positive definite (B cancels)
  for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
    const NcpProblem p = build_random_monotone({20, seed});
    const Mat m = p.J(Vec::Zero(20));
    const Mat sym = 0.5 * (m + m.transpose());
    Eigen::LLT<Mat> llt(sym);
    CHECK(llt.info() == Eigen::Success);
    // q < 0 so F(0) < 0 componentwise
    CHECK((p.F(Vec::Zero(20)).array() < 0.0).all());
  }

  // generator contract: ranges, exact skew-symmetry, assembly
  const RandomMonotoneParts parts = random_monotone_parts({15, 2024});
  CHECK((parts.B + parts.B.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(parts.A.cwiseAbs().maxCoeff() < 5.0);
  CHECK(parts.D.diagonal().minCoeff() > 0.0);
  CHECK(parts.D.diagonal().maxCoeff() < 3.0);
  CHECK((parts.D - Mat(parts.D.diagonal().asDiagonal())).norm() == 0.0);
  CHECK(parts.q.maxCoeff() < 0.0);
  CHECK(parts.q.minCoeff() > -500.0);
  const NcpProblem built = build_random_monotone({15, 2024});
  const Mat assembled = parts.A * parts.A.transpose() + parts.B + parts.D;
  CHECK((built.J(Vec::Zero(15)) - assembled).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random instance JSON descriptor") {
  const RandomMonotoneSpec spec =
      parse_random_monotone_descriptor(R"({"n": 14, "seed": 90210})");
  CHECK(spec.n == 14);
  CHECK(spec.seed == 90210);
  const NcpProblem p = build_random_monotone(spec);
  const NcpProblem q = build_random_monotone({14, 90210});
  CHECK((p.F(Vec::Ones(14)) - q.F(Vec::Ones(14))).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(parse_random_monotone_descriptor(R"({"n": 0, "seed": 1})"));
  CHECK_THROWS(parse_random_monotone_descriptor("{"));
}

TEST_CASE("geochem model and start") {
  const NcpProblem p = build_geochem(default_geochem_params());
  CHECK(p.n == 5);
  CHECK(p.pairs == 2);
  CHECK_FALSE(p.pure());
  const Vec u0 = p.default_start;
  CHECK(p.F(u0)[0] == doctest::Approx(25.5837));  // K1 - x1 x3 = 37.5837 - 12
  CHECK(p.E(u0).size() == 3);
  CHECK(p.E(u0)[2] == doctest::Approx(0.0));  // x3 = x1 + x2 at the start
  CHECK(p.default_slack.size() == 2);

  GeoChemParams bad = default_geochem_params();
  bad.K[0] = -1.0;
  CHECK_THROWS_AS(build_geochem(bad), std::invalid_argument);
}

TEST_CASE("geochem exact solution cases") {
  const GeoChemSolution sol = geochem_exact_solution(default_geochem_params());
  CHECK(sol.case_id == 2);
  CHECK(sol.x[0] == doctest::Approx(2.0));
  CHECK(sol.x[1] == doctest::Approx(1.9361198885604107));
  CHECK(sol.x[2] == doctest::Approx(3.9361198885604107));
  CHECK(sol.p[0] == 0.0);
  CHECK(sol.p[1] == doctest::Approx(4.063880111439589));
  // within 1e-4 of the four-digit values quoted with the model
  CHECK(std::abs(sol.x[1] - 1.93614) <= 1e-4);
  CHECK(std::abs(sol.p[1] - 4.06386) <= 1e-4);

  GeoChemParams zero;
  zero.T << 0.0, 0.0;
  zero.K << 1.0, 2.0;
  const GeoChemSolution z = geochem_exact_solution(zero);
  CHECK(z.case_id == 4);
  CHECK(z.x.norm() == 0.0);
  CHECK(z.p.norm() == 0.0);

  // complementarity holds for every returned case
  std::mt19937_64 gen(21);
  auto u01 = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 200; ++trial) {
    GeoChemParams params;
    params.T << 10.0 * u01(), 10.0 * u01();
    params.K << 0.1 + 10.0 * u01(), 0.1 + 10.0 * u01();
    const GeoChemSolution s = geochem_exact_solution(params);
    const double f1 = params.K[0] - s.x[0] * s.x[2];
    const double f2 = params.K[1] - s.x[1] * s.x[2];
    CHECK(std::abs(std::min(s.p[0], f1)) <= 1e-9);
    CHECK(std::abs(std::min(s.p[1], f2)) <= 1e-9);
  }

  GeoChemParams impossible;
  impossible.T << -5.0, -5.0;
  impossible.K << 1.0, 1.0;
  CHECK_THROWS_AS(geochem_exact_solution(impossible), std::runtime_error);
}

TEST_CASE("exact geochem solution closes the model equations") {
  const GeoChemParams params = default_geochem_params();
  const NcpProblem p = build_geochem(params);
  const GeoChemSolution sol = geochem_exact_solution(params);
  Vec u(5);
  u << sol.x[0], sol.x[1], sol.x[2], sol.p[0], sol.p[1];
  const Vec z = p.F(u);
  CHECK(p.E(u).lpNorm<Eigen::Infinity>() <= 1e-8);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(std::min(u[p.comp_index[i]], z[i])) <= 1e-8);

  // stacked solver residual vanishes with z = F(x); a subnormal r stands in
  // for the r = 0 limit of the kernel rows
  SolverConfig cfg;
  const EnlargedState state{u, z, 1e-300};
  CHECK(residual(p, state, cfg).lpNorm<Eigen::Infinity>() <= 1e-8);

  // the shipped known solution passes the reporting metrics
  REQUIRE(p.known_solutions.size() == 1);
  CHECK(opt_metric(p.comp_part(p.known_solutions[0].x),
                   p.known_solutions[0].fx) <= 1e-6);
  CHECK(feas_metric(p.comp_part(p.known_solutions[0].x),
                    p.known_solutions[0].fx) <= 1e-6);
}

TEST_CASE("ODE-LCP assembly") {
  auto [spec, problem] = build_ode_lcp(100);
  CHECK(spec.h == doctest::Approx(0.05));
  CHECK(spec.N1(0, 0) == doctest::Approx(799.0));  // (2 - h^2)/h^2
  CHECK(spec.N2(0, 0) == doctest::Approx(801.0));
  CHECK(spec.N1(1, 1) == doctest::Approx((1.0 - 0.0025) / 0.0025));
  CHECK(spec.N1(1, 0) == doctest::Approx(-800.0));
  CHECK(spec.N1(2, 0) == doctest::Approx(400.0));
  CHECK(spec.q[0] == doctest::Approx(-(8.0 - 0.5) / 0.0025 - 2.05));
  CHECK(spec.q[1] == doctest::Approx(4.0 / 0.0025 - 2.1));
  CHECK(spec.q[2] == doctest::Approx(-2.15));
  CHECK_FALSE(spec.ill_conditioned);
  CHECK(build_ode_lcp(4).first.ill_conditioned);  // h = 1.25
  CHECK_THROWS_AS(build_ode_lcp(2), std::invalid_argument);

  // marching oracle: the lower-banded LCP solves uniquely row by row
  const int N = spec.N;
  Vec xp = Vec::Zero(N), xm = Vec::Zero(N);
  for (int i = 0; i < N; ++i) {
    double c = spec.q[i];
    for (int j = std::max(0, i - 2); j < i; ++j)
      c -= spec.N1(i, j) * xp[j] - spec.N2(i, j) * xm[j];
    if (c >= 0)
      xp[i] = c / spec.N1(i, i);
    else
      xm[i] = -c / spec.N2(i, i);
  }
  CHECK((spec.N1 * xp - spec.N2 * xm - spec.q).lpNorm<Eigen::Infinity>() <=
        1e-6 * spec.q.lpNorm<Eigen::Infinity>());
  // the NCP view agrees with the march: F(x-) = x+
  CHECK((problem.F(xm) - xp).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(opt_metric(xm, problem.F(xm)) <= 1e-6);
}

TEST_CASE("rk4 reference") {
  const Trajectory none = rk4_reference(-4, 5, 0.0, 100);
  REQUIRE(none.t.size() == 1);
  CHECK(none.x[0] == -4.0);

  // self-convergence; the |x| kink limits the classical order, so the
  // doubling error sits near 7e-7 rather than the smooth-case O(h^4)
  const Trajectory a = rk4_reference(-4, 5, 5.0, 10000);
  const Trajectory b = rk4_reference(-4, 5, 5.0, 20000);
  CHECK(a.x.front() == -4.0);
  CHECK(std::abs(a.x.back() - b.x.back()) < 1e-5);
  CHECK_THROWS_AS(rk4_reference(-4, 5, 5.0, 5), std::invalid_argument);
}

TEST_CASE("catalog lookup") {
  CHECK(make_problem("P1", 100).n == 100);
  CHECK(make_problem("P4").n == 4);
  CHECK(make_problem("P4", 10).n == 4);  // fixed-size family ignores the size
  CHECK(make_problem("geochem").pairs == 2);
  CHECK(make_problem("ode-lcp", 50).n == 50);
  CHECK(make_problem("random-monotone", 12, 5).n == 12);
  CHECK_THROWS_AS(make_problem("nope"), std::invalid_argument);
  CHECK(default_sizes("P1").size() == 4);
  CHECK(default_sizes("P7") == std::vector<int>{5});
}
