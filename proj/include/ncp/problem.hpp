#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncp/types.hpp"

namespace ncp {

/// A solution certificate shipped with a problem: primal point and F there.
struct KnownSolution {
  Vec x;
  Vec fx;
};

/// A complementarity problem in the mixed form
///
///   E(u) = 0,    0 <= u[comp_index] perp F(u) >= 0,
///
/// over u in R^n with `pairs` complementarity pairs. A pure NCP has
/// pairs == n, comp_index = (0..n-1) and no equality part; the geochemical
/// model keeps three equality rows and pairs the last two unknowns with F.
struct NcpProblem {
  std::string name;
  int n = 0;      // number of unknowns
  int pairs = 0;  // number of complementarity pairs

  std::vector<int> comp_index;  // u-components in complementarity, size pairs

  std::function<Vec(const Vec&)> F;   // R^n -> R^pairs
  std::function<Mat(const Vec&)> J;   // pairs x n Jacobian of F
  std::function<Vec(const Vec&)> E;   // R^n -> R^(n-pairs), null when pure
  std::function<Mat(const Vec&)> JE;  // (n-pairs) x n Jacobian of E

  std::vector<KnownSolution> known_solutions;
  Vec default_start;  // u0, strictly positive
  Vec default_slack;  // z0; empty means max(F(u0), 1) componentwise

  bool pure() const { return pairs == n; }
  int equality_rows() const { return n - pairs; }

  /// u restricted to the complementarity components.
  Vec comp_part(const Vec& u) const;

  /// Default slack policy: stored z0 when present, else max(F(u0), 1).
  Vec start_slack(const Vec& u0) const;
};

enum class P1P2Variant { P1, P2 };
enum class KojimaShindoVariant { Degenerate, Nondegenerate };
enum class NashCournotVariant { FiveFirms, TenFirms };

/// Tridiagonal cubic family: F_i(x) = -x_{i+1} + 2x_i - x_{i-1} + x_i^3/3 - b_i
/// with b_i = (-1)^i (P1) or (-1)^i / sqrt(i) (P2), x_0 = x_{n+1} = 0.
NcpProblem build_p1_p2(P1P2Variant variant, int n);

/// F_i(x) = -x_{i+1} + 2x_i - x_{i-1} + arctan(x_i) + (i - pi/2).
NcpProblem build_p3(int n);

/// The 4-dimensional Kojima-Shindo examples (degenerate = P4, which has two
/// solutions, one of them with x3 = F3 = 0; nondegenerate = P5, unique
/// solution (sqrt(6)/2, 0, 0, 1/2)).
NcpProblem build_kojima_shindo(KojimaShindoVariant variant);

/// The 7-dimensional affine problem with nondegenerate solution
/// (0.2727, 2.0909, 0, 0.54545, 0.4545, 0, 0).
NcpProblem build_p6();

/// Nash-Cournot oligopoly with inverse demand P(Q) = 5000^(1/g) Q^(-1/g) and
/// cost C_i(x) = c_i x + b_i/(1+b_i) L_i^(1/b_i) x^((1+b_i)/b_i). Evaluations
/// clamp x_i to >= 1e-12 (P and the cost derivative need positive arguments).
NcpProblem build_nash_cournot(NashCournotVariant variant);

struct RandomMonotoneSpec {
  int n = 0;
  std::uint64_t seed = 0;
};

/// Parses the JSON instance descriptor {"n": int, "seed": int}.
RandomMonotoneSpec parse_random_monotone_descriptor(const std::string& json);

/// The generator's raw pieces, exposed so reimplementations can reproduce
/// instances from seeds and tests can pin the draw contract.
struct RandomMonotoneParts {
  Mat A;  // entries U(-5, 5)
  Mat B;  // skew-symmetric, strict upper triangle U(-5, 5)
  Mat D;  // diagonal U(0, 3)
  Vec q;  // entries U(-500, 0)
};

RandomMonotoneParts random_monotone_parts(const RandomMonotoneSpec& spec);

/// Affine strongly monotone instance F(x) = (A A^T + B + D) x + q with
/// A ~ U(-5,5)^{n x n}, B skew-symmetric with entries U(-5,5), D diagonal
/// U(0,3) and q ~ U(-500,0)^n.
///
/// Draw order (std::mt19937_64 seeded with spec.seed, each variate mapped to
/// [0,1) as (g() >> 11) * 2^-53): A row-major, strict upper triangle of B
/// row-major, D, q. Identical (n, seed) reproduce the instance bit-exactly.
NcpProblem build_random_monotone(const RandomMonotoneSpec& spec);

struct GeoChemParams {
  Eigen::Vector2d T;  // total concentrations, >= 0
  Eigen::Vector2d K;  // equilibrium constants, > 0
};

GeoChemParams default_geochem_params();

/// The 2-salts equilibrium model: unknowns u = (x1, x2, x3, p1, p2) with
/// equalities (T1 - x1 - p1, T2 - x2 - p2, x3 - x2 - x1) and pairs
/// 0 <= p perp (K1 - x1 x3, K2 - x2 x3) >= 0. Default start (3,1,4,5,6) with
/// slack (1,1).
NcpProblem build_geochem(const GeoChemParams& params);

struct GeoChemSolution {
  Eigen::Vector3d x;
  Eigen::Vector2d p;
  int case_id = 0;  // which sign pattern of (p1, p2) held
};

/// Closed-form solution of the 2-salts model via the four-case analysis on
/// the signs of (p1, p2); cases are tested in order and the first one whose
/// validity conditions hold is returned. Throws std::runtime_error when no
/// case applies.
GeoChemSolution geochem_exact_solution(const GeoChemParams& params);

struct OdeLcpSpec {
  int N = 0;
  double h = 0.0;
  double x0 = -4.0;
  double dx0 = 5.0;
  Mat N1, N2;
  Vec q;
  bool ill_conditioned = false;  // set when h >= 1
};

/// Finite-difference reduction of x'' - |x| = -2 - t, x(0) = -4, x'(0) = 5 on
/// [0, 5] to the LCP N1 x+ - N2 x- = q, 0 <= x+ perp x- >= 0. The returned NCP
/// takes w = x- as primal with F(w) = N1^{-1}(N2 w + q) = x+; the trajectory
/// is recovered as x = F(w) - w on the grid t_i = i h.
std::pair<OdeLcpSpec, NcpProblem> build_ode_lcp(int N);

struct Trajectory {
  std::vector<double> t;
  std::vector<double> x;
};

/// Classical fixed-step RK4 on (x, x')' = (x', |x| - 2 - t).
Trajectory rk4_reference(double x0, double dx0, double t_end, int steps);

/// Catalog lookup: "P1".."P8", "geochem", "ode-lcp", "random-monotone".
/// size selects n where the family is sized (P1-P3, ode-lcp,
/// random-monotone); seed feeds the random generator.
NcpProblem make_problem(const std::string& id, int size = 0,
                        std::uint64_t seed = 0);

/// Sizes of the default benchmark sweep per problem id.
std::vector<int> default_sizes(const std::string& id);

}  // namespace ncp
