#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncp/baselines.hpp"
#include "ncp/problem.hpp"
#include "ncp/solver.hpp"

namespace ncp {

/// One (problem, method) benchmark cell.
struct RunRecord {
  std::string problem_id;
  int size = 0;
  std::string method_id;
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
  double opt = 0.0;
  double feas = 0.0;
  double wall_time = 0.0;
  std::optional<double> final_r;

  bool solved() const { return status == SolveStatus::Solved; }
};

struct ProfilePoint {
  double tau = 1.0;  // performance ratio
  double rho = 0.0;  // fraction of problems solved within tau
};

struct ProfileCurve {
  std::string method_id;
  std::vector<ProfilePoint> points;
};

enum class ProfileMeasure { Time, Iterations };

/// Method ids: "theta1", "theta2", "min", "fb", "ipm", "projection".
bool is_theta_method(const std::string& method_id);

struct RunConfig {
  double tol = 1e-9;
  int max_iter = 1000;
  double eps_reg = 1e-6;
  std::uint64_t seed = 0;
  /// Retry policy for the theta methods: on failure, rerun from the scaled
  /// interior starts (then the same ladder with damping on), accumulating
  /// iterations. Empty disables retries.
  std::vector<double> start_ladder{1.0, 2.0, 0.5, 5.0};
};

/// Dispatches a method id on a problem, applying the retry ladder for the
/// theta methods. Iterations in the returned report are cumulative across
/// attempts.
SolveReport run_method(const std::string& method_id, const NcpProblem& problem,
                       const RunConfig& cfg);

/// Runs every (problem, method) cell; failures are recorded, never thrown.
/// Cells execute in parallel; the output is sorted by (problem, size,
/// method). Unknown ids throw before any run starts.
std::vector<RunRecord> run_suite(const std::vector<std::string>& problem_ids,
                                 const std::vector<std::string>& method_ids,
                                 const RunConfig& cfg,
                                 const std::vector<int>& sizes = {});

/// Runs `instances` seeded random strongly monotone problems of dimension
/// `dim` against every method (seeds seed, seed+1, ...). Records carry the
/// instance seed in the problem id ("random-monotone:<seed>"). wall_time is
/// averaged over `repeats` solves.
std::vector<RunRecord> profile_random_suite(
    int instances, int dim, const std::vector<std::string>& method_ids,
    const RunConfig& cfg, int repeats = 1);

/// Dolan-More performance profiles: ratios r_ps = t_ps / min_s t_ps with
/// +inf for unsolved runs; rho_s(tau) = |{p : r_ps <= tau}| / n_p evaluated
/// on the pooled grid of finite ratios.
std::vector<ProfileCurve> performance_profile(
    const std::vector<RunRecord>& records, ProfileMeasure measure);

/// CSV with header problem,size,method,status,iterations,opt,feas,
/// wall_time_s,final_r; floats carry 17 significant digits.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);
void emit_json(const std::vector<RunRecord>& records, const std::string& path);
void emit_csv(const std::vector<ProfileCurve>& curves, const std::string& path);
void emit_json(const std::vector<ProfileCurve>& curves,
               const std::string& path);

/// Inverse of emit_csv, used by the round-trip tests.
std::vector<RunRecord> parse_csv(const std::string& path);

std::string format_double(double v);  // 17 significant digits

}  // namespace ncp
