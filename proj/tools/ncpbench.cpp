#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ncp/bench.hpp"
#include "ncp/problem.hpp"
#include "ncp/solver.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int exit_code_for(const std::vector<ncp::RunRecord>& records) {
  for (const auto& r : records)
    if (!r.solved()) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NCP solver benchmark: theta-smoothing Newton with r as an "
               "unknown, plus projection / Newton-min / Fischer-Burmeister / "
               "interior-point baselines"};
  app.require_subcommand(1);

  // solve
  std::string problem_id, method_id = "theta1", out_path;
  int size = 0, max_iter = 1000, grid = 100, instances = 100, dim = 30,
      repeats = 1;
  double tol = 1e-9, eps_reg = 1e-6;
  std::uint64_t seed = 0;
  bool as_json = false;

  auto* solve_cmd = app.add_subcommand("solve", "solve one problem");
  solve_cmd->add_option("--problem", problem_id, "problem id")->required();
  solve_cmd->add_option("--size", size, "dimension (sized families)");
  solve_cmd->add_option("--method", method_id, "method id");
  solve_cmd->add_option("--tol", tol, "residual tolerance");
  solve_cmd->add_option("--max-iter", max_iter, "iteration budget");
  solve_cmd->add_option("--eps-reg", eps_reg, "regularizer epsilon");
  solve_cmd->add_option("--seed", seed, "RNG seed (random problems)");
  solve_cmd->add_flag("--json", as_json, "emit the record as JSON");

  // suite
  std::string problems_arg, methods_arg, sizes_arg;
  auto* suite_cmd = app.add_subcommand("suite", "run a problem x method sweep");
  suite_cmd->add_option("--problems", problems_arg, "comma-separated ids")
      ->required();
  suite_cmd->add_option("--methods", methods_arg, "comma-separated ids")
      ->required();
  suite_cmd->add_option("--sizes", sizes_arg, "comma-separated sizes");
  suite_cmd->add_option("--tol", tol, "residual tolerance");
  suite_cmd->add_option("--max-iter", max_iter, "iteration budget");
  suite_cmd->add_option("--seed", seed, "RNG seed");
  suite_cmd->add_option("--out", out_path, "output CSV path")->required();

  // profile
  std::string measure_arg = "time";
  auto* profile_cmd =
      app.add_subcommand("profile", "Dolan-More profile over random instances");
  profile_cmd->add_option("--instances", instances, "number of instances");
  profile_cmd->add_option("--dim", dim, "instance dimension");
  profile_cmd->add_option("--methods", methods_arg, "comma-separated ids")
      ->required();
  profile_cmd->add_option("--measure", measure_arg, "time|iters");
  profile_cmd->add_option("--seed", seed, "base RNG seed");
  profile_cmd->add_option("--repeats", repeats, "timing repeats per cell");
  profile_cmd->add_option("--tol", tol, "residual tolerance");
  profile_cmd->add_option("--out", out_path, "output CSV path")->required();

  // ode
  auto* ode_cmd = app.add_subcommand("ode", "ODE-to-LCP example");
  ode_cmd->add_option("--grid", grid, "grid size N");
  ode_cmd->add_option("--method", method_id, "method id");
  ode_cmd->add_option("--out", out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    ncp::RunConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.eps_reg = eps_reg;
    cfg.seed = seed;

    if (solve_cmd->parsed()) {
      const ncp::NcpProblem problem = ncp::make_problem(problem_id, size, seed);
      const ncp::SolveReport rep = ncp::run_method(method_id, problem, cfg);
      ncp::RunRecord rec;
      rec.problem_id = problem_id;
      rec.size = problem.n;
      rec.method_id = method_id;
      rec.status = rep.status;
      rec.iterations = rep.iterations;
      rec.opt = rep.opt;
      rec.feas = rep.feas;
      rec.wall_time = rep.wall_time;
      if (ncp::is_theta_method(method_id)) rec.final_r = rep.final_state.r;
      if (as_json) {
        nlohmann::json j{{"problem", rec.problem_id},
                         {"size", rec.size},
                         {"method", rec.method_id},
                         {"status", ncp::to_string(rec.status)},
                         {"iterations", rec.iterations},
                         {"opt", rec.opt},
                         {"feas", rec.feas},
                         {"wall_time_s", rec.wall_time}};
        if (rec.final_r) j["final_r"] = *rec.final_r;
        std::cout << j.dump(2) << "\n";
      } else {
        std::printf("%s n=%d %s: %s iters=%d opt=%.3e feas=%.3e time=%.3fs",
                    rec.problem_id.c_str(), rec.size, rec.method_id.c_str(),
                    ncp::to_string(rec.status), rec.iterations, rec.opt,
                    rec.feas, rec.wall_time);
        if (rec.final_r) std::printf(" r=%.3e", *rec.final_r);
        std::printf("\n");
      }
      return rec.solved() ? 0 : 2;
    }

    if (suite_cmd->parsed()) {
      std::vector<int> sizes;
      for (const auto& s : split_csv(sizes_arg)) sizes.push_back(std::stoi(s));
      const auto records = ncp::run_suite(split_csv(problems_arg),
                                          split_csv(methods_arg), cfg, sizes);
      ncp::emit_csv(records, out_path);
      std::printf("%zu records -> %s\n", records.size(), out_path.c_str());
      return exit_code_for(records);
    }

    if (profile_cmd->parsed()) {
      const auto records = ncp::profile_random_suite(
          instances, dim, split_csv(methods_arg), cfg, repeats);
      const auto measure = measure_arg == "iters"
                               ? ncp::ProfileMeasure::Iterations
                               : ncp::ProfileMeasure::Time;
      const auto curves = ncp::performance_profile(records, measure);
      ncp::emit_csv(curves, out_path);
      const std::string rec_path = out_path + ".records.csv";
      ncp::emit_csv(records, rec_path);
      std::printf("%zu records -> %s, curves -> %s\n", records.size(),
                  rec_path.c_str(), out_path.c_str());
      return exit_code_for(records);
    }

    if (ode_cmd->parsed()) {
      auto [spec, problem] = ncp::build_ode_lcp(grid);
      const ncp::SolveReport rep = ncp::run_method(method_id, problem, cfg);
      const ncp::Vec w = rep.final_state.x;           // x^-
      const ncp::Vec xplus = problem.F(w);            // x^+
      const ncp::Trajectory ref =
          ncp::rk4_reference(spec.x0, spec.dx0, 5.0, 10000);
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open " + out_path);
      out << "t,x_lcp,x_rk4\n";
      double max_err = 0.0;
      for (int i = 0; i < spec.N; ++i) {
        const double t = (i + 1) * spec.h;
        const double x_lcp = xplus[i] - w[i];
        // reference trajectory is equally spaced; interpolate linearly
        const double pos = t / 5.0 * (ref.t.size() - 1);
        const size_t j = std::min(ref.t.size() - 2, static_cast<size_t>(pos));
        const double frac = pos - j;
        const double x_rk4 = ref.x[j] * (1 - frac) + ref.x[j + 1] * frac;
        max_err = std::max(max_err, std::abs(x_lcp - x_rk4));
        out << ncp::format_double(t) << ',' << ncp::format_double(x_lcp) << ','
            << ncp::format_double(x_rk4) << '\n';
      }
      std::printf("ode N=%d %s: %s iters=%d max|x_lcp - x_rk4|=%.4f -> %s\n",
                  spec.N, method_id.c_str(), ncp::to_string(rep.status),
                  rep.iterations, max_err, out_path.c_str());
      return rep.status == ncp::SolveStatus::Solved ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
