#include "ncp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

namespace ncp {

namespace {

const std::set<std::string> kMethods{"theta1", "theta2", "min",
                                     "fb",     "ipm",    "projection"};

SolveStatus status_from_string(const std::string& s) {
  if (s == "Solved") return SolveStatus::Solved;
  if (s == "MaxIter") return SolveStatus::MaxIter;
  if (s == "StepTooSmall") return SolveStatus::StepTooSmall;
  if (s == "LinearSolveFailure") return SolveStatus::LinearSolveFailure;
  throw std::invalid_argument("unknown status: " + s);
}

double measure_of(const RunRecord& rec, ProfileMeasure measure) {
  return measure == ProfileMeasure::Time ? rec.wall_time
                                         : static_cast<double>(rec.iterations);
}

}  // namespace

bool is_theta_method(const std::string& method_id) {
  return method_id == "theta1" || method_id == "theta2";
}

SolveReport run_method(const std::string& method_id, const NcpProblem& problem,
                       const RunConfig& cfg) {
  if (is_theta_method(method_id)) {
    SolverConfig sc;
    sc.kernel = method_id == "theta1" ? ThetaKernel::Rational
                                      : ThetaKernel::Exponential;
    sc.tol = cfg.tol;
    sc.max_iter = cfg.max_iter;
    sc.eps_reg = cfg.eps_reg;

    std::vector<double> ladder = cfg.start_ladder;
    if (ladder.empty()) ladder.push_back(1.0);
    int spent = 0;
    double elapsed = 0.0;
    SolveReport last;
    for (bool damping : {false, true}) {
      sc.damping = damping;
      for (double scale : ladder) {
        if (spent >= cfg.max_iter) break;
        sc.max_iter = cfg.max_iter - spent;
        std::optional<Vec> start;
        if (scale != 1.0 || problem.default_slack.size() == 0)
          start = Vec(scale * problem.default_start);
        std::optional<Vec> slack;
        if (scale != 1.0) slack = problem.F(*start).cwiseMax(1.0);
        SolveReport rep = solve(problem, sc, start, slack);
        spent += rep.iterations;
        elapsed += rep.wall_time;
        rep.iterations = spent;
        rep.wall_time = elapsed;
        if (rep.status == SolveStatus::Solved) return rep;
        last = rep;
        if (cfg.start_ladder.empty()) return last;  // retries disabled
      }
    }
    last.iterations = spent;
    last.wall_time = elapsed;
    return last;
  }

  BaselineConfig bc;
  bc.tol = cfg.tol;
  bc.max_iter = cfg.max_iter;
  if (method_id == "min") {
    bc.method = BaselineMethod::NewtonMin;
    return newton_min_solve(problem, bc);
  }
  if (method_id == "fb") {
    bc.method = BaselineMethod::FischerBurmeister;
    return fb_solve(problem, bc);
  }
  if (method_id == "ipm") {
    bc.method = BaselineMethod::InteriorPoint;
    return ipm_solve(problem, bc);
  }
  if (method_id == "projection") {
    bc.method = BaselineMethod::Projection;
    return projection_sweep(problem, bc).first;  // stops on Opt <= tol
  }
  throw std::invalid_argument("unknown method id: " + method_id);
}

std::vector<RunRecord> run_suite(const std::vector<std::string>& problem_ids,
                                 const std::vector<std::string>& method_ids,
                                 const RunConfig& cfg,
                                 const std::vector<int>& sizes) {
  for (const auto& m : method_ids)
    if (!kMethods.count(m)) throw std::invalid_argument("unknown method id: " + m);
  struct Cell {
    std::string problem_id;
    int size;
    std::string method_id;
  };
  std::vector<Cell> cells;
  std::set<std::tuple<std::string, int, std::string>> seen;
  for (const auto& pid : problem_ids) {
    const std::vector<int> sweep = sizes.empty() ? default_sizes(pid) : sizes;
    for (int n : sweep) {
      // id/size validation up front; fixed-size problems ignore the sweep
      const NcpProblem probe = make_problem(pid, n, cfg.seed);
      for (const auto& mid : method_ids) {
        // Table 3 omits P6 from the projection runs; mirror that here
        if (mid == "projection" && (pid == "P6" || !probe.pure())) continue;
        if (!seen.insert({pid, probe.n, mid}).second) continue;
        cells.push_back({pid, probe.n, mid});
      }
    }
  }

  std::vector<RunRecord> records(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      const Cell& c = cells[i];
      RunRecord rec;
      rec.problem_id = c.problem_id;
      rec.size = c.size;
      rec.method_id = c.method_id;
      try {
        const NcpProblem problem = make_problem(c.problem_id, c.size, cfg.seed);
        const SolveReport rep = run_method(c.method_id, problem, cfg);
        rec.status = rep.status;
        rec.iterations = rep.iterations;
        rec.opt = rep.opt;
        rec.feas = rep.feas;
        rec.wall_time = rep.wall_time;
        if (is_theta_method(c.method_id)) rec.final_r = rep.final_state.r;
      } catch (const std::exception&) {
        rec.status = SolveStatus::LinearSolveFailure;
        rec.iterations = cfg.max_iter;
        rec.opt = rec.feas = std::numeric_limits<double>::infinity();
      }
      records[i] = rec;
    }
  };
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(cells.size()));
  std::vector<std::future<void>> futures;
  for (unsigned w = 1; w < workers; ++w)
    futures.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : futures) f.get();

  std::stable_sort(records.begin(), records.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     return std::tie(a.problem_id, a.size, a.method_id) <
                            std::tie(b.problem_id, b.size, b.method_id);
                   });
  return records;
}

std::vector<RunRecord> profile_random_suite(
    int instances, int dim, const std::vector<std::string>& method_ids,
    const RunConfig& cfg, int repeats) {
  if (instances < 1 || dim < 1 || repeats < 1)
    throw std::invalid_argument("profile_random_suite: bad arguments");
  for (const auto& m : method_ids)
    if (!kMethods.count(m)) throw std::invalid_argument("unknown method id: " + m);

  struct Cell {
    std::uint64_t seed;
    std::string method_id;
  };
  std::vector<Cell> cells;
  for (int i = 0; i < instances; ++i)
    for (const auto& mid : method_ids) cells.push_back({cfg.seed + i, mid});

  std::vector<RunRecord> records(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      const Cell& c = cells[i];
      const NcpProblem problem = build_random_monotone({dim, c.seed});
      RunRecord rec;
      rec.problem_id = "random-monotone:" + std::to_string(c.seed);
      rec.size = dim;
      rec.method_id = c.method_id;
      try {
        double total_time = 0.0;
        SolveReport rep;
        for (int rep_i = 0; rep_i < repeats; ++rep_i) {
          rep = run_method(c.method_id, problem, cfg);
          total_time += rep.wall_time;
        }
        rec.status = rep.status;
        rec.iterations = rep.iterations;
        rec.opt = rep.opt;
        rec.feas = rep.feas;
        rec.wall_time = total_time / repeats;
        if (is_theta_method(c.method_id)) rec.final_r = rep.final_state.r;
      } catch (const std::exception&) {
        rec.status = SolveStatus::LinearSolveFailure;
        rec.iterations = cfg.max_iter;
        rec.opt = rec.feas = std::numeric_limits<double>::infinity();
      }
      records[i] = rec;
    }
  };
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(cells.size()));
  std::vector<std::future<void>> futures;
  for (unsigned w = 1; w < workers; ++w)
    futures.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : futures) f.get();

  std::stable_sort(records.begin(), records.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     return std::tie(a.problem_id, a.method_id) <
                            std::tie(b.problem_id, b.method_id);
                   });
  return records;
}

std::vector<ProfileCurve> performance_profile(
    const std::vector<RunRecord>& records, ProfileMeasure measure) {
  if (records.empty())
    throw std::invalid_argument("performance_profile: no records");
  const double inf = std::numeric_limits<double>::infinity();

  std::set<std::string> methods;
  std::map<std::pair<std::string, int>, std::map<std::string, const RunRecord*>>
      by_problem;
  for (const auto& rec : records) {
    methods.insert(rec.method_id);
    auto& cell = by_problem[{rec.problem_id, rec.size}][rec.method_id];
    if (cell != nullptr)
      throw std::invalid_argument("duplicate (problem, method) record");
    cell = &rec;
  }

  // ratios per problem; unsolved -> +inf
  std::map<std::string, std::vector<double>> ratios;
  for (const auto& [key, cell] : by_problem) {
    double best = inf;
    for (const auto& [mid, rec] : cell)
      if (rec->solved()) best = std::min(best, measure_of(*rec, measure));
    for (const auto& mid : methods) {
      const auto it = cell.find(mid);
      const bool solved = it != cell.end() && it->second->solved();
      double ratio = inf;
      if (solved && best > 0.0)
        ratio = measure_of(*it->second, measure) / best;
      else if (solved && best == 0.0)
        ratio = 1.0;  // all-zero measures degenerate to ties
      ratios[mid].push_back(ratio);
    }
  }
  const double n_p = static_cast<double>(by_problem.size());

  std::vector<double> grid;
  for (const auto& [mid, rs] : ratios)
    for (double r : rs)
      if (std::isfinite(r)) grid.push_back(r);
  if (grid.empty()) grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<ProfileCurve> curves;
  for (const auto& mid : methods) {
    ProfileCurve curve;
    curve.method_id = mid;
    for (double tau : grid) {
      const auto& rs = ratios[mid];
      const double count = static_cast<double>(
          std::count_if(rs.begin(), rs.end(), [tau](double r) { return r <= tau; }));
      curve.points.push_back({tau, count / n_p});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "problem,size,method,status,iterations,opt,feas,wall_time_s,final_r\n";
  for (const auto& r : records) {
    out << r.problem_id << ',' << r.size << ',' << r.method_id << ','
        << to_string(r.status) << ',' << r.iterations << ','
        << format_double(r.opt) << ',' << format_double(r.feas) << ','
        << format_double(r.wall_time) << ','
        << (r.final_r ? format_double(*r.final_r) : "") << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_json(const std::vector<RunRecord>& records,
               const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j{{"problem", r.problem_id}, {"size", r.size},
                     {"method", r.method_id},   {"status", to_string(r.status)},
                     {"iterations", r.iterations}, {"opt", r.opt},
                     {"feas", r.feas},          {"wall_time_s", r.wall_time}};
    if (r.final_r) j["final_r"] = *r.final_r;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << arr.dump(2) << '\n';
}

void emit_csv(const std::vector<ProfileCurve>& curves,
              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "method,tau,rho\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out << c.method_id << ',' << format_double(p.tau) << ','
          << format_double(p.rho) << '\n';
}

void emit_json(const std::vector<ProfileCurve>& curves,
               const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : curves) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.points) pts.push_back({{"tau", p.tau}, {"rho", p.rho}});
    arr.push_back({{"method", c.method_id}, {"points", std::move(pts)}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << arr.dump(2) << '\n';
}

std::vector<RunRecord> parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() == 8) fields.push_back("");
    if (fields.size() != 9)
      throw std::runtime_error("malformed CSV row: " + line);
    RunRecord r;
    r.problem_id = fields[0];
    r.size = std::stoi(fields[1]);
    r.method_id = fields[2];
    r.status = status_from_string(fields[3]);
    r.iterations = std::stoi(fields[4]);
    r.opt = std::stod(fields[5]);
    r.feas = std::stod(fields[6]);
    r.wall_time = std::stod(fields[7]);
    if (!fields[8].empty()) r.final_r = std::stod(fields[8]);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace ncp
