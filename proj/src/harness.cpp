#include "psdfact/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "psdfact/errors.hpp"
#include "psdfact/solver_cd.hpp"
#include "psdfact/solver_fpgm.hpp"

namespace psdfact {

SolverKind parse_solver(std::string_view name) {
  if (name == "fpgm") return SolverKind::fpgm;
  if (name == "cd-cyclic") return SolverKind::cd_cyclic;
  if (name == "cd-gs") return SolverKind::cd_gs;
  throw ConfigError("unknown solver '" + std::string(name) + "' (expected fpgm, cd-cyclic or cd-gs)");
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::fpgm: return "fpgm";
    case SolverKind::cd_cyclic: return "cd-cyclic";
    case SolverKind::cd_gs: return "cd-gs";
  }
  return "?";
}

RunResult solve_once(const ProblemInstance& inst, const RankProfile& profile,
                     const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  out.seed = config.seed;
  if (config.solver == SolverKind::fpgm) {
    if (config.symmetric) throw ConfigError("symmetric mode is only available for CD solvers");
    if (!config.mask.empty()) throw ConfigError("masks are only available for CD solvers");
    FpgmResult r = fpgm_solve(inst, profile, FpgmConfig{config.delta, config.budget, config.seed});
    out.factors = std::move(r.factors);
    out.trace = std::move(r.trace);
    out.relative_error = r.relative_error;
    out.outer_iterations = r.outer_iterations;
  } else {
    CdConfig cd;
    cd.variant = config.solver == SolverKind::cd_cyclic ? CdVariant::cyclic : CdVariant::gauss_southwell;
    cd.alpha = config.alpha;
    if (config.symmetric) {
      if (!(config.gamma > 0.0)) throw ConfigError("symmetric mode needs gamma > 0");
      cd.gamma = config.gamma;
      cd.escalate_gamma = config.escalate_gamma;
    }
    cd.mask = config.mask;
    cd.budget = config.budget;
    cd.seed = config.seed;
    CdResult r = cd_solve(inst, profile, cd);
    out.factors = std::move(r.factors);
    out.trace = std::move(r.trace);
    out.relative_error = r.relative_error;
    out.outer_iterations = r.outer_iterations;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

const RunResult& BenchmarkReport::best() const {
  if (runs.empty()) throw InvalidInput("benchmark report has no runs");
  return *std::min_element(runs.begin(), runs.end(), [](const RunResult& x, const RunResult& y) {
    return x.relative_error < y.relative_error;
  });
}

BenchmarkReport multi_start(const ProblemInstance& inst, const RankProfile& profile,
                            const SolverConfig& config, const MultiStartOptions& options) {
  if (options.restarts < 1) throw ConfigError("restarts must be >= 1");
  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, options.restarts);

  std::vector<std::optional<RunResult>> slots(static_cast<std::size_t>(options.restarts));
  std::atomic<int> next{0};
  std::atomic<bool> done{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&]() {
    while (!done.load()) {
      const int idx = next.fetch_add(1);
      if (idx >= options.restarts) break;
      SolverConfig cfg = config;
      cfg.seed = config.seed + static_cast<std::uint64_t>(idx);
      try {
        RunResult r = solve_once(inst, profile, cfg);
        if (options.success_threshold && r.relative_error < *options.success_threshold) done = true;
        slots[static_cast<std::size_t>(idx)] = std::move(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        done = true;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  BenchmarkReport report;
  report.instance = inst.name();
  report.solver = config.solver;
  report.k = profile.k;
  for (auto& s : slots) {
    if (s) report.runs.push_back(std::move(*s));
  }
  return report;
}

std::vector<double> average_E(const std::vector<RunTrace>& traces, const std::vector<double>& grid) {
  if (traces.empty()) throw InvalidInput("average_E: no traces");
  std::vector<double> out(grid.size(), 0.0);
  for (const auto& t : traces) {
    for (std::size_t g = 0; g < grid.size(); ++g) out[g] += t.normalized_at(grid[g]);
  }
  for (auto& v : out) v /= static_cast<double>(traces.size());
  return out;
}

std::string report_to_json(const std::vector<BenchmarkReport>& reports) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& rep : reports) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : rep.runs) {
      runs.push_back({{"seed", r.seed},
                      {"relative_error", r.relative_error},
                      {"seconds", r.seconds},
                      {"outer_iterations", r.outer_iterations},
                      {"e0", r.trace.e0()}});
    }
    doc.push_back({{"instance", rep.instance},
                   {"solver", to_string(rep.solver)},
                   {"k", rep.k},
                   {"best_relative_error", rep.runs.empty() ? nullptr : nlohmann::json(rep.best_error())},
                   {"runs", std::move(runs)}});
  }
  return doc.dump(2);
}

void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write trace file " + path.string());
  char buf[64];
  for (const auto& s : trace.samples()) {
    std::snprintf(buf, sizeof buf, "%.9g,%.17g\n", s.seconds, s.error);
    out << buf;
  }
}

}  // namespace psdfact
