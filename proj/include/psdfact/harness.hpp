#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psdfact/model.hpp"
#include "psdfact/trace.hpp"

namespace psdfact {

enum class SolverKind { fpgm, cd_cyclic, cd_gs };

/// Parses "fpgm", "cd-cyclic" or "cd-gs".
SolverKind parse_solver(std::string_view name);
std::string to_string(SolverKind kind);

struct SolverConfig {
  SolverKind solver = SolverKind::cd_gs;
  double delta = 5.0;
  double alpha = 0.5;
  bool symmetric = false;
  double gamma = 1.0;           // used only when symmetric
  bool escalate_gamma = false;
  EntryMask mask;
  Budget budget = Budget::iterations(100);
  std::uint64_t seed = 0;
};

struct RunResult {
  std::uint64_t seed = 0;
  GramFactorSet factors;
  RunTrace trace;
  double relative_error = 0.0;
  double seconds = 0.0;
  int outer_iterations = 0;
};

/// One solver run from the seed in config.
RunResult solve_once(const ProblemInstance& inst, const RankProfile& profile,
                     const SolverConfig& config);

struct MultiStartOptions {
  int restarts = 1;
  int threads = 0;  // 0: one per hardware core
  /// Stop launching new runs once a finished run is below this relative error.
  std::optional<double> success_threshold;
};

struct BenchmarkReport {
  std::string instance;
  SolverKind solver = SolverKind::cd_gs;
  int k = 0;
  std::vector<RunResult> runs;  // ordered by seed

  const RunResult& best() const;
  double best_error() const { return best().relative_error; }
};

/// Runs with seeds config.seed + 0, 1, ..., restarts − 1.
BenchmarkReport multi_start(const ProblemInstance& inst, const RankProfile& profile,
                            const SolverConfig& config, const MultiStartOptions& options);

/// Pointwise mean of e(t)/e0 over the traces, each carried forward onto grid.
std::vector<double> average_E(const std::vector<RunTrace>& traces, const std::vector<double>& grid);

std::string report_to_json(const std::vector<BenchmarkReport>& reports);
void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace);

}  // namespace psdfact
