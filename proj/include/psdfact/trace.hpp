#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace psdfact {

/// Best-so-far error e(t) over a run, starting from the scaled initial error e0.
class RunTrace {
 public:
  struct Sample {
    double seconds = 0.0;
    double error = 0.0;
  };

  struct Metadata {
    std::string solver;
    std::uint64_t seed = 0;
    std::string parameters;
  };

  RunTrace() = default;
  explicit RunTrace(double e0) { reset(e0); }

  void reset(double e0);
  /// Appends (seconds, min(error, last best)).
  void record(double seconds, double error);

  double e0() const { return e0_; }
  double best() const { return samples_.empty() ? e0_ : samples_.back().error; }
  const std::vector<Sample>& samples() const { return samples_; }
  /// e(t)/e0 after step-interpolation (last value carried forward).
  double normalized_at(double seconds) const;

  Metadata metadata;

 private:
  double e0_ = 0.0;
  std::vector<Sample> samples_;
};

/// When to stop the outer alternation loop. With no time limit and no
/// iteration cap the loop runs until outer_tol or stagnation.
struct Budget {
  std::optional<double> seconds;
  std::optional<int> outer_iterations;
  double outer_tol = 0.0;  // stop once relative error < outer_tol

  static Budget time(double s) { return Budget{s, std::nullopt, 0.0}; }
  static Budget iterations(int n) { return Budget{std::nullopt, n, 0.0}; }
};

/// Shared stopping rule: budget, tolerance, or relative improvement of the best
/// error below 1e-12 across 10 consecutive outer iterations.
class StopRule {
 public:
  explicit StopRule(const Budget& budget);

  double elapsed() const;
  bool out_of_time() const;
  /// Call after every completed outer iteration with the best relative error.
  bool should_stop(int completed_iterations, double best_relative_error);

 private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
  std::deque<double> history_;
};

}  // namespace psdfact
