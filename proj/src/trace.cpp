#include "psdfact/trace.hpp"

#include <algorithm>

#include "psdfact/errors.hpp"

namespace psdfact {

void RunTrace::reset(double e0) {
  e0_ = e0;
  samples_.assign(1, Sample{0.0, e0});
}

void RunTrace::record(double seconds, double error) {
  const double best = samples_.empty() ? error : std::min(error, samples_.back().error);
  const double t = samples_.empty() ? seconds : std::max(seconds, samples_.back().seconds);
  samples_.push_back(Sample{t, best});
}

double RunTrace::normalized_at(double seconds) const {
  if (samples_.empty() || e0_ <= 0.0) return e0_ > 0.0 ? 1.0 : 0.0;
  double value = samples_.front().error;
  for (const auto& s : samples_) {
    if (s.seconds > seconds) break;
    value = s.error;
  }
  return value / e0_;
}

StopRule::StopRule(const Budget& budget)
    : budget_(budget), start_(std::chrono::steady_clock::now()) {
  if (budget_.seconds && !(*budget_.seconds >= 0.0)) throw ConfigError("time budget must be >= 0");
  if (budget_.outer_iterations && *budget_.outer_iterations < 0) {
    throw ConfigError("iteration budget must be >= 0");
  }
  if (!(budget_.outer_tol >= 0.0)) throw ConfigError("outer tolerance must be >= 0");
}

double StopRule::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

bool StopRule::out_of_time() const { return budget_.seconds && elapsed() >= *budget_.seconds; }

bool StopRule::should_stop(int completed_iterations, double best_relative_error) {
  if (budget_.outer_iterations && completed_iterations >= *budget_.outer_iterations) return true;
  if (best_relative_error < budget_.outer_tol) return true;
  if (out_of_time()) return true;
  history_.push_back(best_relative_error);
  if (history_.size() > 11) history_.pop_front();
  if (history_.size() == 11) {
    const double old = history_.front();
    if (old - best_relative_error <= 1e-12 * old) return true;
  }
  return false;
}

}  // namespace psdfact
