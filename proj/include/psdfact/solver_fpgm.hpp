#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psdfact/matops.hpp"
#include "psdfact/model.hpp"
#include "psdfact/trace.hpp"

namespace psdfact {

struct FpgmConfig {
  double delta = 5.0;  // inner steps per subproblem = ceil(k * delta)
  Budget budget = Budget::iterations(100);
  std::uint64_t seed = 0;
};

/// ∇f = −2 (X − 𝒜ᵀℬ) ℬᵀ, returned in the k²×m layout of 𝒜.
Matrix fpgm_gradient(const Matrix& x, const Matrix& a_stacked, const Matrix& b_stacked);

/// Accelerated projected gradient on min Σᵢⱼ (Xᵢⱼ − ⟨Aⁱ,Bʲ⟩)² over PSD Aⁱ with
/// B fixed. Runs ceil(k·delta) steps with step 1/L, L = 2 λ_max(ℬℬᵀ), momentum
/// restarted from A0. Each row's subproblem is separable, so the best iterate
/// seen (including A0) is returned per factor. All-zero B leaves A0 unchanged.
std::vector<SymMatrix> fpgm_subproblem(const Matrix& x, std::span<const SymMatrix> b,
                                       std::span<const SymMatrix> a0, double delta);

struct FpgmResult {
  std::vector<SymMatrix> a;
  std::vector<SymMatrix> b;
  GramFactorSet factors;  // psd_root of a and b (k columns each)
  RunTrace trace;
  double relative_error = 0.0;
  int outer_iterations = 0;
};

/// Alternating FPGM from random_init(inst, profile, seed), returning the best
/// pair seen. Rank profiles only shape the initial point.
FpgmResult fpgm_solve(const ProblemInstance& inst, const RankProfile& profile,
                      const FpgmConfig& config);

}  // namespace psdfact
