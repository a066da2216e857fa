#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "psdfact/model.hpp"
#include "psdfact/quartic.hpp"
#include "psdfact/trace.hpp"

namespace psdfact {

using BoolMap = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Quantities maintained by coordinate descent over the free factors aⁱ with
/// the bʲ held fixed:
///   Cⁱ = Σⱼ (⟨Aⁱ,Bʲ⟩ − Xᵢⱼ) Bʲ                      (k×k)
///   D_{u,v,s,t} = Σⱼ Bʲ_{u,v} Bʲ_{s,t}                (k⁴, read-only)
///   Eⁱ_{p,q} = aⁱ_{:,q}ᵀ (Σⱼ Bʲ_{:,p} Bʲ_{:,p}ᵀ) aⁱ_{:,q}  (k×rᵢ)
///   gⁱ = 4 Cⁱ aⁱ, the gradient of the data term      (k×rᵢ)
/// plus the data objective itself. After a coordinate update every quantity
/// is refreshed in O(k³) without touching the n dimension.
class CdState {
 public:
  static CdState precompute(const Matrix& x, std::span<const Matrix> free_factors,
                            std::span<const Matrix> fixed_factors);

  int k() const { return k_; }
  int count() const { return static_cast<int>(c_.size()); }
  const Matrix& c(int i) const { return c_[i]; }
  const Matrix& g(int i) const { return g_[i]; }
  const Matrix& e(int i) const { return e_[i]; }
  double d(int u, int v, int s, int t) const { return d_[((u * k_ + v) * k_ + s) * k_ + t]; }
  /// Σᵢⱼ (Xᵢⱼ − ⟨Aⁱ,Bʲ⟩)², tracked through every update.
  double objective() const { return objective_; }

  /// Derivative coefficients of f(a_pq + δ) − f(a_pq) as a polynomial in the
  /// displacement δ (data term only).
  QuarticCoeffs displacement_coeffs(std::span<const Matrix> free_factors, int i, int p,
                                    int q) const;

  /// Sets free_factors[i](p,q) = new_value and refreshes Cⁱ, gⁱ, column q of
  /// Eⁱ and the objective. A zero displacement leaves everything untouched.
  void apply_update(std::vector<Matrix>& free_factors, int i, int p, int q, double new_value);

 private:
  int k_ = 0;
  std::vector<double> d_;
  std::vector<Matrix> c_;
  std::vector<Matrix> e_;
  std::vector<Matrix> g_;
  double objective_ = 0.0;
};

/// Symmetric-mode penalty γ Σᵢ ||aⁱ − bⁱ||² coupling the free factors to their
/// partners on the fixed side.
struct Penalty {
  double gamma = 0.0;
  std::span<const Matrix> partner;
  bool active() const { return gamma > 0.0; }
};

/// Coefficients (c3,c2,c1,c0) of ∇_{a_pq} f as a cubic in the absolute value of
/// a_pq, including the penalty's (c1 + 2γ, c0 − 2γ b_pq) terms.
QuarticCoeffs coeffs_at(const CdState& state, std::span<const Matrix> free_factors,
                        const Penalty& penalty, int i, int p, int q);

/// Called after every coordinate update with the factor index, coordinate,
/// and the data objective before and after.
using UpdateObserver = std::function<void(int i, int p, int q, double before, double after)>;

struct SubproblemOptions {
  const std::vector<BoolMap>* mask = nullptr;  // true = fixed, never updated
  Penalty penalty;
  int passes = 1;       // cyclic sweeps
  double alpha = 0.5;   // Gauss-Southwell: ceil(alpha·k·rᵢ) updates per factor
  UpdateObserver observer;
};

/// Cyclic coordinate descent: sweeps i, then p, then q in order, minimizing
/// each unmasked coordinate exactly.
std::vector<Matrix> cd_subproblem_cyclic(const Matrix& x, std::vector<Matrix> free_factors,
                                         std::span<const Matrix> fixed_factors,
                                         const SubproblemOptions& options = {});

/// Gauss-Southwell coordinate descent: per factor, repeatedly updates the
/// unmasked coordinate with the largest |gradient| (first in (p,q) order on
/// ties).
std::vector<Matrix> cd_subproblem_gs(const Matrix& x, std::vector<Matrix> free_factors,
                                     std::span<const Matrix> fixed_factors,
                                     const SubproblemOptions& options = {});

enum class CdVariant { cyclic, gauss_southwell };

struct CdConfig {
  CdVariant variant = CdVariant::gauss_southwell;
  double alpha = 0.5;
  double gamma = 0.0;             // > 0 enables symmetric mode
  bool escalate_gamma = false;    // γ ← 1.5γ after every outer iteration
  EntryMask mask;
  Budget budget = Budget::iterations(100);
  std::uint64_t seed = 0;
  UpdateObserver observer;        // forwarded to every subproblem
};

struct CdResult {
  GramFactorSet factors;
  RunTrace trace;
  double relative_error = 0.0;
  double asymmetry = 0.0;  // maxᵢ ||aⁱ − bⁱ||_F in symmetric mode, else 0
  int outer_iterations = 0;
};

/// Alternating coordinate descent from random_init(inst, profile, seed) with
/// masked entries set to their fixed values. The b-side is updated through
/// the transposed problem. Symmetric mode (gamma > 0) requires a square
/// symmetric X and identical inner ranks on both sides, and returns the final
/// iterate; otherwise the best iterate seen is returned.
CdResult cd_solve(const ProblemInstance& inst, const RankProfile& profile,
                  const CdConfig& config);

/// Starts cd_solve from the given factors instead of a random draw.
CdResult cd_solve_from(const ProblemInstance& inst, GramFactorSet start, const CdConfig& config);

}  // namespace psdfact
