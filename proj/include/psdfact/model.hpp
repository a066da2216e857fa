#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "psdfact/matops.hpp"

namespace psdfact {

/// Nonnegative m×n data matrix to be factorized.
class ProblemInstance {
 public:
  ProblemInstance() = default;
  /// Throws InvalidInput on empty, non-finite or negative data.
  explicit ProblemInstance(Matrix x, std::string name = "");

  const Matrix& data() const { return x_; }
  int rows() const { return static_cast<int>(x_.rows()); }
  int cols() const { return static_cast<int>(x_.cols()); }
  const std::string& name() const { return name_; }
  double norm() const { return x_.norm(); }

  ProblemInstance transposed() const;

 private:
  Matrix x_;
  std::string name_;
};

/// Factor size k and per-factor inner ranks (columns of each Gram factor).
struct RankProfile {
  int k = 1;
  std::vector<int> r_a;
  std::vector<int> r_b;

  static RankProfile uniform(int k, int m, int n, int r);
  /// Throws InvalidInput unless every rank lies in [1, k].
  void validate() const;
};

enum class Side { a, b };

/// Tall factors aⁱ (k×rᵢ) and bʲ (k×rⱼ); the PSD factors are aⁱaⁱᵀ and bʲbʲᵀ.
struct GramFactorSet {
  std::vector<Matrix> a;
  std::vector<Matrix> b;

  int k() const { return a.empty() ? (b.empty() ? 0 : static_cast<int>(b.front().rows()))
                                   : static_cast<int>(a.front().rows()); }
  RankProfile profile() const;
  std::vector<Matrix>& side(Side s) { return s == Side::a ? a : b; }
  const std::vector<Matrix>& side(Side s) const { return s == Side::a ? a : b; }

  std::vector<SymMatrix> grams_a() const;
  std::vector<SymMatrix> grams_b() const;

  /// Throws InvalidInput when shapes are inconsistent or entries non-finite.
  void validate() const;
};

/// Entries of the Gram factors held at a fixed value during coordinate descent.
class EntryMask {
 public:
  struct Entry {
    Side side = Side::a;
    int index = 0;
    int row = 0;
    int col = 0;
    double value = 0.0;
  };

  EntryMask() = default;
  explicit EntryMask(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Throws InvalidInput on out-of-range indices for the given shape.
  void validate(const RankProfile& profile, int m, int n) const;
  /// Writes the fixed values into f.
  void apply(GramFactorSet& f) const;
  /// Per-factor boolean maps (true = fixed) for one side.
  std::vector<Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>> side_map(
      Side side, const std::vector<Matrix>& factors) const;

 private:
  std::vector<Entry> entries_;
};

/// Matrix of ⟨Aⁱ, Bʲ⟩.
Matrix approximation(const std::vector<SymMatrix>& a, const std::vector<SymMatrix>& b);
Matrix approximation(const GramFactorSet& f);

/// Σᵢⱼ (Xᵢⱼ − ⟨Aⁱ,Bʲ⟩)². Squared residuals are summed in ascending order so
/// the value is identical for (X, a, b) and (Xᵀ, b, a).
double objective(const ProblemInstance& inst, const GramFactorSet& f);
double objective(const Matrix& x, const std::vector<SymMatrix>& a, const std::vector<SymMatrix>& b);

/// sqrt(objective) / ||X||_F. Throws InvalidInput for X = 0.
double relative_error(const ProblemInstance& inst, const GramFactorSet& f);
double relative_error(const ProblemInstance& inst, const std::vector<SymMatrix>& a,
                      const std::vector<SymMatrix>& b);

/// λ* = argmin_λ ||X − λ X̃||_F. Throws InitializationFailure when X̃ = 0.
double optimal_scale(const ProblemInstance& inst, const GramFactorSet& f);

/// Multiplies every aⁱ by sqrt(max(λ*, 0)).
GramFactorSet scale_factors(const ProblemInstance& inst, GramFactorSet f);

/// Error ||X − λ* X̃||_F after optimal scaling, from the closed form
/// sqrt(||X||² − ⟨X, X̃⟩² / ||X̃||²).
double scaled_initial_error(const ProblemInstance& inst, const GramFactorSet& f);

/// i.i.d. N(0,1) entries from a seeded mt19937_64 (all aⁱ then all bʲ, column
/// major), optimally scaled. Re-draws up to 10 times when the scale is
/// degenerate, then throws InitializationFailure.
GramFactorSet random_init(const ProblemInstance& inst, const RankProfile& profile,
                          std::uint64_t seed);

struct VerifyReport {
  double relative_error = 0.0;
  std::vector<int> ranks_a;
  std::vector<int> ranks_b;
  bool psd = true;
  bool passed = false;
};

VerifyReport verify_factorization(const ProblemInstance& inst, const GramFactorSet& f,
                                  double tol);

}  // namespace psdfact
