#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace psdfact {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix. The stored array is always exactly symmetric:
/// construction averages the input with its transpose.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);
  explicit SymMatrix(const Eigen::Ref<const Matrix>& m);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const Eigen::Ref<const Vector>& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int p, int q) const { return m_(p, q); }
  const Matrix& matrix() const { return m_; }
  double norm() const { return m_.norm(); }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // columns, orthonormal
};

/// Cyclic Jacobi eigensolver. Stops once the off-diagonal Frobenius mass
/// drops below 1e-14 * ||C||_F, or after 100 sweeps.
EigenDecomposition sym_eig(const SymMatrix& c);

/// Frobenius-nearest positive semidefinite matrix: U max(Λ, 0) Uᵀ.
SymMatrix project_psd(const SymMatrix& c);

double lambda_max(const SymMatrix& m);

/// a aᵀ for a tall k×r factor.
SymMatrix gram(const Eigen::Ref<const Matrix>& a);

/// Σ_{p,q} A(p,q) B(p,q).
double frob_inner(const SymMatrix& a, const SymMatrix& b);

/// Tall factor a (k×k) with a aᵀ equal to the PSD part of p.
Matrix psd_root(const SymMatrix& p);

/// Number of eigenvalues above rel_tol * λ_max.
int numerical_rank(const SymMatrix& p, double rel_tol = 1e-8);

/// Column-stacked vec() of each matrix: a k²×N array. Inverse of unstack.
Matrix stack_columns(std::span<const SymMatrix> mats);
std::vector<SymMatrix> unstack_columns(const Eigen::Ref<const Matrix>& stacked, int dim);

}  // namespace psdfact
