#include "psdfact/matops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psdfact/errors.hpp"

namespace psdfact {

SymMatrix::SymMatrix(int dim) : m_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw InvalidInput("SymMatrix: dimension must be positive");
}

SymMatrix::SymMatrix(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidInput("SymMatrix: expected a non-empty square matrix");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int dim) {
  return SymMatrix(Matrix::Identity(dim, dim));
}

SymMatrix SymMatrix::diagonal(const Eigen::Ref<const Vector>& d) {
  return SymMatrix(Matrix(d.asDiagonal()));
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index q = 0; q < a.cols(); ++q)
    for (Eigen::Index p = 0; p < a.rows(); ++p)
      if (p != q) s += a(p, q) * a(p, q);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& c) {
  const Matrix& in = c.matrix();
  if (!in.allFinite()) throw InvalidInput("sym_eig: non-finite entries");

  const int n = c.dim();
  Matrix a = in;
  Matrix v = Matrix::Identity(n, n);
  const double tol = 1e-14 * in.norm();

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        for (int r = 0; r < n; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = cs * arp - sn * arq;
          a(r, q) = sn * arp + cs * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = cs * apr - sn * aqr;
          a(q, r) = sn * apr + cs * aqr;
        }
        a(p, q) = a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = cs * vrp - sn * vrq;
          v(r, q) = sn * vrp + cs * vrq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x) > a(y, y); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (int i = 0; i < n; ++i) {
    out.eigenvalues(i) = a(order[i], order[i]);
    out.eigenvectors.col(i) = v.col(order[i]);
  }
  return out;
}

SymMatrix project_psd(const SymMatrix& c) {
  const auto eig = sym_eig(c);
  const Vector clipped = eig.eigenvalues.cwiseMax(0.0);
  return SymMatrix(eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.transpose());
}

double lambda_max(const SymMatrix& m) { return sym_eig(m).eigenvalues(0); }

SymMatrix gram(const Eigen::Ref<const Matrix>& a) {
  if (a.rows() < 1 || a.cols() < 1) throw InvalidInput("gram: empty factor");
  return SymMatrix(a * a.transpose());
}

double frob_inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("frob_inner: dimension mismatch");
  const int k = a.dim();
  double s = 0.0;
  for (int q = 0; q < k; ++q)
    for (int p = 0; p < k; ++p) s += a(p, q) * b(p, q);
  return s;
}

Matrix psd_root(const SymMatrix& p) {
  const auto eig = sym_eig(p);
  const Vector roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors * roots.asDiagonal();
}

int numerical_rank(const SymMatrix& p, double rel_tol) {
  const auto eig = sym_eig(p);
  const double top = eig.eigenvalues(0);
  if (top <= 0.0) return 0;
  return static_cast<int>((eig.eigenvalues.array() > rel_tol * top).count());
}

Matrix stack_columns(std::span<const SymMatrix> mats) {
  if (mats.empty()) return Matrix();
  const int k = mats.front().dim();
  Matrix out(k * k, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].dim() != k) throw InvalidInput("stack_columns: mixed dimensions");
    out.col(static_cast<Eigen::Index>(i)) = mats[i].matrix().reshaped();
  }
  return out;
}

std::vector<SymMatrix> unstack_columns(const Eigen::Ref<const Matrix>& stacked, int dim) {
  if (stacked.rows() != static_cast<Eigen::Index>(dim) * dim) {
    throw InvalidInput("unstack_columns: row count is not dim²");
  }
  std::vector<SymMatrix> out;
  out.reserve(stacked.cols());
  for (Eigen::Index i = 0; i < stacked.cols(); ++i) {
    out.emplace_back(Matrix(stacked.col(i).reshaped(dim, dim)));
  }
  return out;
}

}  // namespace psdfact
