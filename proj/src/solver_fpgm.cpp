#include "psdfact/solver_fpgm.hpp"

#include <cmath>

#include "psdfact/errors.hpp"

namespace psdfact {

Matrix fpgm_gradient(const Matrix& x, const Matrix& a_stacked, const Matrix& b_stacked) {
  const Matrix residual = x - a_stacked.transpose() * b_stacked;  // m×n
  return -2.0 * b_stacked * residual.transpose();                 // k²×m
}

namespace {

// Per-row objective ||X(i,:) − 𝒜(:,i)ᵀℬ||².
Vector row_objectives(const Matrix& x, const Matrix& a_stacked, const Matrix& b_stacked) {
  return (x - a_stacked.transpose() * b_stacked).rowwise().squaredNorm();
}

}  // namespace

std::vector<SymMatrix> fpgm_subproblem(const Matrix& x, std::span<const SymMatrix> b,
                                       std::span<const SymMatrix> a0, double delta) {
  if (!(delta > 0.0)) throw ConfigError("FPGM: delta must be positive");
  if (x.rows() != static_cast<Eigen::Index>(a0.size()) ||
      x.cols() != static_cast<Eigen::Index>(b.size())) {
    throw InvalidInput("FPGM: factor counts do not match the matrix shape");
  }
  std::vector<SymMatrix> result(a0.begin(), a0.end());
  if (a0.empty() || b.empty()) return result;
  const int k = a0.front().dim();

  const Matrix bs = stack_columns(b);         // k²×n
  const Matrix gram_b = bs * bs.transpose();  // ℬℬᵀ
  const double lipschitz = 2.0 * lambda_max(SymMatrix(gram_b));
  if (!(lipschitz > 0.0)) return result;
  const Matrix xb = bs * x.transpose();  // (Xℬᵀ)ᵀ, k²×m

  Matrix prev = stack_columns(a0);
  Matrix cur = prev;
  Matrix best = cur;
  Vector best_obj = row_objectives(x, cur, bs);

  const int steps = static_cast<int>(std::ceil(k * delta));
  for (int t = 1; t <= steps; ++t) {
    const double beta = static_cast<double>(t - 2) / static_cast<double>(t + 1);
    const Matrix y = cur + beta * (cur - prev);
    // y − ∇f(y)/L with ∇f(y) = −2(Xℬᵀ − yᵀℬℬᵀ)ᵀ
    const Matrix z = y + (2.0 / lipschitz) * (xb - gram_b * y);
    Matrix next(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.cols(); ++i) {
      const SymMatrix proj = project_psd(SymMatrix(Matrix(z.col(i).reshaped(k, k))));
      next.col(i) = proj.matrix().reshaped();
    }
    prev = std::move(cur);
    cur = std::move(next);

    const Vector obj = row_objectives(x, cur, bs);
    for (Eigen::Index i = 0; i < obj.size(); ++i) {
      if (obj(i) < best_obj(i)) {
        best_obj(i) = obj(i);
        best.col(i) = cur.col(i);
      }
    }
  }
  return unstack_columns(best, k);
}

FpgmResult fpgm_solve(const ProblemInstance& inst, const RankProfile& profile,
                      const FpgmConfig& config) {
  if (!(config.delta > 0.0)) throw ConfigError("FPGM: delta must be positive");
  StopRule stop(config.budget);

  const GramFactorSet init = random_init(inst, profile, config.seed);
  FpgmResult res;
  res.a = init.grams_a();
  res.b = init.grams_b();
  const Matrix xt = inst.data().transpose();
  const double nx = inst.norm();

  const double e0 = std::sqrt(objective(inst.data(), res.a, res.b));
  res.trace.reset(e0);
  res.trace.metadata = {"fpgm", config.seed, "delta=" + std::to_string(config.delta)};
  double best_err = e0;
  std::vector<SymMatrix> best_a = res.a, best_b = res.b;

  auto a = res.a;
  auto b = res.b;
  const auto record = [&]() {
    const double err = std::sqrt(objective(inst.data(), a, b));
    if (err < best_err) {
      best_err = err;
      best_a = a;
      best_b = b;
    }
    res.trace.record(stop.elapsed(), err);
  };

  int iter = 0;
  if (!stop.should_stop(0, best_err / nx)) {
    while (true) {
      a = fpgm_subproblem(inst.data(), b, a, config.delta);
      record();
      b = fpgm_subproblem(xt, a, b, config.delta);
      record();
      ++iter;
      if (stop.should_stop(iter, best_err / nx)) break;
    }
  }

  res.a = std::move(best_a);
  res.b = std::move(best_b);
  for (const auto& m : res.a) res.factors.a.push_back(psd_root(m));
  for (const auto& m : res.b) res.factors.b.push_back(psd_root(m));
  res.relative_error = best_err / nx;
  res.outer_iterations = iter;
  return res;
}

}  // namespace psdfact
