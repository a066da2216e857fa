#include "psdfact/solver_cd.hpp"

#include <cmath>

#include "psdfact/errors.hpp"

namespace psdfact {

namespace {

Matrix stack_grams(std::span<const Matrix> factors, int k) {
  Matrix out(k * k, static_cast<Eigen::Index>(factors.size()));
  for (std::size_t j = 0; j < factors.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = gram(factors[j]).matrix().reshaped();
  }
  return out;
}

}  // namespace

CdState CdState::precompute(const Matrix& x, std::span<const Matrix> free_factors,
                            std::span<const Matrix> fixed_factors) {
  if (x.rows() != static_cast<Eigen::Index>(free_factors.size()) ||
      x.cols() != static_cast<Eigen::Index>(fixed_factors.size())) {
    throw InvalidInput("precompute: factor counts do not match the matrix shape");
  }
  if (free_factors.empty() || fixed_factors.empty()) {
    throw InvalidInput("precompute: empty factor list");
  }
  CdState st;
  st.k_ = static_cast<int>(free_factors.front().rows());
  const int k = st.k_;
  const int kk = k * k;

  const Matrix bs = stack_grams(fixed_factors, k);  // k²×n, column j = vec(Bʲ)
  const Matrix as = stack_grams(free_factors, k);   // k²×m
  // D as a k²×k² matrix: D(u + v k, s + t k) = Σⱼ Bʲ_{u,v} Bʲ_{s,t}.
  const Matrix dmat = bs * bs.transpose();
  st.d_.resize(static_cast<std::size_t>(kk) * kk);
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v)
      for (int s = 0; s < k; ++s)
        for (int t = 0; t < k; ++t)
          st.d_[((u * k + v) * k + s) * k + t] = dmat(u + v * k, s + t * k);

  const Matrix residual = as.transpose() * bs - x;  // m×n, ⟨Aⁱ,Bʲ⟩ − Xᵢⱼ
  st.objective_ = residual.squaredNorm();
  const Matrix cs = bs * residual.transpose();      // k²×m

  const auto m = free_factors.size();
  st.c_.reserve(m);
  st.g_.reserve(m);
  st.e_.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix& a = free_factors[i];
    if (a.rows() != k) throw InvalidInput("precompute: inconsistent factor size");
    Matrix c = cs.col(static_cast<Eigen::Index>(i)).reshaped(k, k);
    c = 0.5 * (c + c.transpose()).eval();
    Matrix e = Matrix::Zero(k, a.cols());
    for (int p = 0; p < k; ++p) {
      for (Eigen::Index q = 0; q < a.cols(); ++q) {
        double s = 0.0;
        for (int u = 0; u < k; ++u) {
          const double* row = &st.d_[((u * k + p) * k) * k + p];
          double inner = 0.0;
          for (int w = 0; w < k; ++w) inner += row[w * k] * a(w, q);
          s += a(u, q) * inner;
        }
        e(p, q) = s;
      }
    }
    Matrix g(k, a.cols());
    g.noalias() = c * a;
    g *= 4.0;
    st.g_.push_back(std::move(g));
    st.c_.push_back(std::move(c));
    st.e_.push_back(std::move(e));
  }
  return st;
}

QuarticCoeffs CdState::displacement_coeffs(std::span<const Matrix> free_factors, int i, int p,
                                           int q) const {
  const Matrix& a = free_factors[i];
  double dot = 0.0;
  for (int w = 0; w < k_; ++w) dot += d(p, p, p, w) * a(w, q);
  return QuarticCoeffs{4.0 * d(p, p, p, p), 12.0 * dot, 4.0 * c_[i](p, p) + 8.0 * e_[i](p, q),
                       g_[i](p, q)};
}

void CdState::apply_update(std::vector<Matrix>& free_factors, int i, int p, int q,
                           double new_value) {
  Matrix& a = free_factors[i];
  const double delta = new_value - a(p, q);
  if (delta == 0.0) return;

  objective_ += displacement_coeffs(free_factors, i, p, q).value(delta);

  const double* aq = a.col(q).data();
  const double d2 = delta * delta;
  const int k = k_;

  // Aⁱ changes by δ(e_p a_qᵀ + a_q e_pᵀ) + δ² e_p e_pᵀ; contract with D.
  Matrix& c = c_[i];
  for (int v = 0; v < k; ++v) {
    for (int u = 0; u <= v; ++u) {
      const double* row = &d_[((u * k + v) * k + p) * k];
      double lin = 0.0;
      for (int w = 0; w < k; ++w) lin += row[w] * aq[w];
      const double upd = 2.0 * delta * lin + d2 * row[p];
      c(u, v) += upd;
      if (u != v) c(v, u) += upd;
    }
  }

  // E(l,q) = a_qᵀ M_l a_q with M_l(u,w) = D(u,l,w,l): exact quadratic update.
  Matrix& e = e_[i];
  for (int l = 0; l < k; ++l) {
    const double* row = &d_[((p * k + l) * k) * k + l];
    double lin = 0.0;
    for (int w = 0; w < k; ++w) lin += row[w * k] * aq[w];
    e(l, q) += 2.0 * delta * lin + d2 * row[p * k];
  }

  a(p, q) = new_value;
  Matrix& g = g_[i];
  for (Eigen::Index col = 0; col < a.cols(); ++col) {
    for (int row = 0; row < k; ++row) {
      double s = 0.0;
      for (int w = 0; w < k; ++w) s += c(row, w) * a(w, col);
      g(row, col) = 4.0 * s;
    }
  }
}

QuarticCoeffs coeffs_at(const CdState& state, std::span<const Matrix> free_factors,
                        const Penalty& penalty, int i, int p, int q) {
  const double x = free_factors[i](p, q);
  QuarticCoeffs d = state.displacement_coeffs(free_factors, i, p, q);
  QuarticCoeffs c;
  c.c3 = d.c3;
  c.c2 = d.c2 - 3.0 * d.c3 * x;
  c.c1 = d.c1 - 2.0 * c.c2 * x - 3.0 * c.c3 * x * x;
  c.c0 = d.c0 - c.c1 * x - c.c2 * x * x - c.c3 * x * x * x;
  if (penalty.active()) {
    c.c1 += 2.0 * penalty.gamma;
    c.c0 -= 2.0 * penalty.gamma * penalty.partner[i](p, q);
  }
  return c;
}

namespace {

QuarticCoeffs local_coeffs(const CdState& state, const std::vector<Matrix>& a,
                           const Penalty& penalty, int i, int p, int q) {
  QuarticCoeffs c = state.displacement_coeffs(a, i, p, q);
  if (penalty.active()) {
    c.c1 += 2.0 * penalty.gamma;
    c.c0 += 2.0 * penalty.gamma * (a[i](p, q) - penalty.partner[i](p, q));
  }
  return c;
}

// Exact minimization along one coordinate; false when no decrease is possible.
bool update_coordinate(CdState& state, std::vector<Matrix>& a, const SubproblemOptions& opt,
                       int i, int p, int q) {
  const QuarticCoeffs c = local_coeffs(state, a, opt.penalty, i, p, q);
  const double delta = minimize_quartic_safe(c);
  if (delta == 0.0 || !(c.value(delta) < 0.0)) return false;
  const double before = state.objective();
  state.apply_update(a, i, p, q, a[i](p, q) + delta);
  if (opt.observer) opt.observer(i, p, q, before, state.objective());
  return true;
}

void check_subproblem(const Matrix& x, const std::vector<Matrix>& a,
                      std::span<const Matrix> b, const SubproblemOptions& opt) {
  if (x.rows() != static_cast<Eigen::Index>(a.size()) ||
      x.cols() != static_cast<Eigen::Index>(b.size())) {
    throw InvalidInput("CD: factor counts do not match the matrix shape");
  }
  if (opt.mask && opt.mask->size() != a.size()) throw InvalidInput("CD: mask size mismatch");
  if (opt.penalty.active() && opt.penalty.partner.size() != a.size()) {
    throw InvalidInput("CD: penalty partners must pair every free factor");
  }
}

bool is_fixed(const SubproblemOptions& opt, int i, int p, int q) {
  return opt.mask && (*opt.mask)[i](p, q);
}

}  // namespace

std::vector<Matrix> cd_subproblem_cyclic(const Matrix& x, std::vector<Matrix> a,
                                         std::span<const Matrix> b,
                                         const SubproblemOptions& opt) {
  check_subproblem(x, a, b, opt);
  if (a.empty()) return a;
  CdState state = CdState::precompute(x, a, b);
  const int k = state.k();
  for (int pass = 0; pass < opt.passes; ++pass) {
    for (int i = 0; i < static_cast<int>(a.size()); ++i) {
      const int r = static_cast<int>(a[i].cols());
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < r; ++q)
          if (!is_fixed(opt, i, p, q)) update_coordinate(state, a, opt, i, p, q);
    }
  }
  return a;
}

std::vector<Matrix> cd_subproblem_gs(const Matrix& x, std::vector<Matrix> a,
                                     std::span<const Matrix> b, const SubproblemOptions& opt) {
  check_subproblem(x, a, b, opt);
  if (!(opt.alpha > 0.0)) throw ConfigError("Gauss-Southwell: alpha must be positive");
  if (a.empty()) return a;
  CdState state = CdState::precompute(x, a, b);
  const int k = state.k();
  const double gamma = opt.penalty.gamma;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    const int r = static_cast<int>(a[i].cols());
    const int updates = static_cast<int>(std::ceil(opt.alpha * k * r));
    for (int t = 0; t < updates; ++t) {
      int bp = -1, bq = -1;
      double best = 0.0;
      for (int p = 0; p < k; ++p) {
        for (int q = 0; q < r; ++q) {
          if (is_fixed(opt, i, p, q)) continue;
          double grad = state.g(i)(p, q);
          if (opt.penalty.active()) grad += 2.0 * gamma * (a[i](p, q) - opt.penalty.partner[i](p, q));
          if (std::abs(grad) > best) {
            best = std::abs(grad);
            bp = p;
            bq = q;
          }
        }
      }
      if (bp < 0 || !update_coordinate(state, a, opt, i, bp, bq)) break;
    }
  }
  return a;
}

namespace {

double max_asymmetry(const GramFactorSet& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.a.size() && i < f.b.size(); ++i) {
    if (f.a[i].cols() == f.b[i].cols()) worst = std::max(worst, (f.a[i] - f.b[i]).norm());
  }
  return worst;
}

}  // namespace

CdResult cd_solve_from(const ProblemInstance& inst, GramFactorSet f, const CdConfig& config) {
  f.validate();
  const RankProfile profile = f.profile();
  if (static_cast<int>(f.a.size()) != inst.rows() || static_cast<int>(f.b.size()) != inst.cols()) {
    throw InvalidInput("CD: factor counts do not match the matrix shape");
  }
  if (!(config.alpha > 0.0)) throw ConfigError("CD: alpha must be positive");
  if (!(config.gamma >= 0.0)) throw ConfigError("CD: gamma must be >= 0");
  const bool symmetric = config.gamma > 0.0;
  if (symmetric) {
    const Matrix& x = inst.data();
    if (x.rows() != x.cols()) throw InvalidInput("symmetric mode needs a square matrix");
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if ((x - x.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InvalidInput("symmetric mode needs a symmetric matrix");
    }
    if (profile.r_a != profile.r_b) throw ConfigError("symmetric mode needs r_a == r_b");
  }
  config.mask.validate(profile, inst.rows(), inst.cols());
  config.mask.apply(f);
  const auto map_a = config.mask.side_map(Side::a, f.a);
  const auto map_b = config.mask.side_map(Side::b, f.b);

  StopRule stop(config.budget);
  const Matrix xt = inst.data().transpose();
  const double nx = inst.norm();
  if (nx == 0.0) throw InvalidInput("cannot factorize a zero matrix");

  CdResult res;
  const double e0 = std::sqrt(objective(inst, f));
  res.trace.reset(e0);
  res.trace.metadata = {config.variant == CdVariant::cyclic ? "cd-cyclic" : "cd-gs", config.seed,
                        "alpha=" + std::to_string(config.alpha) +
                            " gamma=" + std::to_string(config.gamma)};
  double best_err = e0;
  GramFactorSet best = f;

  const auto run = [&](const Matrix& x, std::vector<Matrix> free, const std::vector<Matrix>& fixed,
                       const std::vector<BoolMap>& map, double gamma) {
    SubproblemOptions opt;
    opt.mask = config.mask.empty() ? nullptr : &map;
    opt.penalty = Penalty{gamma, fixed};
    opt.alpha = config.alpha;
    opt.observer = config.observer;
    return config.variant == CdVariant::cyclic ? cd_subproblem_cyclic(x, std::move(free), fixed, opt)
                                               : cd_subproblem_gs(x, std::move(free), fixed, opt);
  };
  const auto record = [&]() {
    const double err = std::sqrt(objective(inst, f));
    if (err < best_err) {
      best_err = err;
      if (!symmetric) best = f;
    }
    res.trace.record(stop.elapsed(), err);
  };

  double gamma = config.gamma;
  int iter = 0;
  if (!stop.should_stop(0, best_err / nx)) {
    while (true) {
      f.a = run(inst.data(), f.a, f.b, map_a, gamma);
      record();
      f.b = run(xt, f.b, f.a, map_b, gamma);
      record();
      ++iter;
      if (symmetric && config.escalate_gamma) gamma *= 1.5;
      if (stop.should_stop(iter, best_err / nx)) break;
    }
  }

  res.factors = symmetric ? std::move(f) : std::move(best);
  res.relative_error = relative_error(inst, res.factors);
  res.asymmetry = symmetric ? max_asymmetry(res.factors) : 0.0;
  res.outer_iterations = iter;
  return res;
}

CdResult cd_solve(const ProblemInstance& inst, const RankProfile& profile,
                  const CdConfig& config) {
  return cd_solve_from(inst, random_init(inst, profile, config.seed), config);
}

}  // namespace psdfact
