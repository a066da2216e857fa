#include "psdfact/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "psdfact/errors.hpp"

namespace psdfact {

ProblemInstance::ProblemInstance(Matrix x, std::string name)
    : x_(std::move(x)), name_(std::move(name)) {
  if (x_.rows() < 1 || x_.cols() < 1) throw InvalidInput("problem matrix is empty");
  if (!x_.allFinite()) throw InvalidInput("problem matrix has non-finite entries");
  if ((x_.array() < 0.0).any()) throw InvalidInput("problem matrix has negative entries");
}

ProblemInstance ProblemInstance::transposed() const {
  return ProblemInstance(x_.transpose(), name_.empty() ? "" : name_ + "^T");
}

RankProfile RankProfile::uniform(int k, int m, int n, int r) {
  RankProfile p{k, std::vector<int>(m, r), std::vector<int>(n, r)};
  p.validate();
  return p;
}

void RankProfile::validate() const {
  if (k < 1) throw InvalidInput("factor size k must be positive");
  const auto bad = [this](int r) { return r < 1 || r > k; };
  if (std::any_of(r_a.begin(), r_a.end(), bad) || std::any_of(r_b.begin(), r_b.end(), bad)) {
    throw InvalidInput("inner ranks must lie in [1, k]");
  }
}

RankProfile GramFactorSet::profile() const {
  RankProfile p;
  p.k = k();
  for (const auto& x : a) p.r_a.push_back(static_cast<int>(x.cols()));
  for (const auto& x : b) p.r_b.push_back(static_cast<int>(x.cols()));
  return p;
}

std::vector<SymMatrix> GramFactorSet::grams_a() const {
  std::vector<SymMatrix> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(gram(x));
  return out;
}

std::vector<SymMatrix> GramFactorSet::grams_b() const {
  std::vector<SymMatrix> out;
  out.reserve(b.size());
  for (const auto& x : b) out.push_back(gram(x));
  return out;
}

void GramFactorSet::validate() const {
  if (a.empty() || b.empty()) throw InvalidInput("factor set has an empty side");
  const auto kk = a.front().rows();
  for (const auto* side : {&a, &b}) {
    for (const auto& x : *side) {
      if (x.rows() != kk || x.cols() < 1 || x.cols() > kk) {
        throw InvalidInput("factor shapes are inconsistent with a common k");
      }
      if (!x.allFinite()) throw InvalidInput("factor has non-finite entries");
    }
  }
}

EntryMask::EntryMask(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::map<std::tuple<int, int, int, int>, int> seen;
  for (const auto& e : entries_) {
    const auto key = std::make_tuple(e.side == Side::a ? 0 : 1, e.index, e.row, e.col);
    if (seen[key]++ > 0) throw InvalidInput("mask lists the same coordinate twice");
    if (!std::isfinite(e.value)) throw InvalidInput("mask value is not finite");
  }
}

void EntryMask::validate(const RankProfile& profile, int m, int n) const {
  for (const auto& e : entries_) {
    const auto& ranks = e.side == Side::a ? profile.r_a : profile.r_b;
    const int count = e.side == Side::a ? m : n;
    if (e.index < 0 || e.index >= count || e.row < 0 || e.row >= profile.k || e.col < 0 ||
        e.col >= ranks[e.index]) {
      throw InvalidInput("mask entry out of range (side " +
                         std::string(e.side == Side::a ? "a" : "b") + ", index " +
                         std::to_string(e.index) + ")");
    }
  }
}

void EntryMask::apply(GramFactorSet& f) const {
  for (const auto& e : entries_) f.side(e.side)[e.index](e.row, e.col) = e.value;
}

std::vector<Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>> EntryMask::side_map(
    Side side, const std::vector<Matrix>& factors) const {
  std::vector<Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>> out;
  out.reserve(factors.size());
  for (const auto& x : factors) {
    out.push_back(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(x.rows(), x.cols(), false));
  }
  for (const auto& e : entries_) {
    if (e.side == side) out[e.index](e.row, e.col) = true;
  }
  return out;
}

Matrix approximation(const std::vector<SymMatrix>& a, const std::vector<SymMatrix>& b) {
  Matrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = frob_inner(a[i], b[j]);
  return out;
}

Matrix approximation(const GramFactorSet& f) { return approximation(f.grams_a(), f.grams_b()); }

double objective(const Matrix& x, const std::vector<SymMatrix>& a,
                 const std::vector<SymMatrix>& b) {
  if (x.rows() != static_cast<Eigen::Index>(a.size()) ||
      x.cols() != static_cast<Eigen::Index>(b.size())) {
    throw InvalidInput("objective: factor counts do not match the matrix shape");
  }
  if (!a.empty() && !b.empty() && a.front().dim() != b.front().dim()) {
    throw InvalidInput("objective: factor sizes differ between sides");
  }
  const Matrix approx = approximation(a, b);
  std::vector<double> sq(static_cast<std::size_t>(x.size()));
  const Eigen::ArrayXXd r = (x - approx).array().square();
  std::copy(r.data(), r.data() + r.size(), sq.begin());
  std::sort(sq.begin(), sq.end());
  return std::accumulate(sq.begin(), sq.end(), 0.0);
}

double objective(const ProblemInstance& inst, const GramFactorSet& f) {
  return objective(inst.data(), f.grams_a(), f.grams_b());
}

double relative_error(const ProblemInstance& inst, const std::vector<SymMatrix>& a,
                      const std::vector<SymMatrix>& b) {
  const double nx = inst.norm();
  if (nx == 0.0) throw InvalidInput("relative error undefined for a zero matrix");
  return std::sqrt(objective(inst.data(), a, b)) / nx;
}

double relative_error(const ProblemInstance& inst, const GramFactorSet& f) {
  return relative_error(inst, f.grams_a(), f.grams_b());
}

double optimal_scale(const ProblemInstance& inst, const GramFactorSet& f) {
  const Matrix approx = approximation(f);
  if (approx.rows() != inst.rows() || approx.cols() != inst.cols()) {
    throw InvalidInput("optimal_scale: factor counts do not match the matrix shape");
  }
  const double den = approx.squaredNorm();
  if (!(den > 0.0)) throw InitializationFailure("degenerate initial factors (zero approximation)");
  return (inst.data().array() * approx.array()).sum() / den;
}

GramFactorSet scale_factors(const ProblemInstance& inst, GramFactorSet f) {
  const double lambda = optimal_scale(inst, f);
  const double s = std::sqrt(std::max(lambda, 0.0));
  for (auto& x : f.a) x *= s;
  return f;
}

double scaled_initial_error(const ProblemInstance& inst, const GramFactorSet& f) {
  const Matrix approx = approximation(f);
  const double den = approx.squaredNorm();
  if (!(den > 0.0)) throw InitializationFailure("degenerate initial factors (zero approximation)");
  const double num = (inst.data().array() * approx.array()).sum();
  return std::sqrt(std::max(inst.data().squaredNorm() - num * num / den, 0.0));
}

GramFactorSet random_init(const ProblemInstance& inst, const RankProfile& profile,
                          std::uint64_t seed) {
  profile.validate();
  if (static_cast<int>(profile.r_a.size()) != inst.rows() ||
      static_cast<int>(profile.r_b.size()) != inst.cols()) {
    throw InvalidInput("rank profile does not match the matrix shape");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&](int rows, int cols) {
    Matrix x(rows, cols);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = normal(rng);
    return x;
  };

  for (int attempt = 0; attempt < 10; ++attempt) {
    GramFactorSet f;
    for (int r : profile.r_a) f.a.push_back(draw(profile.k, r));
    for (int r : profile.r_b) f.b.push_back(draw(profile.k, r));
    const Matrix approx = approximation(f);
    const double den = approx.squaredNorm();
    if (!(den > 0.0)) continue;
    const double lambda = (inst.data().array() * approx.array()).sum() / den;
    if (!(lambda > 0.0)) continue;
    const double s = std::sqrt(lambda);
    for (auto& x : f.a) x *= s;
    return f;
  }
  throw InitializationFailure("random initialization degenerate after 10 draws");
}

VerifyReport verify_factorization(const ProblemInstance& inst, const GramFactorSet& f,
                                  double tol) {
  f.validate();
  VerifyReport rep;
  const auto ga = f.grams_a();
  const auto gb = f.grams_b();
  rep.relative_error = relative_error(inst, ga, gb);
  for (const auto& g : ga) {
    rep.ranks_a.push_back(numerical_rank(g));
    rep.psd = rep.psd && sym_eig(g).eigenvalues.minCoeff() >= -1e-10 * std::max(1.0, g.norm());
  }
  for (const auto& g : gb) {
    rep.ranks_b.push_back(numerical_rank(g));
    rep.psd = rep.psd && sym_eig(g).eigenvalues.minCoeff() >= -1e-10 * std::max(1.0, g.norm());
  }
  rep.passed = rep.psd && rep.relative_error < tol;
  return rep;
}

}  // namespace psdfact
