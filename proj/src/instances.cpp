#include "psdfact/instances.hpp"

#include <bit>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include "psdfact/errors.hpp"

namespace psdfact {

ProblemInstance gen_ngon(int n, NgonScaling scaling) {
  if (n < 3) throw InvalidInput("gen_ngon: n must be >= 3, got " + std::to_string(n));
  const double pi = std::numbers::pi;
  const double c1 = std::cos(pi / n);
  const double denom = scaling == NgonScaling::adjacent ? c1 - std::cos(3.0 * pi / n) : c1;
  Vector row(n);
  for (int d = 0; d < n; ++d) {
    if (d == 0 || d == n - 1) {
      row(d) = 0.0;
    } else {
      row(d) = (c1 - std::cos((2.0 * d + 1.0) * pi / n)) / denom;
    }
  }
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = row(((j - i) % n + n) % n);
  return ProblemInstance(std::move(s), "ngon" + std::to_string(n));
}

Matrix rotate_columns(const Matrix& in, int shift) {
  const auto n = in.cols();
  Matrix out(in.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.col(j) = in.col(((j - shift) % n + n) % n);
  }
  return out;
}

namespace {

std::vector<std::vector<int>> subsets(int n, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(size);
  for (int i = 0; i < size; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = size - 1;
    while (i >= 0 && cur[i] == n - size + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int t = i + 1; t < size; ++t) cur[t] = cur[t - 1] + 1;
  }
  return out;
}

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

}  // namespace

ProblemInstance gen_pn(int n) {
  if (n < 3) throw InvalidInput("gen_pn: n must be >= 3, got " + std::to_string(n));
  const int lo = n / 2, hi = n - n / 2;
  if (binomial(n, lo) > 1e4) {
    throw InvalidInput("gen_pn: n = " + std::to_string(n) + " gives more than 10000 rows");
  }
  const auto u = subsets(n, lo);
  const auto v = subsets(n, hi);
  Matrix p(static_cast<Eigen::Index>(u.size()), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      int common = 0;
      for (int x : u[i])
        for (int y : v[j]) common += x == y;
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = common;
    }
  }
  return ProblemInstance(std::move(p), "P" + std::to_string(n));
}

ProblemInstance gen_cor(int n) {
  if (n < 1 || n > 12) throw InvalidInput("gen_cor: n must be in [1, 12], got " + std::to_string(n));
  const int size = 1 << n;
  Matrix c(size, size);
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      const double s = 1.0 - std::popcount(static_cast<unsigned>(u & v));
      c(u, v) = s * s;
    }
  }
  return ProblemInstance(std::move(c), "COR" + std::to_string(n));
}

Family parse_family(std::string_view name) {
  if (name == "ngon") return Family::ngon;
  if (name == "pn") return Family::pn;
  if (name == "cor") return Family::cor;
  throw InvalidInput("unknown family '" + std::string(name) + "' (expected ngon, pn or cor)");
}

ProblemInstance generate(Family family, int n) {
  switch (family) {
    case Family::ngon: return gen_ngon(n);
    case Family::pn: return gen_pn(n);
    case Family::cor: return gen_cor(n);
  }
  throw InvalidInput("unknown family");
}

std::string FamilySpec::label() const {
  switch (family) {
    case Family::ngon: return std::to_string(n) + "-gon";
    case Family::pn: return "P" + std::to_string(n);
    case Family::cor: return "COR" + std::to_string(n);
  }
  return "?";
}

ProblemInstance FamilySpec::generate() const { return psdfact::generate(family, n); }

std::vector<FamilySpec> table1() {
  return {
      {Family::ngon, 12, 5}, {Family::ngon, 16, 5}, {Family::ngon, 20, 6},
      {Family::ngon, 24, 6}, {Family::ngon, 28, 6}, {Family::ngon, 32, 6},
      {Family::pn, 5, 4},    {Family::pn, 6, 6},    {Family::pn, 7, 6},
      {Family::cor, 3, 4},   {Family::cor, 4, 5},   {Family::cor, 5, 6},
  };
}

namespace {

using Rows = std::initializer_list<std::initializer_list<double>>;

Matrix mat(Rows rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

Matrix col(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

const double kSqrt2 = std::numbers::sqrt2;
const double kPhi = std::numbers::phi;

Fixture s4_fixture() {
  GramFactorSet f;
  f.a = {col({1, 0, 0}), col({0, 1, 0}), col({0, 0, 1}), col({1, -1, 1})};
  f.b = {col({0, 0, 1}), col({1, 0, 0}), col({1, 1, 0}), col({0, 1, 1})};
  return {"s4_k3", gen_ngon(4), std::move(f)};
}

Fixture s5_fixture() {
  const double sp = std::sqrt(kPhi);
  const double t = (1.0 - sp * sp * sp) / 2.0;
  GramFactorSet f;
  f.a = {col({1, 0, 0, 0}), col({0, 1, 0, 0}), col({0, 0, 1, 0}), col({0, 0, 0, 1}),
         col({1 / (1 + sp), 1 / (1 + sp), 1, kPhi - 1 / sp})};
  f.b = {mat({{0, 0}, {0, 0}, {t, std::sqrt(1 - t * t)}, {sp, 0}}), col({1, 0, 0, 1}),
         col({sp, 1, 0, 0}), col({1, sp, -1, 0}), col({0, -1, sp, -1})};
  return {"s5_k4", gen_ngon(5), std::move(f)};
}

Fixture s8_fixture() {
  const double a1 = std::sqrt(1 + kSqrt2);
  const double a2 = std::sqrt(2 + kSqrt2);
  const double a3 = 1 / a1 - a1;
  const double a4 = std::sqrt(kSqrt2);
  const double a5 = std::sqrt(1 - 1 / (a1 * a1));
  GramFactorSet f;
  f.a = {col({1, 0, 0, 0}),       col({0, 1, 0, 0}),         col({0, 0, 1, 0}),
         col({1, -a1, -a1, 0}),   col({1, a3, a3, -1 / a1}), col({0, -1, -2, 1}),
         col({0, 0, 1, -1}),      col({-1, -1 / a1, -1 / a1, 1 / a1})};
  f.b = {mat({{0, 0}, {0, 0}, {-1, 0}, {-1, a1}}),
         mat({{-1, 0}, {0, 0}, {0, 0}, {0, -a2}}),
         mat({{a1, 0}, {1, 0}, {0, 0}, {1, a1}}),
         mat({{-a2, 0}, {-a4, 1}, {0, -1}, {-a4, 0}}),
         mat({{a2, 0}, {0, a2}, {1 / a4, -a1 * a1 / a2}, {2 / a4, -kSqrt2 / a2}}),
         mat({{a1, 0}, {-kSqrt2, a4}, {kSqrt2, -a4}, {kSqrt2, -a4}}),
         mat({{-1, 0}, {a1, 0}, {-a1, 1}, {-a1, 1}}),
         mat({{0, 0}, {-1 / a1, a5}, {a1, 0}, {-a3, a5}})};
  return {"s8_k4", gen_ngon(8), std::move(f)};
}

Fixture s10_fixture() {
  const double sp = std::sqrt(kPhi);
  const double ip = 1 / kPhi;
  const double a1 = 1 / std::sqrt(kSqrt2 * kPhi);
  const double a2 = std::sqrt(kSqrt2 / kPhi);
  const double a3 = std::sqrt(2 / kPhi);
  const double a4 = std::sqrt(kSqrt2) * kPhi;
  const double a5 = -kPhi * sp;
  const double a6 = std::sqrt(std::sqrt(5.0) - 1);
  const double q = std::pow(2.0, 0.25);
  const double r = std::sqrt(2 * kPhi) - 1;
  const double s = kSqrt2 * kPhi - sp;
  GramFactorSet f;
  f.a = {mat({{0, 1 / a1, 0}, {0, a4, 0}, {1, a5, 0}, {0, -1, 0}, {0, 0, 1}}),
         mat({{0, 1 / (a1 * kPhi), 0}, {a2, a4 * ip, 0}, {-1, a5 * ip, 0}, {0, -ip, 0}, {0, 0, sp}}),
         mat({{0, 0, 0}, {a2, 0, 0}, {-1, 0, 0}, {0, ip, 0}, {0, 0, sp}}),
         mat({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}),
         mat({{a2, 0, 0}, {0, 0, 0}, {0, kPhi, 0}, {0, 0, a3}, {0, 0, 0}}),
         mat({{0, 0, 1 / a1}, {0, 0, a2}, {1, 0, r}, {0, 1, 0}, {0, 0, -1}}),
         mat({{0, 0, a4}, {a2, 0, q}, {-1, 0, s}, {0, ip, 0}, {0, 0, -sp}}),
         mat({{0, 1 / (a1 * kPhi), a4}, {a2, a4 * ip, q}, {-1, a5 * ip, s}, {0, -ip, 0}, {0, 0, -sp}}),
         mat({{0, 1 / a1, 1 / a1}, {0, a4, a2}, {1, a5, r}, {0, -1, 0}, {0, 0, -1}}),
         mat({{a2, 0, std::pow(2.0, 0.75)}, {0, 0, a4 * a3}, {0, kPhi, a5 * a3}, {0, 0, -a3}, {0, 0, 0}})};
  f.b = {col({0, a1, 0, sp, 0}), col({a1, 0, 0, 1, 0}),  col({0, a1, ip, 0, 0}),
         col({a1, 0, 0, 0, 0}),  col({0, a1, 0, 0, 0}),  col({0, a1, 0, 0, ip}),
         col({a1, 0, 0, 0, 1}),  col({0, a1, ip, 0, a6}), col({a1, 0, 0, 1, 1}),
         col({0, a1, 0, sp, ip})};
  ProblemInstance inst(rotate_columns(gen_ngon(10, NgonScaling::inradius).data(), 1), "ngon10");
  return {"s10_k5", std::move(inst), std::move(f)};
}

Fixture p4_fixture() {
  const auto pair = [](int p0, int p1) {
    Matrix m = Matrix::Zero(4, 2);
    m(p0, 0) = 1;
    m(p1, 1) = 1;
    return m;
  };
  GramFactorSet f;
  f.a = {pair(0, 1), pair(0, 2), pair(0, 3), pair(2, 1), pair(1, 3), pair(2, 3)};
  f.b = f.a;
  Fixture fx{"p4_k4", gen_pn(4), std::move(f)};
  fx.symmetric = true;
  return fx;
}

}  // namespace

SqrtRankFixture sqrt_rank_fixture() {
  const double a1 = std::sqrt(1 + kSqrt2);
  const double a2 = std::sqrt(2 + kSqrt2);
  SqrtRankFixture fx;
  fx.slack = gen_ngon(8).data();
  fx.signs = mat({{0, -1, -1, 1, -1, -1, 1, 0},
                  {0, 0, 1, 1, 1, -1, 1, -1},
                  {1, 0, 0, -1, -1, 1, -1, 1},
                  {1, -1, 0, 0, -1, -1, 1, -1},
                  {1, -1, 1, 0, 0, 1, 1, 1},
                  {1, 1, 1, -1, 0, 0, -1, -1},
                  {1, 1, 1, 1, 1, 0, 0, 1},
                  {-1, 1, -1, 1, -1, -1, 0, 0}});
  fx.w = mat({{0, -1, -a1, a2, -a2, -a1},
              {0, 0, 1, a1, a2, -a2},
              {1, 0, 0, -1, -a1, a2},
              {a1, -1, 0, 0, -1, -a1},
              {a2, -a1, 1, 0, 0, 1},
              {a2, a2, a1, -1, 0, 0},
              {a1, a2, a2, a1, 1, 0},
              {-1, a1, -a2, a2, -a1, -1}});
  fx.h = Matrix::Zero(6, 8);
  fx.h.leftCols(6).setIdentity();
  fx.h(0, 6) = a2 / (a1 - 1);
  fx.h(2, 6) = (1 + a1) / (1 - a1);
  fx.h(4, 6) = a2 / (a1 - 1);
  fx.h(1, 7) = (1 - a1) / a2;
  fx.h(3, 7) = 1;
  fx.h(5, 7) = (1 + a1) / a2;
  return fx;
}

GramFactorSet SqrtRankFixture::factors() const {
  GramFactorSet f;
  for (Eigen::Index i = 0; i < w.rows(); ++i) f.a.push_back(w.row(i).transpose());
  for (Eigen::Index j = 0; j < h.cols(); ++j) f.b.push_back(h.col(j));
  return f;
}

std::vector<Fixture> fixtures() {
  std::vector<Fixture> out;
  out.push_back(s4_fixture());
  out.push_back(s5_fixture());
  out.push_back(s8_fixture());
  out.push_back(s10_fixture());
  out.push_back(p4_fixture());
  const SqrtRankFixture sq = sqrt_rank_fixture();
  out.push_back(Fixture{"s8_sqrt_k6", ProblemInstance(sq.slack, "ngon8"), sq.factors()});
  return out;
}

Fixture fixture(std::string_view name) {
  for (auto& f : fixtures()) {
    if (f.name == name) return f;
  }
  throw InvalidInput("unknown fixture '" + std::string(name) +
                     "' (expected s4_k3, s5_k4, s8_k4, s10_k5, p4_k4 or s8_sqrt_k6)");
}

}  // namespace psdfact
