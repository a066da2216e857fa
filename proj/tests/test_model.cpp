#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "psdfact/errors.hpp"
#include "psdfact/model.hpp"

using namespace psdfact;

namespace {

GramFactorSet random_factors(std::mt19937_64& rng, int m, int n, int k, int r) {
  std::normal_distribution<double> g(0.0, 1.0);
  GramFactorSet f;
  for (int i = 0; i < m; ++i) f.a.push_back(Matrix::NullaryExpr(k, r, [&] { return g(rng); }));
  for (int j = 0; j < n; ++j) f.b.push_back(Matrix::NullaryExpr(k, r, [&] { return g(rng); }));
  return f;
}

Matrix random_nonneg(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  return Matrix::NullaryExpr(m, n, [&] { return u(rng); });
}

// Direct entrywise sum Σᵢⱼ (Xᵢⱼ − Σ_{h,l} (a_hᵀ b_l)²)².
double naive_objective(const Matrix& x, const GramFactorSet& f) {
  double s = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      const double v = (f.a[i].transpose() * f.b[j]).squaredNorm();
      s += (x(i, j) - v) * (x(i, j) - v);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("ProblemInstance validation") {
  CHECK_THROWS_AS(ProblemInstance(Matrix(0, 0)), InvalidInput);
  Matrix bad = Matrix::Ones(2, 2);
  bad(0, 1) = -1;
  CHECK_THROWS_AS(ProblemInstance{bad}, InvalidInput);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ProblemInstance{bad}, InvalidInput);
  const ProblemInstance ok(Matrix::Ones(2, 3), "ones");
  CHECK(ok.rows() == 2);
  CHECK(ok.cols() == 3);
  CHECK(ok.transposed().rows() == 3);
  CHECK(ok.norm() == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("RankProfile validation") {
  CHECK_NOTHROW(RankProfile::uniform(3, 2, 2, 3).validate());
  CHECK_THROWS_AS(RankProfile::uniform(3, 2, 2, 4).validate(), InvalidInput);
  CHECK_THROWS_AS(RankProfile::uniform(3, 2, 2, 0).validate(), InvalidInput);
  CHECK_THROWS_AS(RankProfile::uniform(0, 2, 2, 1).validate(), InvalidInput);
}

TEST_CASE("objective matches the entrywise expansion and is transpose-exact") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const int m = 2 + t % 4, n = 3 + t % 3, k = 2 + t % 3;
    const GramFactorSet f = random_factors(rng, m, n, k, 1 + t % k);
    const ProblemInstance inst(random_nonneg(rng, m, n));
    const double obj = objective(inst, f);
    CHECK(std::abs(obj - naive_objective(inst.data(), f)) <= 1e-10 * obj);
    const GramFactorSet ft{f.b, f.a};
    CHECK(objective(inst.transposed(), ft) == obj);
    CHECK(relative_error(inst, f) == doctest::Approx(std::sqrt(obj) / inst.norm()));
  }
  CHECK_THROWS_AS(relative_error(ProblemInstance(Matrix::Zero(2, 2)),
                                 random_factors(rng, 2, 2, 2, 1)),
                  InvalidInput);
}

TEST_CASE("optimal scale minimizes the scaled error") {
  std::mt19937_64 rng(37);
  const ProblemInstance inst(random_nonneg(rng, 4, 5));
  const GramFactorSet f = random_factors(rng, 4, 5, 3, 2);
  const double lam = optimal_scale(inst, f);
  const Matrix xt = approximation(f);
  const auto err = [&](double l) { return (inst.data() - l * xt).norm(); };
  CHECK(err(lam) <= err(lam * 1.001));
  CHECK(err(lam) <= err(lam * 0.999));
  CHECK(scaled_initial_error(inst, f) == doctest::Approx(err(lam)).epsilon(1e-10));
  const GramFactorSet scaled = scale_factors(inst, f);
  CHECK(std::sqrt(objective(inst, scaled)) == doctest::Approx(err(lam)).epsilon(1e-10));

  GramFactorSet zero = f;
  for (auto& a : zero.a) a.setZero();
  CHECK_THROWS_AS(optimal_scale(inst, zero), InitializationFailure);
}

TEST_CASE("random_init is seeded, scaled and shaped by the profile") {
  std::mt19937_64 rng(41);
  const ProblemInstance inst(random_nonneg(rng, 3, 4));
  RankProfile p = RankProfile::uniform(3, 3, 4, 2);
  p.r_b[1] = 1;
  const GramFactorSet f1 = random_init(inst, p, 99);
  const GramFactorSet f2 = random_init(inst, p, 99);
  const GramFactorSet f3 = random_init(inst, p, 100);
  for (int i = 0; i < 3; ++i) CHECK(f1.a[i] == f2.a[i]);
  CHECK(f1.a[0] != f3.a[0]);
  CHECK(f1.b[1].cols() == 1);
  CHECK(f1.b[0].cols() == 2);
  CHECK(f1.profile().r_b == p.r_b);
  CHECK(optimal_scale(inst, f1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(random_init(inst, RankProfile::uniform(3, 2, 4, 2), 1), InvalidInput);
}

TEST_CASE("EntryMask") {
  using E = EntryMask::Entry;
  CHECK_THROWS_AS(EntryMask({E{Side::a, 0, 0, 0, 1.0}, E{Side::a, 0, 0, 0, 2.0}}), InvalidInput);
  const EntryMask mask({E{Side::a, 1, 2, 0, 0.5}, E{Side::b, 0, 1, 1, -2.0}});
  const RankProfile p = RankProfile::uniform(3, 2, 2, 2);
  CHECK_NOTHROW(mask.validate(p, 2, 2));
  CHECK_THROWS_AS(mask.validate(RankProfile::uniform(3, 2, 2, 1), 2, 2), InvalidInput);
  CHECK_THROWS_AS(EntryMask({E{Side::a, 2, 0, 0, 1.0}}).validate(p, 2, 2), InvalidInput);

  std::mt19937_64 rng(43);
  GramFactorSet f = random_factors(rng, 2, 2, 3, 2);
  mask.apply(f);
  CHECK(f.a[1](2, 0) == 0.5);
  CHECK(f.b[0](1, 1) == -2.0);
  const auto map = mask.side_map(Side::a, f.a);
  CHECK(map[1](2, 0));
  CHECK(map[0].count() == 0);
  CHECK(map[1].count() == 1);
}

TEST_CASE("verify_factorization") {
  GramFactorSet f;
  Matrix a(2, 1), b(2, 1);
  a << 1, 0;
  b << 1, 1;
  f.a = {a};
  f.b = {b, a};
  Matrix x(1, 2);
  x << 1, 1;
  const VerifyReport ok = verify_factorization(ProblemInstance(x), f, 1e-9);
  CHECK(ok.passed);
  CHECK(ok.psd);
  CHECK(ok.ranks_a == std::vector<int>{1});
  CHECK(ok.ranks_b == std::vector<int>{1, 1});
  x(0, 1) = 2;
  const VerifyReport bad = verify_factorization(ProblemInstance(x), f, 1e-9);
  CHECK_FALSE(bad.passed);
  CHECK(bad.relative_error == doctest::Approx(1.0 / std::sqrt(5.0)));
}
