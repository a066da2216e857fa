#include <array>
#include <cmath>
#include <random>

#include <doctest.h>

#include "psdfact/errors.hpp"
#include "psdfact/solver_cd.hpp"

using namespace psdfact;

namespace {

std::vector<Matrix> random_factors(std::mt19937_64& rng, int count, int k, int r) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Matrix> out;
  for (int i = 0; i < count; ++i) out.push_back(Matrix::NullaryExpr(k, r, [&] { return g(rng); }));
  return out;
}

Matrix random_nonneg(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  return Matrix::NullaryExpr(m, n, [&] { return u(rng); });
}

// Σᵢⱼ (Xᵢⱼ − ||aⁱᵀ bʲ||²)² evaluated entry by entry.
double naive_objective(const Matrix& x, const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double r = x(i, j) - (a[i].transpose() * b[j]).squaredNorm();
      s += r * r;
    }
  }
  return s;
}

double rel_diff(const Matrix& x, const Matrix& y) {
  return (x - y).norm() / std::max(1.0, y.norm());
}

struct Problem {
  Matrix x;
  std::vector<Matrix> a;
  std::vector<Matrix> b;
};

Problem random_problem(std::mt19937_64& rng, int m, int n, int k, int r) {
  return {random_nonneg(rng, m, n), random_factors(rng, m, k, r), random_factors(rng, n, k, k)};
}

}  // namespace

TEST_CASE("precompute agrees with the defining sums") {
  std::mt19937_64 rng(71);
  const int m = 3, n = 5, k = 3;
  const Problem pr = random_problem(rng, m, n, k, 2);
  const CdState st = CdState::precompute(pr.x, pr.a, pr.b);
  CHECK(st.k() == k);
  CHECK(st.count() == m);
  CHECK(std::abs(st.objective() - naive_objective(pr.x, pr.a, pr.b)) <= 1e-10 * st.objective());

  std::vector<Matrix> bg;
  for (const auto& b : pr.b) bg.push_back(b * b.transpose());
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v)
      for (int s = 0; s < k; ++s)
        for (int t = 0; t < k; ++t) {
          double d = 0.0;
          for (const auto& bj : bg) d += bj(u, v) * bj(s, t);
          CHECK(st.d(u, v, s, t) == doctest::Approx(d).epsilon(1e-12));
        }
  for (int i = 0; i < m; ++i) {
    const Matrix ai = pr.a[i] * pr.a[i].transpose();
    Matrix c = Matrix::Zero(k, k);
    for (int j = 0; j < n; ++j) c += ((ai.cwiseProduct(bg[j])).sum() - pr.x(i, j)) * bg[j];
    CHECK(rel_diff(st.c(i), c) <= 1e-12);
    CHECK(rel_diff(st.g(i), 4.0 * c * pr.a[i]) <= 1e-12);
    Matrix e(k, pr.a[i].cols());
    for (int p = 0; p < k; ++p)
      for (int q = 0; q < e.cols(); ++q) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
          const double w = bg[j].col(p).dot(pr.a[i].col(q));
          s += w * w;
        }
        e(p, q) = s;
      }
    CHECK(rel_diff(st.e(i), e) <= 1e-12);
  }
}

TEST_CASE("displacement quartic is the exact objective change along a coordinate") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3, n = 3 + trial % 4, k = 2 + trial % 3, r = 1 + trial % k;
    const Problem pr = random_problem(rng, m, n, k, r);
    const CdState st = CdState::precompute(pr.x, pr.a, pr.b);
    const double base = naive_objective(pr.x, pr.a, pr.b);
    const int i = trial % m, p = trial % k, q = trial % r;
    const QuarticCoeffs c = st.displacement_coeffs(pr.a, i, p, q);
    for (double delta : {-1.3, -0.2, 0.05, 0.7, 2.0}) {
      auto moved = pr.a;
      moved[i](p, q) += delta;
      const double exact = naive_objective(pr.x, moved, pr.b) - base;
      CHECK(std::abs(c.value(delta) - exact) <= 1e-9 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST_CASE("CD coefficient gradient matches central finite differences") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 8, n = 1 + (trial * 5) % 8, k = 1 + trial % 4, r = 1 + trial % k;
    const Problem pr = random_problem(rng, m, n, k, r);
    const CdState st = CdState::precompute(pr.x, pr.a, pr.b);
    const double h = 1e-6;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < r; ++q) {
          auto plus = pr.a, minus = pr.a;
          plus[i](p, q) += h;
          minus[i](p, q) -= h;
          const double fd = (naive_objective(pr.x, plus, pr.b) - naive_objective(pr.x, minus, pr.b)) / (2 * h);
          const double an = st.displacement_coeffs(pr.a, i, p, q).c0;
          CHECK(an == doctest::Approx(st.g(i)(p, q)));
          num += (fd - an) * (fd - an);
          den += an * an;
        }
    CHECK(std::sqrt(num) <= 1e-5 * std::max(1.0, std::sqrt(den)));
  }
}

TEST_CASE("absolute-form coefficients include the symmetric penalty") {
  std::mt19937_64 rng(83);
  const Problem pr = random_problem(rng, 3, 3, 3, 3);
  const auto partner = random_factors(rng, 3, 3, 3);
  const CdState st = CdState::precompute(pr.x, pr.a, pr.b);
  const double gamma = 0.7;
  const Penalty pen{gamma, partner};
  for (int i = 0; i < 3; ++i)
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        const QuarticCoeffs c = coeffs_at(st, pr.a, pen, i, p, q);
        const double x = pr.a[i](p, q);
        const double bpq = partner[i](p, q);
        CHECK(c.derivative(x) == doctest::Approx(st.g(i)(p, q) + 2 * gamma * (x - bpq)));
        const double y = x + 0.4;
        auto moved = pr.a;
        moved[i](p, q) = y;
        const double exact = naive_objective(pr.x, moved, pr.b) - naive_objective(pr.x, pr.a, pr.b) +
                             gamma * ((y - bpq) * (y - bpq) - (x - bpq) * (x - bpq));
        CHECK(c.value(y) - c.value(x) == doctest::Approx(exact).epsilon(1e-9));
      }
}

TEST_CASE("maintained state matches a fresh precompute after 1000 random updates") {
  std::mt19937_64 rng(89);
  const int m = 5, n = 6, k = 4, r = 3;
  const Problem pr = random_problem(rng, m, n, k, r);
  auto a = pr.a;
  CdState st = CdState::precompute(pr.x, a, pr.b);
  std::uniform_int_distribution<int> pick_i(0, m - 1), pick_p(0, k - 1), pick_q(0, r - 1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const int i = pick_i(rng), p = pick_p(rng), q = pick_q(rng);
    st.apply_update(a, i, p, q, a[i](p, q) + 0.3 * g(rng));
  }
  const CdState fresh = CdState::precompute(pr.x, a, pr.b);
  for (int i = 0; i < m; ++i) {
    CHECK(rel_diff(st.c(i), fresh.c(i)) <= 1e-8);
    CHECK(rel_diff(st.g(i), fresh.g(i)) <= 1e-8);
    CHECK(rel_diff(st.e(i), fresh.e(i)) <= 1e-8);
  }
  CHECK(std::abs(st.objective() - fresh.objective()) <= 1e-8 * fresh.objective());
}

TEST_CASE("no coordinate update increases the objective") {
  std::mt19937_64 rng(97);
  int updates = 0;
  double worst = -1.0;
  UpdateObserver obs = [&](int, int, int, double before, double after) {
    ++updates;
    worst = std::max(worst, after - before);
  };
  while (updates < 10000) {
    const Problem pr = random_problem(rng, 4, 5, 3, 2);
    SubproblemOptions opt;
    opt.observer = obs;
    opt.passes = 3;
    const auto a1 = cd_subproblem_cyclic(pr.x, pr.a, pr.b, opt);
    opt.alpha = 2.0;
    cd_subproblem_gs(pr.x, a1, pr.b, opt);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("subproblems decrease the objective and respect masks") {
  std::mt19937_64 rng(101);
  const Problem pr = random_problem(rng, 4, 5, 3, 3);
  const double f0 = naive_objective(pr.x, pr.a, pr.b);
  const auto cyc = cd_subproblem_cyclic(pr.x, pr.a, pr.b);
  const auto gs = cd_subproblem_gs(pr.x, pr.a, pr.b);
  CHECK(naive_objective(pr.x, cyc, pr.b) < f0);
  CHECK(naive_objective(pr.x, gs, pr.b) < f0);

  std::vector<BoolMap> mask(4, BoolMap::Zero(3, 3));
  mask[0].setConstant(true);
  mask[2](1, 1) = true;
  SubproblemOptions opt;
  opt.mask = &mask;
  opt.passes = 2;
  for (const auto& out : {cd_subproblem_cyclic(pr.x, pr.a, pr.b, opt), cd_subproblem_gs(pr.x, pr.a, pr.b, opt)}) {
    CHECK(out[0] == pr.a[0]);
    CHECK(out[2](1, 1) == pr.a[2](1, 1));
    CHECK(out[1] != pr.a[1]);
  }
}

TEST_CASE("Gauss-Southwell picks the largest gradient entry first") {
  std::mt19937_64 rng(103);
  const Problem pr = random_problem(rng, 3, 4, 3, 2);
  const CdState st = CdState::precompute(pr.x, pr.a, pr.b);
  std::vector<std::array<int, 3>> seen;
  SubproblemOptions opt;
  opt.observer = [&](int i, int p, int q, double, double) { seen.push_back({i, p, q}); };
  cd_subproblem_gs(pr.x, pr.a, pr.b, opt);
  REQUIRE(!seen.empty());
  Eigen::Index p = 0, q = 0;
  st.g(0).cwiseAbs().maxCoeff(&p, &q);
  CHECK(seen.front() == std::array<int, 3>{0, static_cast<int>(p), static_cast<int>(q)});
  // ceil(0.5 · 3 · 2) = 3 updates per factor at most.
  CHECK(seen.size() <= 9);
}

TEST_CASE("cd_solve is deterministic, monotone and returns its best iterate") {
  std::mt19937_64 rng(107);
  const ProblemInstance inst(random_nonneg(rng, 5, 4));
  const RankProfile p = RankProfile::uniform(3, 5, 4, 2);
  for (CdVariant v : {CdVariant::cyclic, CdVariant::gauss_southwell}) {
    CdConfig cfg;
    cfg.variant = v;
    cfg.budget = Budget::iterations(25);
    cfg.seed = 3;
    const CdResult r1 = cd_solve(inst, p, cfg);
    const CdResult r2 = cd_solve(inst, p, cfg);
    for (int i = 0; i < 5; ++i) CHECK(r1.factors.a[i] == r2.factors.a[i]);
    for (int j = 0; j < 4; ++j) CHECK(r1.factors.b[j] == r2.factors.b[j]);
    const auto& s = r1.trace.samples();
    REQUIRE(s.size() == 51);
    CHECK(s.front().error == r1.trace.e0());
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].error <= s[i - 1].error);
    CHECK(r1.relative_error == doctest::Approx(s.back().error / inst.norm()).epsilon(1e-12));
    CHECK(r1.factors.profile().r_a == p.r_a);
  }
}

TEST_CASE("cd_solve with a mask keeps fixed entries") {
  std::mt19937_64 rng(109);
  const ProblemInstance inst(random_nonneg(rng, 3, 3));
  using E = EntryMask::Entry;
  CdConfig cfg;
  cfg.mask = EntryMask({E{Side::a, 0, 0, 0, 0.0}, E{Side::b, 2, 1, 0, 1.5}});
  cfg.budget = Budget::iterations(10);
  const CdResult r = cd_solve(inst, RankProfile::uniform(2, 3, 3, 2), cfg);
  CHECK(r.factors.a[0](0, 0) == 0.0);
  CHECK(r.factors.b[2](1, 0) == 1.5);
  cfg.mask = EntryMask({E{Side::b, 3, 0, 0, 0.0}});
  CHECK_THROWS_AS(cd_solve(inst, RankProfile::uniform(2, 3, 3, 2), cfg), InvalidInput);
}

TEST_CASE("symmetric mode drives the two sides together") {
  Matrix p4(6, 6);
  p4 << 2, 1, 1, 1, 1, 0, 1, 2, 1, 1, 0, 1, 1, 1, 2, 0, 1, 1, 1, 1, 0, 2, 1, 1, 1, 0, 1, 1, 2, 1,
      0, 1, 1, 1, 1, 2;
  const ProblemInstance inst(p4);
  CdConfig cfg;
  cfg.gamma = 1.0;
  cfg.escalate_gamma = true;
  cfg.budget = Budget::iterations(60);
  cfg.seed = 1;
  const CdResult r = cd_solve(inst, RankProfile::uniform(4, 6, 6, 4), cfg);
  CHECK(r.asymmetry < 1e-3);
  CHECK(r.relative_error < 0.5);

  Matrix nonsym = p4;
  nonsym(0, 1) = 3;
  CHECK_THROWS_AS(cd_solve(ProblemInstance(nonsym), RankProfile::uniform(4, 6, 6, 4), cfg), InvalidInput);
  CHECK_THROWS_AS(cd_solve(ProblemInstance(Matrix::Ones(2, 3)), RankProfile::uniform(2, 2, 3, 2), cfg),
                  InvalidInput);
  RankProfile uneven = RankProfile::uniform(4, 6, 6, 4);
  uneven.r_b[0] = 2;
  CHECK_THROWS_AS(cd_solve(inst, uneven, cfg), ConfigError);
}
