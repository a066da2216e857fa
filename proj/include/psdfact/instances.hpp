#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "psdfact/model.hpp"

namespace psdfact {

enum class Family { ngon, pn, cor };

/// adjacent: the slack of a vertex on a neighbouring facet is 1.
/// inradius: facets at unit distance from the centre, so the slack of vertex
/// j on facet i is 1 − cos((2d+1)π/n)/cos(π/n).
enum class NgonScaling { adjacent, inradius };

/// Circulant slack matrix of the regular n-gon, S(i,j) a function of
/// d = (j − i) mod n that vanishes for d ∈ {0, n−1}. Throws for n < 3.
ProblemInstance gen_ngon(int n, NgonScaling scaling = NgonScaling::adjacent);

/// out(i, j) = in(i, (j − shift) mod n).
Matrix rotate_columns(const Matrix& in, int shift);

/// Intersection sizes of ⌊n/2⌋-subsets (rows) and ⌈n/2⌉-subsets (columns) of
/// {1..n}, both in lexicographic order. Throws for n < 3 or more than 10⁴ rows.
ProblemInstance gen_pn(int n);

/// COR_n(u, v) = (1 − uᵀv)² over u, v ∈ {0,1}ⁿ in binary counting order,
/// bit t of the index being coordinate t. Throws unless 1 ≤ n ≤ 12.
ProblemInstance gen_cor(int n);

struct FamilySpec {
  Family family = Family::ngon;
  int n = 3;
  int k = 1;  // factor size used in the benchmark

  std::string label() const;
  ProblemInstance generate() const;
};

/// Parses "ngon", "pn" or "cor".
Family parse_family(std::string_view name);
ProblemInstance generate(Family family, int n);

/// The benchmark suite: 12- to 32-gons, P5..P7 and COR3..COR5 with their k.
std::vector<FamilySpec> table1();

/// Exact factorizations of known instances.
struct Fixture {
  std::string name;
  ProblemInstance instance;
  GramFactorSet factors;
  bool symmetric = false;      // aⁱ = bⁱ
  bool expected_pass = true;
};

/// s4_k3, s5_k4, s8_k4, s10_k5, p4_k4 and s8_sqrt_k6.
std::vector<Fixture> fixtures();
/// Throws InvalidInput for an unknown name.
Fixture fixture(std::string_view name);

/// Signed entrywise square root of S₈ with a rank-6 factorization W·H.
struct SqrtRankFixture {
  Matrix slack;  // S₈
  Matrix signs;  // entries in {−1, 0, 1}
  Matrix w;      // 8×6
  Matrix h;      // 6×8

  /// k = 6, r = 1: aⁱ = row i of W, bʲ = column j of H.
  GramFactorSet factors() const;
};

SqrtRankFixture sqrt_rank_fixture();

}  // namespace psdfact
