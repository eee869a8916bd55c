#include <doctest.h>

#include <random>

#include "ccc/linalg.hpp"

using namespace ccc;

namespace {

bool is_diagonal(const IntMatrix& d) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) != 0) return false;
  return true;
}

void check_smith(const IntMatrix& a) {
  auto s = smith_normal_form(a);
  CHECK(s.U * a * s.V == s.D);
  CHECK(is_diagonal(s.D));
  CHECK(abs(determinant(s.U)) == 1);
  CHECK(abs(determinant(s.V)) == 1);
  CHECK(s.U * s.U_inv == IntMatrix::identity(a.rows()));
  CHECK(s.V * s.V_inv == IntMatrix::identity(a.cols()));
  for (std::size_t i = 0; i + 1 < s.invariant_factors.size(); ++i)
    CHECK(s.invariant_factors[i + 1] % s.invariant_factors[i] == 0);
}

// Repeated row/column gcd reduction by hand for the 2x2 case.
Integer gcd_of_entries(const IntMatrix& a) {
  Integer g = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) g = gcd(g, a(i, j));
  return g;
}

}  // namespace

TEST_CASE("smith normal form of small examples") {
  auto s = smith_normal_form(IntMatrix{{1, 0}, {1, 2}});
  CHECK(s.D == IntMatrix{{1, 0}, {0, 2}});
  CHECK(smith_normal_form(IntMatrix::identity(2)).D == IntMatrix::identity(2));
  CHECK(smith_normal_form(IntMatrix{{2, 3}}).D == IntMatrix{{1, 0}});
  CHECK(smith_normal_form(IntMatrix(0, 3)).rank() == 0);
  check_smith(IntMatrix{{1, 0}, {1, 2}});
  check_smith(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
}

TEST_CASE("smith normal form properties on random matrices") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9), size(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    IntMatrix a(size(rng), size(rng));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = entry(rng);
    check_smith(a);
    auto s = smith_normal_form(a);
    if (s.rank() > 0) CHECK(s.invariant_factors[0] == gcd_of_entries(a));
    if (a.rows() == a.cols()) {
      Integer prod = 1;
      for (const auto& d : s.invariant_factors) prod *= d;
      if (s.rank() == a.rows()) {
        CHECK(prod == abs(determinant(a)));
        CHECK(cokernel(a).torsion.order() == abs(determinant(a)));
        CHECK(cokernel(a).free_rank == 0);
      } else {
        CHECK(determinant(a) == 0);
      }
    }
  }
}

TEST_CASE("kernel basis") {
  auto k = kernel_basis(IntMatrix{{2, 3}});
  REQUIRE(k.size() == 1);
  CHECK(((k[0] == IntVector{3, -2}) || (k[0] == IntVector{-3, 2})));
  CHECK(kernel_basis(IntMatrix::identity(3)).empty());
  CHECK(kernel_basis(IntMatrix(1, 2)).size() == 2);

  std::mt19937 rng(11);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    IntMatrix a(1, 3);
    for (std::size_t j = 0; j < 3; ++j) a(0, j) = entry(rng);
    auto basis = kernel_basis(a);
    for (const auto& v : basis) CHECK(a * v == IntVector{0});
    // Every small kernel point lies in the integer span of the basis.
    IntMatrix b(basis.size(), 3);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < 3; ++j) b(i, j) = basis[i][j];
    for (int x = -5; x <= 5; ++x)
      for (int y = -5; y <= 5; ++y)
        for (int z = -5; z <= 5; ++z) {
          IntVector p{x, y, z};
          if (a * p != IntVector{0}) continue;
          IntMatrix aug(basis.size() + 1, 3);
          for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < 3; ++j) aug(i, j) = b(i, j);
          for (std::size_t j = 0; j < 3; ++j) aug(basis.size(), j) = p[j];
          CHECK(hermite_row_basis(aug) == hermite_row_basis(b));
        }
  }
}

TEST_CASE("cokernel") {
  auto c = cokernel(IntMatrix{{1, 0}, {1, 2}});
  CHECK(c.torsion == FiniteAbelianGroup({2}));
  CHECK(c.free_rank == 0);
  CHECK(cokernel(IntMatrix{{2}}).torsion.to_string() == "Z/2");
  CHECK(cokernel(IntMatrix::identity(2)).torsion.is_trivial());
  CHECK(cokernel(IntMatrix{{2, 0}}).free_rank == 0);
  CHECK(cokernel(IntMatrix{{2}, {0}}).free_rank == 1);
}

TEST_CASE("finite abelian group elements") {
  FiniteAbelianGroup g({2, 6});
  CHECK(g.order() == 12);
  auto els = g.elements();
  CHECK(els.size() == 12);
  CHECK(g.reduce({5, -1}) == IntVector{1, 5});
}

TEST_CASE("preimage lattice") {
  auto half = preimage_lattice(IntMatrix{{2}}, IntMatrix::identity(1));
  CHECK(half.denominator == 2);
  CHECK(half.numerators == IntMatrix{{1}});
  CHECK(half.index_over_integers() == 2);

  auto same = preimage_lattice(IntMatrix::identity(2), IntMatrix{{1, 1}, {0, 2}});
  CHECK(hermite_row_basis(same.numerators) == hermite_row_basis(IntMatrix{{1, 1}, {0, 2}}));
  CHECK(same.denominator == 1);

  auto super = preimage_lattice(IntMatrix{{1, 1}, {0, 2}}, IntMatrix::identity(2));
  CHECK(super.index_over_integers() == 2);
  CHECK(super.contains({Rational(1, 2), Rational(1, 2)}));
  CHECK_FALSE(super.contains({Rational(1, 2), 0}));

  CHECK_THROWS_AS(preimage_lattice(IntMatrix{{1, 0}}, IntMatrix::identity(1)), LinalgError);
}

TEST_CASE("rational helpers") {
  RatMatrix a{{1, 2}, {2, 4}};
  CHECK(rank(a) == 1);
  CHECK(nullspace(a).size() == 1);
  RatVector x;
  CHECK(solve(a, {1, 2}, x));
  CHECK_FALSE(solve(a, {1, 3}, x));
  CHECK(primitive(RatVector{Rational(1, 2), Rational(-3, 4)}) == IntVector{2, -3});
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
  CHECK(to_string(Rational(4)) == "4");
}
