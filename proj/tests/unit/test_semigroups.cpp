#include <doctest.h>

#include <set>

#include "ccc/semigroups.hpp"

using namespace ccc;

namespace {

using Points = std::vector<RatVector>;

RatVector q(std::initializer_list<Rational> v) { return RatVector(v); }

// Brute-force minimality oracle: x is irreducible if no y in the box splits it.
Points brute_force_hilbert(const Cone& c, long r) {
  Points pts;
  for (long x = -r; x <= r; ++x)
    for (long y = -r; y <= r; ++y)
      if ((x != 0 || y != 0) && c.contains({x, y})) pts.push_back({x, y});
  Points out;
  for (const auto& p : pts) {
    bool red = false;
    for (const auto& a : pts) {
      RatVector b{Rational(p[0] - a[0]), Rational(p[1] - a[1])};
      if ((b[0] != 0 || b[1] != 0) && c.contains(b)) red = true;
    }
    if (!red) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("hilbert basis") {
  auto quad = hilbert_basis(Cone(2, {{1, 0}, {0, 1}}), AffineLattice::integral(2));
  CHECK(quad.hilbert_basis == Points{q({0, 1}), q({1, 0})});

  Cone dual_a1(2, {{0, 1}, {2, -1}});
  auto hb = hilbert_basis(dual_a1, AffineLattice::integral(2));
  CHECK(hb.hilbert_basis == Points{q({0, 1}), q({1, 0}), q({2, -1})});
  CHECK(hb.hilbert_basis == brute_force_hilbert(dual_a1, 4));

  RationalLattice half;
  half.numerators = IntMatrix{{1}};
  half.denominator = 2;
  auto h = hilbert_basis(Cone(1, {{1}}), AffineLattice(half));
  CHECK(h.hilbert_basis == Points{q({Rational(1, 2)})});

  Cone skew(2, {{1, 0}, {1, 3}});
  CHECK(hilbert_basis(skew, AffineLattice::integral(2)).hilbert_basis == brute_force_hilbert(skew, 4));
  CHECK_THROWS(hilbert_basis(Cone(1, {{1}, {-1}}), AffineLattice::integral(1)));
}

TEST_CASE("hilbert basis minimality") {
  Cone c(2, {{1, 0}, {1, 3}});
  auto s = hilbert_basis(c, AffineLattice::integral(2));
  // Removing any element makes some point in the box unreachable.
  for (std::size_t drop = 0; drop < s.hilbert_basis.size(); ++drop) {
    Points gens;
    for (std::size_t i = 0; i < s.hilbert_basis.size(); ++i)
      if (i != drop) gens.push_back(s.hilbert_basis[i]);
    std::set<RatVector> reach{q({0, 0})};
    for (int round = 0; round < 8; ++round) {
      auto cur = reach;
      for (const auto& p : cur)
        for (const auto& g : gens) {
          RatVector x{Rational(p[0] + g[0]), Rational(p[1] + g[1])};
          if (abs(x[0]) <= 4 && abs(x[1]) <= 4) reach.insert(x);
        }
    }
    CHECK(reach.count(s.hilbert_basis[drop]) == 0);
  }
}

TEST_CASE("lattice points") {
  ConstraintSystem tri{ge({1, 0}, 0), ge({0, 1}, 0), ge({-1, -1}, -2)};
  CHECK(lattice_points(tri, AffineLattice::integral(2), Box::cube(2, 5)).size() == 6);
  ConstraintSystem open{gt({1}, 0), gt({-1}, -1)};
  CHECK(lattice_points(open, AffineLattice::integral(1), Box::cube(1, 5)).empty());
  ConstraintSystem ray{ge({1}, 0)};
  auto pts = lattice_points(ray, AffineLattice::integral(1, {Rational(1, 2)}), Box{{0}, {3}});
  CHECK(pts == Points{q({Rational(1, 2)}), q({Rational(3, 2)}), q({Rational(5, 2)})});
  // Monotone in the box.
  auto small = lattice_points(tri, AffineLattice::integral(2), Box::cube(2, 1));
  auto big = lattice_points(tri, AffineLattice::integral(2), Box::cube(2, 3));
  for (const auto& p : small) CHECK(std::find(big.begin(), big.end(), p) != big.end());
}

TEST_CASE("module generators") {
  Cone quad(2, {{1, 0}, {0, 1}});
  auto s = hilbert_basis(quad, AffineLattice::integral(2));
  Box box = Box::cube(2, 5);
  auto self = module_generators({translated_cone(quad, {0, 0})}, s, box);
  CHECK(self.generators == Points{q({0, 0})});

  auto two = module_generators({translated_cone(quad, {0, 0}), translated_cone(quad, {-1, 2})}, s, box);
  CHECK(two.generators == Points{q({-1, 2}), q({0, 0})});

  ConstraintSystem sm = translated_cone(quad, {0, 0});
  auto shifted = translated_cone(quad, {-1, 1});
  sm.insert(sm.end(), shifted.begin(), shifted.end());
  CHECK(module_generators({sm}, s, box).generators == Points{q({0, 1})});

  ConstraintSystem half_plane{ge({1, 0}, 0)};
  CHECK_THROWS_AS(module_generators({half_plane}, s, box), LinalgError);
}

TEST_CASE("resolution steps") {
  Cone quad(2, {{1, 0}, {0, 1}});
  auto s = hilbert_basis(quad, AffineLattice::integral(2));
  Box box = Box::cube(2, 5);
  SemigroupModule single = module_generators({translated_cone(quad, {0, 0})}, s, box);
  CHECK(module_resolution_step(single, s, box).empty());

  SemigroupModule two = module_generators({translated_cone(quad, {0, 0}), translated_cone(quad, {1, -1})}, s, box);
  auto step = module_resolution_step(two, s, box);
  REQUIRE(step.size() == 1);
  CHECK(step[0].module.generators == Points{q({1, 0})});

  Cone ray(1, {{1}});
  auto s1 = hilbert_basis(ray, AffineLattice::integral(1));
  SemigroupModule three;
  three.generators = {q({0}), q({2}), q({5})};
  auto pairs = module_resolution_step(three, s1, Box::cube(1, 8));
  CHECK(pairs.size() == 3);
  for (const auto& p : pairs) CHECK(p.module.generators.size() == 1);

  auto res = resolve(two, s, box);
  CHECK_FALSE(res.truncated);
  // Exactness at step zero: the translated cones cover the region's lattice points.
  for (const auto& p : lattice_points({}, AffineLattice::integral(2), box)) {
    bool in_region = two.region_contains(p);
    bool covered = false;
    for (const auto& g : two.generators) covered = covered || quad.contains({Rational(p[0] - g[0]), Rational(p[1] - g[1])});
    CHECK(in_region == covered);
  }
}
