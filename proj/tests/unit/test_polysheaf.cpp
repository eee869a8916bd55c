#include <doctest.h>

#include "ccc/polysheaf.hpp"

using namespace ccc;

namespace {

Box window1(long r) { return Box::cube(1, r); }

LCPolyhedron line_set(std::initializer_list<Constraint> rows, std::size_t n = 1) { return {n, ConstraintSystem(rows)}; }

// x > a, x >= a, x < a, x <= a, x = a on the line.
Constraint x_gt(Rational a) { return gt({1}, a); }
Constraint x_ge(Rational a) { return ge({1}, a); }
Constraint x_lt(Rational a) { return gt({-1}, -a); }
Constraint x_le(Rational a) { return ge({-1}, -a); }

std::size_t count_dim(const Stratification& s, std::size_t d) {
  std::size_t k = 0;
  for (const auto& st : s.strata())
    if (st.dim == d) ++k;
  return k;
}

// H^*_c of an interval with the given endpoint types, by hand.
std::map<int, std::size_t> interval_hc(Rational a, bool a_closed, Rational b, bool b_closed) {
  if (a > b) return {};
  if (a == b) return a_closed && b_closed ? std::map<int, std::size_t>{{0, 1}} : std::map<int, std::size_t>{};
  if (a_closed && b_closed) return {{0, 1}};
  if (!a_closed && !b_closed) return {{1, 1}};
  return {};
}

}  // namespace

TEST_CASE("arrangement strata counts") {
  auto s1 = refine_arrangement({line_set({eq({1}, 0)})}, window1(1));
  CHECK(s1->size() == 3);
  auto s2 = refine_arrangement({line_set({x_gt(0)}), line_set({x_le(1)})}, window1(2));
  CHECK(s2->size() == 5);
  Box w = Box::cube(2, 3);
  auto s3 = refine_arrangement({line_set({eq({1, 1}, 0)}, 2), line_set({eq({1, -2}, 1)}, 2)}, w);
  CHECK(count_dim(*s3, 2) == 4);
  CHECK(count_dim(*s3, 1) == 4);
  CHECK(count_dim(*s3, 0) == 1);
  // Strata partition the window: every sample locates to itself.
  for (std::size_t i = 0; i < s3->size(); ++i) CHECK(*s3->locate(s3->stratum(i).sample) == i);
  // Three lines through a point plus a fourth line: Euler characteristic of
  // the open square is 1 = faces - edges + vertices.
  auto s4 = refine_arrangement({line_set({eq({1, 0}, 0)}, 2), line_set({eq({0, 1}, 0)}, 2),
                                line_set({eq({1, 1}, 0)}, 2), line_set({eq({1, -1}, 1)}, 2)},
                               w);
  long chi = static_cast<long>(count_dim(*s4, 2)) - static_cast<long>(count_dim(*s4, 1)) + static_cast<long>(count_dim(*s4, 0));
  CHECK(chi == 1);
}

TEST_CASE("closure order and adaptedness") {
  auto s = refine_arrangement({line_set({x_ge(0)})}, window1(2));
  REQUIRE(s->size() == 3);
  std::size_t origin = *s->locate({0});
  std::size_t right = *s->locate({1});
  std::size_t left = *s->locate({-1});
  CHECK(s->leq(origin, right));
  CHECK(s->leq(origin, left));
  CHECK_FALSE(s->leq(right, origin));
  CHECK(s->adapted(line_set({x_gt(0)})));
  CHECK_FALSE(s->adapted(line_set({x_gt(1)})));
  CHECK_THROWS_AS(indicator_sheaf(line_set({x_gt(1)}), 0, s), LinalgError);
}

TEST_CASE("indicator sheaves") {
  auto s = refine_arrangement({line_set({x_ge(0)})}, window1(2));
  std::size_t origin = *s->locate({0});
  std::size_t right = *s->locate({1});
  auto whole = indicator_sheaf(LCPolyhedron::whole(1), 0, s);
  for (std::size_t i = 0; i < s->size(); ++i) CHECK(whole.stalk(i).dim(0) == 1);
  auto open = indicator_sheaf(line_set({x_gt(0)}), 0, s);
  CHECK(open.stalk_is_zero(origin));
  CHECK(open.stalk(right).dim(0) == 1);
  auto closed = indicator_sheaf(line_set({x_ge(0)}), 0, s);
  CHECK(closed.stalk(origin).dim(0) == 1);
  CHECK(closed.map(origin, right, 0).at(0, 0) == 1);
  CHECK(closed.generization_rank(origin, right, 0) == 1);
  CHECK_FALSE(closed.check().has_value());
  auto shifted = indicator_sheaf(line_set({x_gt(0)}), 1, s);
  CHECK(shifted.stalk(right).dim(-1) == 1);
}

TEST_CASE("rhom of indicators on the line") {
  auto s = refine_arrangement({line_set({x_ge(0)})}, window1(3));
  auto open = indicator_sheaf(line_set({x_gt(0)}), 0, s);
  auto point = indicator_sheaf(line_set({eq({1}, 0)}), 0, s);
  auto closed = indicator_sheaf(line_set({x_ge(0)}), 0, s);
  auto whole = indicator_sheaf(LCPolyhedron::whole(1), 0, s);
  CHECK(rhom(open, open) == std::map<int, std::size_t>{{0, 1}});
  // Local cohomology at the origin of j_!Q: sections near 0 vanish, sections on
  // the punctured neighbourhood are Q, so RHom(Q_0, Q_{(0,inf)}) = Q[-1].
  CHECK(rhom(point, open) == std::map<int, std::size_t>{{1, 1}});
  CHECK(rhom(closed, closed) == std::map<int, std::size_t>{{0, 1}});
  CHECK(rhom(closed, point) == std::map<int, std::size_t>{{0, 1}});
  CHECK(rhom(whole, open).empty());
  CHECK(rhom(open, whole) == std::map<int, std::size_t>{{0, 1}});
  CHECK(global_sections(whole) == std::map<int, std::size_t>{{0, 1}});
  // Local cohomology at the origin: Hom(Q_0, Q) = Q[-1].
  CHECK(rhom(point, whole) == std::map<int, std::size_t>{{1, 1}});
  CHECK(rhom_complex(closed, open).squares_to_zero());
}

TEST_CASE("rhom in the plane") {
  Box w = Box::cube(2, 3);
  LCPolyhedron quadrant{2, {gt({1, 0}, 0), gt({0, 1}, 0)}};
  LCPolyhedron shifted = quadrant.translated({1, 2});
  auto s = refine_arrangement({quadrant, shifted}, w);
  auto a = indicator_sheaf(quadrant, 2, s);
  auto b = indicator_sheaf(shifted, 2, s);
  CHECK(rhom(a, a) == std::map<int, std::size_t>{{0, 1}});
  CHECK(rhom(b, a) == std::map<int, std::size_t>{{0, 1}});
  CHECK(rhom(a, b).empty());
  auto c = rhom_complex(a, b);
  CHECK(c.squares_to_zero());
}

TEST_CASE("refinement leaves rhom unchanged") {
  LCPolyhedron half{2, {ge({1, 1}, 0)}};
  LCPolyhedron strip{2, {gt({0, 1}, -1), gt({0, -1}, -1)}};
  Box w = Box::cube(2, 3);
  auto coarse = refine_arrangement({half, strip}, w);
  auto fine = refine_arrangement({half, strip}, w, {Hyperplane::from({1, 0}, 1), Hyperplane::from({1, -1}, 0)});
  auto f = indicator_sheaf(half, 0, coarse);
  auto g = indicator_sheaf(strip, 0, coarse);
  auto r1 = rhom(f, g);
  auto r2 = rhom(f.pullback(fine), g.pullback(fine));
  CHECK(r1 == r2);
  CHECK(rhom(g.pullback(fine), g.pullback(fine)) == rhom(g, g));
}

TEST_CASE("compactly supported cochains") {
  auto s = refine_arrangement({line_set({x_ge(0), x_le(1)})}, window1(2));
  auto closed = indicator_sheaf(line_set({x_ge(0), x_le(1)}), 0, s);
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i < s->size(); ++i) all.push_back(i);
  CHECK(cohomology_dims(compact_support_complex(closed, all)) == std::map<int, std::size_t>{{0, 1}});
  auto open = indicator_sheaf(line_set({x_gt(0), x_lt(1)}), 0, s);
  CHECK(cohomology_dims(compact_support_complex(open, all)) == std::map<int, std::size_t>{{1, 1}});
  auto half = indicator_sheaf(line_set({x_gt(0), x_le(1)}), 0, s);
  CHECK(cohomology_dims(compact_support_complex(half, all)).empty());

  Box w = Box::cube(2, 2);
  LCPolyhedron square{2, {ge({1, 0}, 0), ge({0, 1}, 0), ge({-1, 0}, -1), ge({0, -1}, -1)}};
  auto s2 = refine_arrangement({square, LCPolyhedron{2, {eq({1, -1}, 0)}}}, w);
  std::vector<std::size_t> all2;
  for (std::size_t i = 0; i < s2->size(); ++i) all2.push_back(i);
  auto sq = indicator_sheaf(square, 0, s2);
  auto c = compact_support_complex(sq, all2);
  CHECK(c.squares_to_zero());
  CHECK(cohomology_dims(c) == std::map<int, std::size_t>{{0, 1}});
  auto whole = indicator_sheaf(LCPolyhedron::whole(2), 0, s2);
  CHECK(cohomology_dims(compact_support_complex(whole, all2)) == std::map<int, std::size_t>{{2, 1}});
}

TEST_CASE("convolution on the line") {
  Box w = window1(4);
  Box out = window1(2);
  SUBCASE("unit law") {
    auto s = refine_arrangement({line_set({eq({1}, 0)}), line_set({x_gt(-1), x_le(1)})}, w);
    auto unit = indicator_sheaf(line_set({eq({1}, 0)}), 0, s);
    auto f = indicator_sheaf(line_set({x_gt(-1), x_le(1)}), 0, s);
    auto conv = convolve(unit, f, out);
    CHECK_FALSE(conv.check().has_value());
    auto expected = realize(IndicatorComplex::single(line_set({x_gt(-1), x_le(1)})),
                            std::make_shared<const Stratification>(conv.stratification()));
    CHECK_FALSE(compare_profiles(conv, expected).has_value());
    auto conv2 = convolve(f, unit, out);
    CHECK_FALSE(compare_profiles(conv2, expected).has_value());
  }
  SUBCASE("constant sheaf kills the closed ray") {
    auto s = refine_arrangement({line_set({x_ge(0)})}, w);
    auto c = indicator_sheaf(LCPolyhedron::whole(1), 0, s);
    auto ray = indicator_sheaf(line_set({x_ge(0)}), 0, s);
    auto conv = convolve(c, ray, out);
    CHECK(conv.is_zero() == false);  // complexes are present but acyclic
    for (std::size_t i = 0; i < conv.size(); ++i) CHECK(conv.stalk_cohomology(i).empty());
  }
  SUBCASE("interval with itself against the fiber oracle") {
    auto s = refine_arrangement({line_set({x_ge(0), x_le(1)})}, w);
    auto iv = indicator_sheaf(line_set({x_ge(0), x_le(1)}), 0, s);
    auto conv = convolve(iv, iv, Box::cube(1, 3));
    CHECK_FALSE(conv.check().has_value());
    for (std::size_t i = 0; i < conv.size(); ++i) {
      Rational r = conv.stratification().stratum(i).sample[0];
      // Fiber {x in [0,1], r - x in [0,1]} = [max(0, r-1), min(1, r)].
      Rational lo = std::max<Rational>(0, r - 1), hi = std::min<Rational>(1, r);
      CHECK(conv.stalk_cohomology(i) == interval_hc(lo, true, hi, true));
    }
  }
  SUBCASE("half-open intervals") {
    auto s = refine_arrangement({line_set({x_gt(0), x_le(1)})}, w);
    auto iv = indicator_sheaf(line_set({x_gt(0), x_le(1)}), 0, s);
    auto conv = convolve(iv, iv, Box::cube(1, 3));
    for (std::size_t i = 0; i < conv.size(); ++i) {
      Rational r = conv.stratification().stratum(i).sample[0];
      // x in (0,1], r - x in (0,1]  <=>  x in [r-1, r) cap (0, 1].
      Rational lo = std::max<Rational>(0, r - 1), hi = std::min<Rational>(1, r);
      bool lo_closed = r - 1 > 0;
      bool hi_closed = r > 1;
      CHECK(conv.stalk_cohomology(i) == interval_hc(lo, lo_closed, hi, hi_closed));
    }
  }
}

TEST_CASE("Verdier duality swaps open and closed ends") {
  auto s = refine_arrangement({line_set({x_gt(0), x_le(1)})}, window1(2));
  auto d = indicator_sheaf(line_set({x_gt(0), x_le(1)}), 0, s);
  auto dual = verdier_dual(d);
  CHECK_FALSE(dual.check().has_value());
  auto expected = indicator_sheaf(line_set({x_ge(0), x_lt(1)}), 1, s);
  CHECK_FALSE(compare_profiles(dual, expected).has_value());
  auto twice = verdier_dual(dual);
  CHECK_FALSE(compare_profiles(twice, d).has_value());
}

TEST_CASE("hom star of polytope indicators") {
  SUBCASE("line") {
    Box w = window1(4);
    auto s = refine_arrangement({line_set({x_gt(0), x_le(1)}), line_set({x_gt(0)})}, w);
    auto d = indicator_sheaf(line_set({x_gt(0), x_le(1)}), 0, s);
    auto g = indicator_sheaf(line_set({x_gt(0)}), 0, s);
    auto h = hom_star(d, g, window1(2));
    CHECK_FALSE(h.check().has_value());
    auto expected = realize(IndicatorComplex::single(line_set({x_gt(-1), x_le(0)})),
                            std::make_shared<const Stratification>(h.stratification()));
    CHECK_FALSE(compare_profiles(h, expected).has_value());
  }
  SUBCASE("plane") {
    Box w = Box::cube(2, 3);
    LCPolyhedron square{2, {gt({1, 0}, 0), gt({0, 1}, 0), ge({-1, 0}, -1), ge({0, -1}, -1)}};
    LCPolyhedron quadrant{2, {gt({1, 0}, 0), gt({0, 1}, 0)}};
    auto s = refine_arrangement({square, quadrant}, w);
    auto h = hom_star(indicator_sheaf(square, 0, s), indicator_sheaf(quadrant, 0, s), Box::cube(2, 1));
    LCPolyhedron expected_set{2, {gt({1, 0}, -1), gt({0, 1}, -1), ge({-1, 0}, 0), ge({0, -1}, 0)}};
    auto expected = realize(IndicatorComplex::single(expected_set), std::make_shared<const Stratification>(h.stratification()));
    CHECK_FALSE(compare_profiles(h, expected).has_value());
  }
}

TEST_CASE("microsupport on the line") {
  auto s = refine_arrangement({line_set({x_ge(0)})}, window1(2));
  std::size_t origin = *s->locate({0});
  auto conormal = [&](const PosetSheaf& f) {
    std::vector<Rational> dirs;
    for (const auto& c : microsupport(f))
      if (!c.sector.empty()) {
        CHECK(c.stratum == origin);
        dirs.push_back(c.sample[0]);
      }
    return dirs;
  };
  CHECK(conormal(indicator_sheaf(line_set({x_gt(0)}), 0, s)) == std::vector<Rational>{-1});
  CHECK(conormal(indicator_sheaf(line_set({x_ge(0)}), 0, s)) == std::vector<Rational>{1});
  CHECK(conormal(indicator_sheaf(LCPolyhedron::whole(1), 0, s)).empty());
  auto zero_section = microsupport(indicator_sheaf(line_set({x_gt(0)}), 0, s));
  std::size_t support = 0;
  for (const auto& c : zero_section)
    if (c.sector.empty()) ++support;
  CHECK(support == 1);
}

TEST_CASE("microsupport of a quadrant") {
  Box w = Box::cube(2, 2);
  LCPolyhedron quadrant{2, {gt({1, 0}, 0), gt({0, 1}, 0)}};
  auto s = refine_arrangement({quadrant}, w);
  auto f = indicator_sheaf(quadrant, 0, s);
  std::size_t origin = *s->locate({0, 0});
  // Expected: at the origin exactly the covectors in the closed negative
  // quadrant, on the open boundary rays the inward... negative conormals.
  for (const auto& c : microsupport(f)) {
    if (c.sector.empty()) continue;
    for (const auto& g : c.sector) {
      CHECK(g[0] <= 0);
      CHECK(g[1] <= 0);
    }
    if (c.stratum != origin) CHECK(c.sector.size() == 1);
  }
}

TEST_CASE("torus homs of cone indicators") {
  LCPolyhedron ray{1, {x_gt(0)}};
  auto theta = IndicatorComplex::single(ray, 1);
  auto res = torus_hom(theta, theta, Box::cube(1, 3), 8);
  for (long m = -3; m <= 3; ++m) {
    auto it = res.dims.find({Rational(m)});
    if (m >= 0) {
      REQUIRE(it != res.dims.end());
      CHECK(it->second == std::map<int, std::size_t>{{0, 1}});
    } else {
      CHECK(it == res.dims.end());
    }
  }
  auto everything = IndicatorComplex::single(LCPolyhedron::whole(1), 1);
  auto res2 = torus_hom(theta, everything, Box::cube(1, 3), 8);
  CHECK(res2.dims.size() == 7);
  CHECK(res2.boundary_contribution);
  LCPolyhedron a{1, {x_ge(0), x_le(1)}}, b{1, {x_ge(5), x_le(6)}};
  auto res3 = torus_hom(IndicatorComplex::single(a), IndicatorComplex::single(b), Box::cube(1, 2), 10);
  CHECK(res3.dims.empty());
}
