#include <doctest.h>

#include "ccc/coherent.hpp"

using namespace ccc;

namespace {

StackyFan load_valid(const std::string& name) {
  auto sf = load_stacky_fan(std::string(CCC_FIXTURE_DIR) + "/suite/" + name + ".json");
  REQUIRE(validate_condition1(sf).valid);
  return sf;
}

RatVector q(std::initializer_list<Rational> v) { return RatVector(v); }

// Lattice-point count of the dilated standard triangle.
long triangle_points(long d) {
  long c = 0;
  for (long x = 0; x <= d; ++x)
    for (long y = 0; x + y <= d; ++y) ++c;
  return c;
}

}  // namespace

TEST_CASE("hom bases") {
  auto a1 = load_valid("a1");
  auto g = make_generator(a1, *a1.sigma.index_of({0}));
  auto h = hom_basis(a1, g, g, Box::cube(1, 3));
  CHECK(h.basis == std::vector<RatVector>{q({0}), q({1}), q({2}), q({3})});
  CHECK(h.homological_degree == 0);

  auto p1 = load_valid("p1");
  auto plus = make_generator(p1, *p1.sigma.index_of({0}));
  auto zero = make_generator(p1, *p1.sigma.index_of({}));
  CHECK(hom_basis(p1, plus, zero, Box::cube(1, 2)).basis.size() == 5);
  CHECK(hom_basis(p1, zero, plus, Box::cube(1, 2)).basis.empty());

  auto z2 = load_valid("c2_z2");
  auto top = *z2.sigma.index_of({0, 1});
  auto g0 = make_generator(z2, top, 0);
  auto g1 = make_generator(z2, top, 1);
  auto b00 = hom_basis(z2, g0, g0, Box::cube(2, 3)).basis;
  auto b01 = hom_basis(z2, g0, g1, Box::cube(2, 3)).basis;
  CHECK_FALSE(b01.empty());
  for (const auto& p : b01) CHECK(std::find(b00.begin(), b00.end(), p) == b00.end());
  auto tau_dual = dual_cone(z2.sigma.cone(top));
  for (const auto& p : b01) CHECK(tau_dual.contains(p));
}

TEST_CASE("hom basis contains identity and is closed under addition") {
  for (const char* name : {"a2", "c2_z2", "p2", "p112"}) {
    auto sf = load_valid(name);
    for (const auto& g : all_generators(sf)) {
      auto b = hom_basis(sf, g, g, Box::cube(sf.n_rank, 3)).basis;
      CHECK(std::find(b.begin(), b.end(), RatVector(sf.n_rank, 0)) != b.end());
      for (const auto& x : b)
        for (const auto& y : b) {
          RatVector s(x.size());
          for (std::size_t i = 0; i < s.size(); ++i) s[i] = x[i] + y[i];
          if (Box::cube(sf.n_rank, 3).contains(s)) CHECK(std::find(b.begin(), b.end(), s) != b.end());
        }
    }
  }
}

TEST_CASE("composition") {
  auto a1 = load_valid("a1");
  auto g = make_generator(a1, *a1.sigma.index_of({0}));
  HomElement f{g, g, q({1})}, h{g, g, q({2})}, id{g, g, q({0})};
  CHECK(compose(a1, f, h).label == q({3}));
  CHECK(compose(a1, id, f).label == f.label);
  CHECK(compose(a1, f, h).label == compose(a1, h, f).label);
  auto zero = make_generator(a1, *a1.sigma.index_of({}));
  HomElement to_zero{g, zero, q({-5})};
  CHECK_THROWS_AS(compose(a1, to_zero, f), LinalgError);
}

TEST_CASE("restriction of generators") {
  auto z2 = load_valid("c2_z2");
  auto top = *z2.sigma.index_of({0, 1});
  auto origin = *z2.sigma.index_of({});
  auto g1 = make_generator(z2, top, 1);
  CHECK(restrict_generator(z2, g1, origin).chi == RatVector(2, 0));
  for (std::size_t r = 0; r < 2; ++r) {
    auto ray = *z2.sigma.index_of({r});
    auto res = restrict_generator(z2, g1, ray);
    auto data = compute_M_sigma_beta(z2, ray);
    CHECK(res.coset == data.coset_index(g1.chi));
    CHECK(restrict_generator(z2, res, origin) == restrict_generator(z2, g1, origin));
  }
}

TEST_CASE("cech structure complex") {
  auto p1 = load_valid("p1");
  auto c = cech_structure_complex(p1);
  CHECK(c.terms.size() == 2);
  CHECK(c.terms[0].size() == 2);
  CHECK(c.terms[1].size() == 1);

  auto p2 = load_valid("p2");
  auto c2 = cech_structure_complex(p2);
  REQUIRE(c2.terms.size() == 3);
  CHECK(c2.terms[0].size() == 3);
  CHECK(c2.terms[1].size() == 3);
  CHECK(c2.terms[2].size() == 1);
  CHECK(c2.squares_to_zero());

  auto a1 = load_valid("a1");
  auto c3 = cech_structure_complex(a1);
  CHECK(c3.terms[0].size() == 1);
  CHECK(c3.terms[1].size() == 1);

  // Strands are exact except at the left end, where they carry H^0 = 1 iff m = 0 on complete fans.
  for (const char* name : {"p1", "p2", "p1xp1", "a2"}) {
    auto sf = load_valid(name);
    auto cc = cech_structure_complex(sf);
    CHECK(cc.squares_to_zero());
    for (const auto& m : lattice_points({}, AffineLattice::integral(sf.n_rank), Box::cube(sf.n_rank, 3))) {
      auto h = cohomology_dims(cc.strand(sf, m));
      bool origin = std::all_of(m.begin(), m.end(), [](const Rational& x) { return x == 0; });
      std::map<int, std::size_t> expected;
      if (origin && sf.sigma.is_complete()) expected[0] = 1;
      if (!sf.sigma.is_complete()) continue;
      CHECK(h == expected);
    }
  }
}

TEST_CASE("line bundle cohomology on P2") {
  auto p2 = load_valid("p2");
  auto box = Box::cube(2, 6);
  auto o1 = total_cohomology(line_bundle_cohomology(p2, DivisorData::multiple_of(p2, 0, 1), box));
  CHECK(o1 == std::map<int, std::size_t>{{0, 3}});
  auto om3 = total_cohomology(line_bundle_cohomology(p2, DivisorData::multiple_of(p2, 0, -3), box));
  CHECK(om3 == std::map<int, std::size_t>{{2, 1}});
  auto o0 = total_cohomology(line_bundle_cohomology(p2, DivisorData::multiple_of(p2, 0, 0), box));
  CHECK(o0 == std::map<int, std::size_t>{{0, 1}});
  for (long d = 0; d <= 4; ++d) {
    auto h = total_cohomology(line_bundle_cohomology(p2, DivisorData::multiple_of(p2, 2, d), box));
    CHECK(h[0] == static_cast<std::size_t>(triangle_points(d)));
    CHECK(h[0] == static_cast<std::size_t>((d + 1) * (d + 2) / 2));
  }
}

TEST_CASE("chart shifts") {
  auto p2 = load_valid("p2");
  auto D = DivisorData::multiple_of(p2, 2, 2);
  for (auto s : p2.sigma.cones_of_dim(2)) {
    auto m = D.chart_shift(p2, s);
    for (auto r : p2.sigma.cones()[s]) CHECK(pairing(p2.sigma_hat.rays()[r], m) == -D.coefficients[r]);
  }
}
