#include <doctest.h>

#include "ccc/verify.hpp"

using namespace ccc;

namespace {

StackyFan load_valid(const std::string& name) {
  auto sf = load_stacky_fan(std::string(CCC_FIXTURE_DIR) + "/suite/" + name + ".json");
  REQUIRE(validate_condition1(sf).valid);
  return sf;
}

std::map<int, std::size_t> stalk_at(const PosetSheaf& f, const RatVector& x) {
  auto i = f.stratification().locate(x);
  REQUIRE(i.has_value());
  return f.stalk_cohomology(*i);
}

const std::map<int, std::size_t> none;

}  // namespace

TEST_CASE("Cech poset sizes") {
  CHECK(build_cech_poset(load_valid("p1")).size() == 3);
  CHECK(build_cech_poset(load_valid("a1")).size() == 1);
  auto p2 = load_valid("p2");
  auto poset = build_cech_poset(p2);
  REQUIRE(poset.size() == 7);
  CHECK(poset.elements.back().subset.size() == 3);
  CHECK(p2.sigma.dim(poset.elements.back().cone) == 0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p2.sigma.dim(poset.elements[i].cone) == 2);
  for (std::size_t i = 3; i < 6; ++i) CHECK(p2.sigma.dim(poset.elements[i].cone) == 1);
  CHECK(poset.leq(0, 3));
  CHECK_FALSE(poset.leq(3, 0));
  CHECK(poset.leq(4, 6));
}

TEST_CASE("kappa on generators") {
  auto a1 = load_valid("a1");
  auto gens = all_generators(a1);
  REQUIRE(gens.size() == 2);
  PosetSheaf ray = kappa_generator(a1, gens[1]);
  CHECK(stalk_at(ray, {1}) == std::map<int, std::size_t>{{-1, 1}});
  CHECK(stalk_at(ray, {0}) == none);
  CHECK(stalk_at(ray, {-1}) == none);
  PosetSheaf zero = kappa_generator(a1, gens[0]);
  CHECK(stalk_at(zero, {-3}) == std::map<int, std::size_t>{{-1, 1}});

  auto x2 = load_valid("p1_x2");
  bool seen = false;
  for (const auto& g : all_generators(x2)) {
    if (g.chi != RatVector{Rational(1, 2)} || x2.sigma.cone(g.cone).generators() != std::vector<IntVector>{{1}}) continue;
    seen = true;
    PosetSheaf f = kappa_generator(x2, g);
    CHECK(stalk_at(f, {Rational(3, 4)}) == std::map<int, std::size_t>{{-1, 1}});
    CHECK(stalk_at(f, {Rational(1, 2)}) == none);
    CHECK(stalk_at(f, {Rational(1, 4)}) == none);
  }
  CHECK(seen);
}

TEST_CASE("hom match") {
  auto a1 = load_valid("a1");
  auto res = verify_hom_match(a1, {{1, 1}});
  CHECK(res.status == CheckStatus::Pass);
  const auto& table = res.tables["{0}/0 -> {0}/0"];
  CHECK(table.size() == 4);
  CHECK(table.contains("3"));
  CHECK_FALSE(table.contains("-1"));

  auto p2 = load_valid("p2");
  CHECK(face_pairs(p2).size() == 19);
  auto none_side = verify_hom_match(p2, non_face_pairs(p2), {1, 0, {}});
  CHECK(none_side.status == CheckStatus::Pass);
  for (const auto& [pair, t] : none_side.tables.items()) CHECK(t.empty());
}

TEST_CASE("unit lemma") {
  CHECK(verify_unit(load_valid("p1")).status == CheckStatus::Pass);
  CHECK(verify_unit(load_valid("p2")).status == CheckStatus::Pass);
  CHECK(verify_unit(load_valid("a1")).status == CheckStatus::NotApplicable);
}

TEST_CASE("vanishing with negative controls") {
  auto res = verify_vanishing(load_valid("p1"));
  CHECK(res.status == CheckStatus::Pass);
  CHECK(res.tables["samples"]["Q_M star Q_gamma"]["acyclic"] == true);
  CHECK(res.tables["samples"]["Q_[0,1]^n star Q_gamma"]["acyclic"] == false);
}

TEST_CASE("skeleton containment") {
  auto a1 = load_valid("a1");
  CHECK(verify_skeleton_ss(a1).status == CheckStatus::Pass);
  CHECK(verify_skeleton_ss(load_valid("p1")).status == CheckStatus::Pass);
  LCPolyhedron interval{1, {ge({1}, 0), ge({-1}, -1)}};
  PosetSheaf bad = realize_on_window(IndicatorComplex::single(interval), 3);
  auto escapes = skeleton_escapes(a1, bad);
  REQUIRE(escapes.size() == 1);
  CHECK(escapes[0].find("x = (0)") != std::string::npos);
}

TEST_CASE("monoidal and refinement") {
  auto p1 = load_valid("p1");
  auto d = [&](long k) { return DivisorData::multiple_of(p1, 0, k); };
  CHECK(verify_monoidal(p1, {{d(1), d(1)}, {d(0), d(2)}}).status == CheckStatus::Pass);
  CHECK(verify_monoidal(load_valid("a1"), {}).status == CheckStatus::NotApplicable);
  CHECK(verify_refinement(p1, std::nullopt).status == CheckStatus::Pass);
  CHECK(verify_refinement(p1, *p1.sigma.index_of({0})).status == CheckStatus::NotApplicable);
  auto a2 = load_valid("a2");
  CHECK(verify_refinement(a2, a2.sigma.maximal_cones()[0]).status == CheckStatus::Pass);
}

TEST_CASE("line bundles on the projective line") {
  auto p1 = load_valid("p1");
  std::vector<DivisorData> ds;
  for (long k = -3; k <= 3; ++k) ds.push_back(DivisorData::multiple_of(p1, 0, k));
  auto res = verify_line_bundle(p1, ds, 4);
  CHECK(res.status == CheckStatus::Pass);
  CHECK(res.tables["D(3,0)"]["totals"] == nlohmann::json{{"0", 4}});
  CHECK(res.tables["D(-3,0)"]["totals"] == nlohmann::json{{"1", 2}});
}

TEST_CASE("reports are deterministic") {
  auto p1 = load_valid("p1");
  SuiteOptions o;
  o.jobs = 4;
  auto a = to_json(run_suite(p1, o)).dump();
  o.jobs = 1;
  auto b = to_json(run_suite(p1, o)).dump();
  CHECK(a == b);
  CHECK(format_rational(Rational(6, 4)) == "3/2");
  CHECK(rational_json({Rational(1), Rational(-2)}) == nlohmann::json{1, -2});
  CHECK(rational_json({Rational(1, 2)}) == nlohmann::json{"1/2"});
  o.checks = {"nonsense"};
  CHECK_THROWS_AS(run_suite(p1, o), InputError);
}
