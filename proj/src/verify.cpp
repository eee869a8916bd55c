#include <algorithm>
#include <set>

#include "ccc/verify.hpp"

namespace ccc {

using nlohmann::json;

namespace {

std::string point_key(const RatVector& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += format_rational(m[i]);
  }
  return s;
}

json dims_json(const std::map<int, std::size_t>& d) {
  json j = json::object();
  for (const auto& [k, v] : d)
    if (v) j[std::to_string(k)] = v;
  return j;
}

std::string dims_string(const std::map<int, std::size_t>& d) {
  if (d.empty()) return "0";
  std::string s;
  for (const auto& [k, v] : d) s += (s.empty() ? "" : " + ") + std::string("Q^") + std::to_string(v) + "[" + std::to_string(-k) + "]";
  return s;
}

std::optional<std::string> first_nonacyclic(const PosetSheaf& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto h = f.stalk_cohomology(i);
    if (!h.empty()) return to_string(f.stratification().stratum(i).sample) + " has " + dims_string(h);
  }
  return std::nullopt;
}

RatVector add(const RatVector& a, const RatVector& b, int sign = 1) {
  RatVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + sign * b[i];
  return c;
}

// A closed strictly convex cone whose nonzero vectors lie in the interior of
// sigma^vee (any pointed cone for the zero cone).
LCPolyhedron cone_inside_dual(const StackyFan& sf, std::size_t cone) {
  const std::size_t n = sf.n_rank;
  IntVector w(n, 1);
  std::optional<Cone> dual;
  if (sf.sigma.dim(cone) > 0) {
    dual = dual_cone(sf.sigma.cone(cone));
    w = primitive(dual->interior_point());
  }
  std::vector<IntVector> gens;
  if (n == 1) {
    gens.push_back(w);
  } else {
    IntVector p{-w[1], w[0]};
    for (long k = 1;; k *= 2) {
      IntVector g1{k * w[0] + p[0], k * w[1] + p[1]}, g2{k * w[0] - p[0], k * w[1] - p[1]};
      if (!dual || (dual->contains_in_relative_interior(to_rational(g1)) && dual->contains_in_relative_interior(to_rational(g2)))) {
        gens = {g1, g2};
        break;
      }
    }
  }
  return LCPolyhedron::from_cone(Cone(n, gens), RatVector(n, 0), false);
}

LCPolyhedron origin_point(std::size_t n) {
  LCPolyhedron p{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    RatVector e(n, 0);
    e[i] = 1;
    p.constraints.push_back(eq(e, 0));
  }
  return p;
}

LCPolyhedron unit_cube(std::size_t n) {
  LCPolyhedron p{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    RatVector e(n, 0);
    e[i] = 1;
    p.constraints.push_back(ge(e, 0));
    e[i] = -1;
    p.constraints.push_back(ge(e, -1));
  }
  return p;
}

struct Convolution {
  PosetSheaf f, g, out;
};

// Both complexes realized on one arrangement of the input window, convolved onto
// the output window.
Convolution convolve_complexes(const IndicatorComplex& a, const IndicatorComplex& b, const Rational& in_radius,
                               const Rational& out_radius) {
  auto regions = a.regions();
  for (auto& r : b.regions()) regions.push_back(r);
  auto strat = refine_arrangement(regions, Box::cube(a.dim, in_radius));
  Convolution c;
  c.f = realize(a, strat);
  c.g = realize(b, strat);
  c.out = convolve(c.f, c.g, Box::cube(a.dim, out_radius));
  return c;
}

Rational max_abs(const DivisorData& d) {
  Rational m = 0;
  for (const auto& a : d.coefficients) m = std::max<Rational>(m, Rational(abs(a)));
  return m;
}

std::string divisor_key(const DivisorData& d) {
  std::string s = "D(";
  for (std::size_t i = 0; i < d.coefficients.size(); ++i) s += (i ? "," : "") + d.coefficients[i].get_str();
  return s + ")";
}

// Pseudo-angle comparison of u and v measured counterclockwise from a.
bool angle_from_le(const RatVector& a, const RatVector& u, const RatVector& v) {
  auto rot = [&](const RatVector& x) { return RatVector{a[0] * x[0] + a[1] * x[1], a[0] * x[1] - a[1] * x[0]}; };
  RatVector ru = rot(u), rv = rot(v);
  auto half = [](const RatVector& x) { return x[1] > 0 || (x[1] == 0 && x[0] > 0) ? 0 : 1; };
  if (half(ru) != half(rv)) return half(ru) < half(rv);
  return ru[0] * rv[1] - ru[1] * rv[0] >= 0;
}

bool in_closed_sector(const SSCell& c, const RatVector& xi) {
  bool zero = std::all_of(xi.begin(), xi.end(), [](const Rational& q) { return q == 0; });
  if (zero) return true;
  if (c.sector.empty()) return false;
  const auto& a = c.sector[0];
  if (xi.size() == 1) return sgn(a[0]) == sgn(xi[0]);
  if (c.sector.size() == 1) return a[0] * xi[1] - a[1] * xi[0] == 0 && a[0] * xi[0] + a[1] * xi[1] > 0;
  return angle_from_le(a, xi, c.sector[1]);
}

ConstraintSystem closure_of(const Stratification& s, std::size_t i) {
  return LCPolyhedron{s.ambient_dim(), s.constraints(i)}.toggled().constraints;
}

}  // namespace

std::string generator_label(const StackyFan& sf, const GenObject& g) {
  return sf.sigma.cone_label(g.cone) + "/" + std::to_string(g.coset);
}

std::vector<std::pair<std::size_t, std::size_t>> face_pairs(const StackyFan& sf) {
  auto gens = all_generators(sf);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (sf.sigma.is_face(gens[j].cone, gens[i].cone)) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> non_face_pairs(const StackyFan& sf) {
  auto gens = all_generators(sf);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (!sf.sigma.is_face(gens[j].cone, gens[i].cone)) out.emplace_back(i, j);
  return out;
}

CheckResult verify_hom_match(const StackyFan& sf, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                             const HomMatchOptions& options) {
  CheckResult res;
  res.id = "hom_match";
  const std::size_t n = sf.n_rank;
  const long r = options.translation_radius;
  const Rational window = options.window_radius != 0 ? options.window_radius : Rational(2 * r + 4);
  res.parameters["translation_radius"] = r;
  res.parameters["window_radius"] = format_rational(window);
  res.parameters["pairs"] = pairs.size();
  res.parameters["extra_hyperplanes"] = options.extra_hyperplanes.size();
  const auto gens = all_generators(sf);
  const Box translations = Box::cube(n, r);
  const auto ms = lattice_points({}, AffineLattice::integral(n), translations);
  for (const auto& [i, j] : pairs) {
    if (i >= gens.size() || j >= gens.size()) throw InputError("generator index out of range");
    const auto& a = gens[i];
    const auto& b = gens[j];
    const std::string key = generator_label(sf, a) + " -> " + generator_label(sf, b);
    auto coherent = hom_basis(sf, a, b, Box::cube(n, r + 2));
    std::set<RatVector> labels(coherent.basis.begin(), coherent.basis.end());
    auto constructible = torus_hom(kappa_indicator(sf, a), kappa_indicator(sf, b), translations, window, options.extra_hyperplanes);
    json table = json::object();
    for (const auto& m : ms) {
      std::map<int, std::size_t> want, got;
      if (labels.count(add(m, add(a.chi, b.chi, -1)))) want[0] = 1;
      if (auto it = constructible.dims.find(m); it != constructible.dims.end()) got = it->second;
      if (want != got)
        res.fail(key + " at m = " + to_string(m) + ": coherent " + dims_string(want) + ", constructible " + dims_string(got));
      if (!want.empty() || !got.empty())
        table[point_key(m)] = {{"coherent", dims_json(want)}, {"constructible", dims_json(got)}, {"match", want == got}};
    }
    res.tables[key] = table;
  }
  return res;
}

CheckResult verify_unit(const StackyFan& sf) {
  CheckResult res;
  res.id = "unit";
  if (!sf.sigma.is_complete()) {
    res.status = CheckStatus::NotApplicable;
    res.note = "the fan is not complete";
    return res;
  }
  const std::size_t n = sf.n_rank;
  const Rational window = 3;
  res.parameters["window_radius"] = format_rational(window);
  const IndicatorComplex unit = kappa_structure_sheaf(sf);
  PosetSheaf k = realize_on_window(unit, window);
  const auto origin = k.stratification().locate(RatVector(n, 0));
  json strata = json::object();
  for (std::size_t i = 0; i < k.size(); ++i) {
    auto h = k.stalk_cohomology(i);
    std::map<int, std::size_t> want;
    if (origin && i == *origin) want[0] = 1;
    if (h != want) res.fail("kappa(O) at " + to_string(k.stratification().stratum(i).sample) + " has " + dims_string(h));
    if (!h.empty()) strata[point_key(k.stratification().stratum(i).sample)] = dims_json(h);
  }
  res.tables["kappa_O_stalks"] = strata;
  res.tables["strata"] = k.size();
  json conv = json::object();
  for (const auto& g : all_generators(sf)) {
    const IndicatorComplex e = kappa_indicator(sf, g);
    auto c = convolve_complexes(e, unit, window, window);
    auto target = realize_on_window(e, window);
    auto err = compare_sheaves(c.out, target);
    if (err) res.fail("E star kappa(O) differs from E for " + generator_label(sf, g) + ": " + *err);
    conv[generator_label(sf, g)] = err ? "mismatch" : "equal";
  }
  res.tables["generator_star_unit"] = conv;
  return res;
}

CheckResult verify_vanishing(const StackyFan& sf) {
  CheckResult res;
  res.id = "vanishing";
  const std::size_t n = sf.n_rank;
  const Rational in = 4, out = 2;
  res.parameters["input_window_radius"] = format_rational(in);
  res.parameters["output_window_radius"] = format_rational(out);
  json samples = json::object();
  std::size_t estimates = 0;
  auto run = [&](const std::string& name, const IndicatorComplex& a, const IndicatorComplex& b, bool expect_zero) {
    auto c = convolve_complexes(a, b, in, out);
    auto bad = first_nonacyclic(c.out);
    if (expect_zero && bad) res.fail(name + " is not acyclic: " + *bad);
    if (!expect_zero && !bad) res.fail(name + " (negative control) is acyclic");
    for (const auto& v : ss_estimate_violations(c.f, c.g, c.out)) res.fail(name + ": SS estimate fails at " + v);
    ++estimates;
    samples[name] = {{"expected", expect_zero ? "acyclic" : "nonzero"}, {"acyclic", !bad}};
  };
  const LCPolyhedron gamma0 = cone_inside_dual(sf, *sf.sigma.index_of({}));
  run("Q_M star Q_gamma", IndicatorComplex::single(LCPolyhedron::whole(n)), IndicatorComplex::single(gamma0), true);
  for (const auto& g : all_generators(sf)) {
    const std::string label = generator_label(sf, g);
    const IndicatorComplex e = kappa_indicator(sf, g);
    run("Theta(" + label + ") star Q_gamma'", e, IndicatorComplex::single(cone_inside_dual(sf, g.cone)), true);
    run("Theta(" + label + ") star Q_0", e, IndicatorComplex::single(origin_point(n)), false);
  }
  run("Q_[0,1]^n star Q_gamma", IndicatorComplex::single(unit_cube(n)), IndicatorComplex::single(gamma0), false);
  res.tables["samples"] = samples;
  res.tables["ss_estimates_checked"] = estimates;
  return res;
}

CheckResult verify_monoidal(const StackyFan& sf, const std::vector<std::pair<DivisorData, DivisorData>>& pairs) {
  CheckResult res;
  res.id = "monoidal";
  if (!sf.sigma_hat.is_smooth() || !sf.sigma.is_complete()) {
    res.status = CheckStatus::NotApplicable;
    res.note = "needs a smooth complete fan";
    return res;
  }
  json table = json::object();
  for (const auto& [d1, d2] : pairs) {
    DivisorData sum = d1;
    for (std::size_t i = 0; i < sum.coefficients.size(); ++i) sum.coefficients[i] += d2.coefficients[i];
    const Rational window = 2 * (max_abs(d1) + max_abs(d2)) + 3;
    const std::string key = divisor_key(d1) + " * " + divisor_key(d2);
    auto c = convolve_complexes(kappa_line_bundle(sf, d1), kappa_line_bundle(sf, d2), window, window);
    auto target = realize_on_window(kappa_line_bundle(sf, sum), window);
    auto err = compare_sheaves(c.out, target);
    if (err) res.fail(key + " differs from " + divisor_key(sum) + ": " + *err);
    for (const auto& v : ss_estimate_violations(c.f, c.g, c.out)) res.fail(key + ": SS estimate fails at " + v);
    table[key] = {{"window_radius", format_rational(window)}, {"output_strata", c.out.size()}, {"match", !err}};
  }
  res.tables["pairs"] = table;
  return res;
}

CheckResult verify_refinement(const StackyFan& sf, std::optional<std::size_t> sigma) {
  CheckResult res;
  res.id = "refinement";
  if (!sigma) {
    res.note = "identity refinement";
    return res;
  }
  if (*sigma >= sf.sigma.size()) throw InputError("cone index out of range");
  res.parameters["subdivided_cone"] = sf.sigma.cone_label(*sigma);
  if (sf.sigma.dim(*sigma) < 2) {
    res.status = CheckStatus::NotApplicable;
    res.note = "star subdivision of a cone of dimension below 2 is trivial";
    return res;
  }
  StackyFan fine = sf;
  fine.validated = false;
  fine.name = sf.name + " subdivided";
  fine.sigma_hat = star_subdivision(sf.sigma_hat, sf.cone_map_inverse.at(*sigma));
  auto report = validate_condition1(fine);
  if (!report.valid) {
    res.status = CheckStatus::NotApplicable;
    res.note = "the subdivision violates Condition 1: " + report.message;
    return res;
  }
  const Rational window = 4;
  res.parameters["window_radius"] = format_rational(window);
  const IndicatorComplex k0 = kappa_structure_sheaf(sf), k1 = kappa_structure_sheaf(fine);
  json table = json::object();
  for (const auto& g : all_generators(sf)) {
    const IndicatorComplex e = kappa_indicator(sf, g);
    auto regions = e.regions();
    for (auto& r : k0.regions()) regions.push_back(r);
    for (auto& r : k1.regions()) regions.push_back(r);
    auto strat = refine_arrangement(regions, Box::cube(sf.n_rank, window));
    PosetSheaf fe = realize(e, strat);
    PosetSheaf c0 = convolve(fe, realize(k0, strat), Box::cube(sf.n_rank, window));
    PosetSheaf c1 = convolve(fe, realize(k1, strat), Box::cube(sf.n_rank, window));
    auto err = compare_sheaves(c0, c1);
    if (err) res.fail("E star kappa(O) changes under subdivision for " + generator_label(sf, g) + ": " + *err);
    table[generator_label(sf, g)] = err ? "mismatch" : "equal";
  }
  res.tables["generators"] = table;
  return res;
}

std::vector<std::string> skeleton_escapes(const StackyFan& sf, const PosetSheaf& f) {
  const Skeleton sk = build_skeleton(sf);
  std::vector<Cone> minus;
  for (const auto& c : sk.cells) minus.emplace_back(sf.n_rank, c.minus_sigma);
  const auto& st = f.stratification();
  std::vector<std::string> out;
  for (const auto& cell : microsupport(f)) {
    const Stratum& s = st.stratum(cell.stratum);
    std::optional<RatVector> along;
    if (s.dim == 1 && st.ambient_dim() == 2) {
      for (std::size_t k = 0; k < s.signs.size(); ++k)
        if (s.signs[k] == 0) {
          const auto& a = st.hyperplanes()[k].a;
          along = add(s.sample, RatVector{Rational(-a[1]), Rational(a[0])});
          break;
        }
    }
    bool inside = false;
    for (std::size_t c = 0; c < sk.cells.size() && !inside; ++c) {
      const auto& sc = sk.cells[c];
      if (cell.sector.empty() != sc.minus_sigma.empty() && cell.sector.empty()) continue;
      if (!sc.base_contains(s.sample) || (along && !sc.base_contains(*along))) continue;
      inside = std::all_of(cell.sector.begin(), cell.sector.end(), [&](const RatVector& v) { return minus[c].contains(v); });
    }
    if (!inside)
      out.push_back("x = " + to_string(s.sample) + ", xi = " + (cell.sector.empty() ? std::string("0") : to_string(cell.sample)));
  }
  return out;
}

CheckResult verify_skeleton_ss(const StackyFan& sf, const Rational& window_radius) {
  CheckResult res;
  res.id = "skeleton_ss";
  res.parameters["window_radius"] = format_rational(window_radius);
  json table = json::object();
  for (const auto& g : all_generators(sf)) {
    PosetSheaf f = kappa_generator(sf, g, window_radius);
    auto escapes = skeleton_escapes(sf, f);
    for (const auto& e : escapes) res.fail("SS of Theta(" + generator_label(sf, g) + ") escapes the skeleton at " + e);
    table[generator_label(sf, g)] = {{"ss_cells", microsupport(f).size()}, {"escaping", escapes.size()}};
  }
  res.tables["generators"] = table;
  return res;
}

std::vector<std::string> ss_estimate_violations(const PosetSheaf& f, const PosetSheaf& g, const PosetSheaf& conv) {
  const auto sf = microsupport(f), sg = microsupport(g), sc = microsupport(conv);
  const std::size_t n = conv.stratification().ambient_dim();
  std::map<std::size_t, ConstraintSystem> cf, cg;
  for (const auto& c : sf) cf.emplace(c.stratum, closure_of(f.stratification(), c.stratum));
  for (const auto& c : sg) cg.emplace(c.stratum, closure_of(g.stratification(), c.stratum));
  std::vector<std::string> out;
  for (const auto& cell : sc) {
    const RatVector r = conv.stratification().stratum(cell.stratum).sample;
    const RatVector xi = cell.sector.empty() ? RatVector(n, 0) : cell.sample;
    bool found = false;
    for (const auto& a : sf) {
      if (found) break;
      if (!in_closed_sector(a, xi)) continue;
      for (const auto& b : sg) {
        if (!in_closed_sector(b, xi)) continue;
        ConstraintSystem cs = cf.at(a.stratum);
        for (const auto& c : cg.at(b.stratum)) {
          RatVector na(n);
          for (std::size_t i = 0; i < n; ++i) na[i] = -c.a[i];
          cs.push_back({na, c.b - dot(c.a, r), c.rel});
        }
        if (fm_feasible(cs, n)) {
          found = true;
          break;
        }
      }
    }
    if (!found) out.push_back("x = " + to_string(r) + ", xi = " + to_string(xi));
  }
  return out;
}

CheckResult verify_line_bundle(const StackyFan& sf, const std::vector<DivisorData>& divisors, long translation_radius) {
  CheckResult res;
  res.id = "line_bundle";
  const std::size_t n = sf.n_rank;
  const Box box = Box::cube(n, translation_radius);
  res.parameters["translation_radius"] = translation_radius;
  const IndicatorComplex unit = kappa_structure_sheaf(sf);
  for (const auto& d : divisors) {
    const std::string key = divisor_key(d);
    const Rational window = 2 * (translation_radius + max_abs(d)) + 4;
    auto coherent = line_bundle_cohomology(sf, d, box);
    auto constructible = torus_hom(unit, kappa_line_bundle(sf, d), box, window);
    json table = json::object();
    std::map<int, std::size_t> totals;
    for (const auto& m : lattice_points({}, AffineLattice::integral(n), box)) {
      std::map<int, std::size_t> want, got;
      if (auto it = coherent.find(m); it != coherent.end())
        for (const auto& [k, v] : it->second)
          if (v) want[k] = v;
      if (auto it = constructible.dims.find(m); it != constructible.dims.end()) got = it->second;
      if (want != got)
        res.fail(key + " at m = " + to_string(m) + ": coherent " + dims_string(want) + ", constructible " + dims_string(got));
      for (const auto& [k, v] : got) totals[k] += v;
      if (!want.empty() || !got.empty()) table[point_key(m)] = {{"coherent", dims_json(want)}, {"constructible", dims_json(got)}};
    }
    res.tables[key] = {{"per_degree", table}, {"totals", dims_json(totals)}, {"window_radius", format_rational(window)}};
  }
  return res;
}

CheckResult verify_stacky_arithmetic(const StackyFan& sf) {
  CheckResult res;
  res.id = "stacky_arithmetic";
  json table = json::object();
  for (std::size_t c = 0; c < sf.sigma.size(); ++c) {
    auto data = compute_M_sigma_beta(sf, c);
    auto h = compute_H_beta(sf, c);
    if (Integer(data.coset_count()) != h.order())
      res.fail("cone " + sf.sigma.cone_label(c) + ": |M_sigma/M| = " + std::to_string(data.coset_count()) + " but |H_beta| = " +
               h.order().get_str());
    table[sf.sigma.cone_label(c)] = {{"M_sigma_beta_mod_M", data.coset_group.to_string()}, {"H_beta", h.to_string()}};
  }
  res.tables["cones"] = table;
  return res;
}

}  // namespace ccc
