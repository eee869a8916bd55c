#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "ccc/verify.hpp"

using namespace ccc;
using nlohmann::json;

namespace {

const std::vector<std::string> kSuite{"a1", "a2", "c2_z2", "p1", "p1_x2", "p2", "p1xp1", "p112"};

StackyFan load(const std::string& name) {
  auto sf = load_stacky_fan(std::string(CCC_FIXTURE_DIR) + "/suite/" + name + ".json");
  auto v = validate_condition1(sf);
  if (!v.valid) throw std::runtime_error(name + " fails Condition 1: " + v.message);
  return sf;
}

const std::map<std::string, StackyFan>& suite() {
  static const std::map<std::string, StackyFan> fans = [] {
    std::map<std::string, StackyFan> m;
    for (const auto& n : kSuite) m.emplace(n, load(n));
    return m;
  }();
  return fans;
}

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

std::string first_failure(const CheckResult& r) { return r.failures.empty() ? r.note : r.failures.front(); }

// Hom tables keyed by pair, then m, without the parameters.
json hom_dimensions(const CheckResult& r) {
  json out = json::object();
  for (const auto& [pair, rows] : r.tables.items())
    for (const auto& [m, row] : rows.items()) out[pair][m] = row["constructible"];
  return out;
}

Outcome hom_formula() {
  Outcome o;
  std::size_t pairs = 0, entries = 0;
  for (const auto& [name, sf] : suite()) {
    auto fp = face_pairs(sf);
    pairs += fp.size();
    auto r = verify_hom_match(sf, fp, {3, 0, {}});
    o.require(r.status == CheckStatus::Pass, name + ": " + first_failure(r));
    for (const auto& [pair, rows] : r.tables.items())
      for (const auto& [m, row] : rows.items()) {
        ++entries;
        for (const auto& [deg, dim] : row["constructible"].items())
          o.require(deg == "0" || dim == 0, name + " " + pair + " at m=" + m + " has degree " + deg);
      }
  }
  o.notes.push_back(std::to_string(pairs) + " face pairs, " + std::to_string(entries) + " nonzero degrees m");
  return o;
}

Outcome unit_lemma() {
  Outcome o;
  for (const auto* name : {"p1", "p2", "p1xp1"}) {
    auto r = verify_unit(suite().at(name));
    o.require(r.status == CheckStatus::Pass, std::string(name) + ": " + first_failure(r));
    o.require(r.tables["kappa_O_stalks"].size() == 1, std::string(name) + ": more than one nonzero stalk");
  }
  return o;
}

// D = prod (l_i, u_i], expected hom is prod (-u_i, -l_i].
Outcome polytope_duality() {
  Outcome o;
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> denom(2, 7), numer(-6, 6);
  const Rational out_radius = 3, in_radius = 6;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = trial < 5 ? 1 : 2;
    std::vector<Constraint> d_rows, e_rows, orthant;
    std::ostringstream desc;
    for (std::size_t i = 0; i < n; ++i) {
      const int q = denom(rng);
      const Rational lo(numer(rng) % (q + 1), q);
      std::uniform_int_distribution<int> w(1, q - 1);
      const Rational hi = lo + Rational(w(rng), q);
      RatVector e(n, 0), minus(n, 0);
      e[i] = 1;
      minus[i] = -1;
      d_rows.push_back(gt(e, lo));
      d_rows.push_back(ge(minus, -hi));
      e_rows.push_back(gt(e, -hi));
      e_rows.push_back(ge(minus, lo));
      orthant.push_back(gt(e, 0));
      desc << (i ? " x " : "") << "(" << format_rational(lo) << "," << format_rational(hi) << "]";
    }
    const LCPolyhedron d{n, ConstraintSystem(d_rows)}, dual{n, ConstraintSystem(orthant)}, expected{n, ConstraintSystem(e_rows)};
    auto s = refine_arrangement({d, dual}, Box::cube(n, in_radius));
    auto h = hom_star(indicator_sheaf(d, 0, s), indicator_sheaf(dual, 0, s), Box::cube(n, out_radius));
    auto err = compare_sheaves(h, realize_on_window(IndicatorComplex::single(expected), out_radius));
    o.require(!err.has_value(), desc.str() + ": " + err.value_or(""));
    if (trial == 0 || trial == 5) o.notes.push_back("e.g. D = " + desc.str());
  }
  return o;
}

std::map<std::string, CheckResult>& vanishing_results() {
  static std::map<std::string, CheckResult> cache;
  if (cache.empty())
    for (const auto& [name, sf] : suite()) cache[name] = verify_vanishing(sf);
  return cache;
}

Outcome vanishing() {
  Outcome o;
  std::size_t zero = 0, controls = 0;
  for (const auto& [name, r] : vanishing_results()) {
    for (const auto& [label, s] : r.tables["samples"].items()) {
      const bool want_zero = s["expected"] == "acyclic";
      (want_zero ? zero : controls) += 1;
      o.require(s["acyclic"] == want_zero, name + " " + label);
    }
    for (const auto& f : r.failures)
      if (f.find("SS estimate") == std::string::npos) o.require(false, name + ": " + f);
  }
  o.require(controls > 0, "no negative controls ran");
  o.notes.push_back(std::to_string(zero) + " acyclic, " + std::to_string(controls) + " controls nonzero");
  return o;
}

Outcome ss_containment() {
  Outcome o;
  for (const auto& [name, sf] : suite()) {
    auto r = verify_skeleton_ss(sf);
    o.require(r.status == CheckStatus::Pass, name + ": " + first_failure(r));
  }
  std::size_t pairs = 0;
  for (const auto& [name, r] : vanishing_results()) {
    pairs += r.tables["samples"].size();
    for (const auto& f : r.failures)
      if (f.find("SS estimate") != std::string::npos) o.require(false, name + ": " + f);
  }
  o.notes.push_back("SS estimate on " + std::to_string(pairs) + " convolution pairs");
  return o;
}

// Lattice points of {x, y >= 0, x + y <= d}.
std::size_t triangle_points(long d) {
  std::size_t c = 0;
  for (long x = 0; x <= d; ++x)
    for (long y = 0; x + y <= d; ++y) ++c;
  return c;
}

Outcome line_bundles() {
  Outcome o;
  const auto& p2 = suite().at("p2");
  for (long d = -4; d <= 4; ++d) {
    auto r = verify_line_bundle(p2, {DivisorData::multiple_of(p2, 0, d)}, 4);
    o.require(r.status == CheckStatus::Pass, "O(" + std::to_string(d) + "): " + first_failure(r));
    if (r.tables.empty()) continue;
    const json totals = r.tables.begin().value()["totals"];
    const std::size_t h0 = totals.contains("0") ? totals["0"].get<std::size_t>() : 0;
    const std::size_t h2 = totals.contains("2") ? totals["2"].get<std::size_t>() : 0;
    o.require(!totals.contains("1"), "h1(O(" + std::to_string(d) + ")) is nonzero");
    if (d >= 0) {
      o.require(h0 == triangle_points(d), "h0(O(" + std::to_string(d) + ")) against the lattice count");
      o.require(h0 == static_cast<std::size_t>((d + 1) * (d + 2) / 2), "h0(O(" + std::to_string(d) + ")) against (d+1)(d+2)/2");
    }
    if (d <= -3) o.require(h2 == triangle_points(-d - 3), "h2(O(" + std::to_string(d) + "))");
  }
  return o;
}

std::vector<Hyperplane> refining_hyperplanes(std::size_t n) {
  std::vector<Hyperplane> out;
  for (std::size_t i = 0; i < n; ++i)
    for (int k = -5; k <= 5; k += 2) {
      RatVector a(n, 0);
      a[i] = 1;
      out.push_back(Hyperplane::from(a, Rational(k, 2)));
    }
  if (n == 2) out.push_back(Hyperplane::from({1, -1}, Rational(1, 3)));
  return out;
}

Outcome stability() {
  Outcome o;
  for (const auto& [name, sf] : suite()) {
    auto fp = face_pairs(sf);
    auto base = verify_hom_match(sf, fp, {3, 0, {}});
    const Rational w = Rational(base.parameters["window_radius"].get<std::string>());
    auto doubled = verify_hom_match(sf, fp, {3, 2 * w, {}});
    auto refined = verify_hom_match(sf, fp, {3, 0, refining_hyperplanes(sf.n_rank)});
    o.require(hom_dimensions(base) == hom_dimensions(doubled), name + ": window doubling changed a dimension");
    o.require(hom_dimensions(base) == hom_dimensions(refined), name + ": refinement changed a dimension");
    o.require(doubled.passed() && refined.passed(), name + ": coherent mismatch after perturbation");
    std::optional<std::size_t> sigma;
    for (auto c : sf.sigma.maximal_cones())
      if (!sigma && sf.sigma.dim(c) >= 2) sigma = c;
    if (sigma) {
      auto r = verify_refinement(sf, sigma);
      o.require(r.passed(), name + ": star subdivision: " + first_failure(r));
    }
  }
  return o;
}

long group_order(const std::string& g) {
  long order = 1;
  static const std::regex factor("Z/(\\d+)");
  for (auto it = std::sregex_iterator(g.begin(), g.end(), factor); it != std::sregex_iterator(); ++it)
    order *= std::stol((*it)[1].str());
  return order;
}

long det(std::vector<std::vector<long>> m) {
  const std::size_t k = m.size();
  if (k == 0) return 1;
  if (k == 1) return m[0][0];
  long s = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::vector<long>> minor;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<long> row;
      for (std::size_t j = 0; j < k; ++j)
        if (j != c) row.push_back(m[r][j]);
      minor.push_back(row);
    }
    s += (c % 2 ? -1 : 1) * m[0][c] * det(minor);
  }
  return s;
}

// Index of the span of the columns in its saturation: gcd of the maximal minors.
long saturation_index(const std::vector<IntVector>& cols, std::size_t n) {
  const std::size_t k = cols.size();
  long g = 0;
  std::vector<std::size_t> rows(k);
  std::function<void(std::size_t, std::size_t)> pick = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      std::vector<std::vector<long>> m(k, std::vector<long>(k));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) m[a][b] = cols[b][rows[a]].get_si();
      g = std::gcd(g, det(m));
      return;
    }
    for (std::size_t r = start; r < n; ++r) {
      rows[depth] = r;
      pick(r + 1, depth + 1);
    }
  };
  pick(0, 0);
  return g == 0 ? 0 : std::abs(g);
}

Outcome stacky_arithmetic() {
  Outcome o;
  std::size_t oracle = 0;
  for (const auto& [name, sf] : suite()) {
    auto r = verify_stacky_arithmetic(sf);
    o.require(r.status == CheckStatus::Pass, name + ": " + first_failure(r));
    const bool smooth_hat = sf.sigma_hat.is_smooth();
    for (std::size_t c = 0; c < sf.sigma.size(); ++c) {
      const json& row = r.tables["cones"][sf.sigma.cone_label(c)];
      const long h = group_order(row["H_beta"].get<std::string>());
      o.require(h == group_order(row["M_sigma_beta_mod_M"].get<std::string>()), name + " " + sf.sigma.cone_label(c));
      if (!smooth_hat) continue;
      std::vector<IntVector> images;
      for (const auto& ray : sf.sigma_hat.cone_rays(sf.cone_map_inverse[c])) images.push_back(sf.apply_beta(ray));
      o.require(h == saturation_index(images, sf.n_rank), name + " " + sf.sigma.cone_label(c) + " against the minor oracle");
      ++oracle;
    }
  }
  for (const auto* name : {"c2_z2", "p1_x2"}) {
    const auto& sf = suite().at(name);
    auto r = verify_stacky_arithmetic(sf);
    bool z2 = false;
    for (const auto& [cone, row] : r.tables["cones"].items()) z2 = z2 || row["H_beta"] == "Z/2";
    o.require(z2, std::string(name) + " does not report Z/2");
  }
  o.notes.push_back(std::to_string(oracle) + " cones against the minor oracle");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "hom formula on face pairs, radius 3", 120, hom_formula},
      {2, "unit lemma for P1, P2, P1xP1", 60, unit_lemma},
      {3, "polytope duality on 10 random boxes", 60, polytope_duality},
      {4, "vanishing and negative controls", 60, vanishing},
      {5, "SS containment and SS estimate", 60, ss_containment},
      {6, "P2 line bundles d=-4..4", 120, line_bundles},
      {7, "window doubling and refinement stability", 300, stability},
      {8, "stacky arithmetic |M_sigma_beta/M| = |H_beta|", 10, stacky_arithmetic},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs <= c.budget_s, "exceeded the time budget");
    std::ostringstream line;
    line << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title;
    char t[64];
    std::snprintf(t, sizeof t, " [%.2f s of %.0f s]", secs, c.budget_s);
    line << t;
    for (const auto& n : o.notes) line << " | " << n;
    std::cout << line.str() << std::endl;
    failed += o.ok ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
