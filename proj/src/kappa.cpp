#include <algorithm>

#include "ccc/verify.hpp"

namespace ccc {

bool CechPoset::leq(std::size_t i, std::size_t j) const {
  const auto& a = elements[i].subset;
  const auto& b = elements[j].subset;
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

CechPoset build_cech_poset(const StackyFan& sf) {
  CechPoset p;
  p.maximal = sf.sigma.maximal_cones();
  const std::size_t k = p.maximal.size();
  if (k >= 20) throw LinalgError("too many maximal cones for the Cech poset");
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    subsets.push_back(s);
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (auto& s : subsets) {
    std::vector<std::size_t> rays = sf.sigma.cones()[p.maximal[s[0]]];
    for (std::size_t t = 1; t < s.size(); ++t) {
      const auto& other = sf.sigma.cones()[p.maximal[s[t]]];
      std::vector<std::size_t> next;
      std::set_intersection(rays.begin(), rays.end(), other.begin(), other.end(), std::back_inserter(next));
      rays = std::move(next);
    }
    p.elements.push_back({std::move(s), *sf.sigma.index_of(rays)});
  }
  return p;
}

LCPolyhedron theta_region(const StackyFan& sf, std::size_t cone, const RatVector& chi) {
  const std::size_t n = sf.n_rank;
  if (sf.sigma.dim(cone) == 0) return LCPolyhedron::whole(n);
  return LCPolyhedron::from_cone(dual_cone(sf.sigma.cone(cone)), chi, true);
}

IndicatorComplex kappa_indicator(const StackyFan& sf, const GenObject& g) {
  return IndicatorComplex::single(theta_region(sf, g.cone, g.chi), static_cast<int>(sf.n_rank));
}

PosetSheaf realize_on_window(const IndicatorComplex& c, const Rational& window_radius) {
  return realize(c, refine_arrangement(c.regions(), Box::cube(c.dim, window_radius)));
}

PosetSheaf kappa_generator(const StackyFan& sf, const GenObject& g, const Rational& window_radius) {
  return realize_on_window(kappa_indicator(sf, g), window_radius);
}

IndicatorComplex kappa_line_bundle(const StackyFan& sf, const DivisorData& d) {
  const CechPoset p = build_cech_poset(sf);
  const int n = static_cast<int>(sf.n_rank);
  IndicatorComplex c;
  c.dim = sf.n_rank;
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& e = p.elements[i];
    c.terms.push_back({theta_region(sf, e.cone, d.chart_shift(sf, e.cone)), static_cast<int>(e.subset.size()) - 1 - n});
    index[e.subset] = i;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& s = p.elements[i].subset;
    for (std::size_t k = 0; k < p.maximal.size(); ++k) {
      if (std::binary_search(s.begin(), s.end(), k)) continue;
      std::vector<std::size_t> t = s;
      t.insert(std::upper_bound(t.begin(), t.end(), k), k);
      const auto pos = static_cast<std::size_t>(std::find(t.begin(), t.end(), k) - t.begin());
      c.arrows.push_back({i, index.at(t), pos % 2 == 0 ? 1L : -1L});
    }
  }
  return c;
}

IndicatorComplex kappa_structure_sheaf(const StackyFan& sf) { return kappa_line_bundle(sf, DivisorData::uniform(sf, 0)); }

std::optional<std::string> compare_sheaves(const PosetSheaf& a, const PosetSheaf& b, const std::optional<Box>& inner) {
  const auto& sa = a.stratification();
  const auto& sb = b.stratification();
  if (sa.window().lo != sb.window().lo || sa.window().hi != sb.window().hi)
    throw LinalgError("compared sheaves live on different windows");
  std::vector<Hyperplane> hs = sa.hyperplanes();
  hs.insert(hs.end(), sb.hyperplanes().begin(), sb.hyperplanes().end());
  auto fine = std::make_shared<const Stratification>(sa.ambient_dim(), sa.window(), hs);
  PosetSheaf pa = a.pullback(fine), pb = b.pullback(fine);
  auto counts = [&](std::size_t i) { return !inner || inner->contains(fine->stratum(i).sample); };
  std::vector<std::map<int, std::size_t>> ha(fine->size()), hb(fine->size());
  for (std::size_t i = 0; i < fine->size(); ++i) {
    if (!counts(i)) continue;
    ha[i] = pa.stalk_cohomology(i);
    hb[i] = pb.stalk_cohomology(i);
    if (ha[i] != hb[i])
      return "stalk cohomology differs at " + to_string(fine->stratum(i).sample);
  }
  for (std::size_t i = 0; i < fine->size(); ++i) {
    if (!counts(i) || ha[i].empty()) continue;
    for (auto j : fine->above(i)) {
      if (!counts(j) || hb[j].empty()) continue;
      for (const auto& [k, dim] : ha[i]) {
        if (!hb[j].count(k)) continue;
        if (pa.generization_rank(i, j, k) != pb.generization_rank(i, j, k))
          return "generization rank differs from " + to_string(fine->stratum(i).sample) + " to " +
                 to_string(fine->stratum(j).sample) + " in degree " + std::to_string(k);
      }
    }
  }
  return std::nullopt;
}

}  // namespace ccc
