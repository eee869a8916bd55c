#include <algorithm>
#include <set>

#include "ccc/polysheaf.hpp"

namespace ccc {

namespace {

RatVector minus(const RatVector& a, const RatVector& b) {
  RatVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

RatVector ray_of(const RatVector& v) { return to_rational(primitive(v)); }

// Position on the circle for exact angular sorting of planar vectors.
bool angle_less(const RatVector& a, const RatVector& b) {
  auto half = [](const RatVector& v) { return v[1] > 0 || (v[1] == 0 && v[0] > 0) ? 0 : 1; };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return a[0] * b[1] - a[1] * b[0] > 0;
}

struct CovectorCell {
  std::vector<RatVector> generators;
  RatVector sample;
};

// Nonzero cells of the local covector fan at stratum s, inside the conormal
// space of s.
std::vector<CovectorCell> covector_cells(const Stratification& st, std::size_t s) {
  const auto& cell = st.stratum(s);
  const std::size_t n = st.ambient_dim();
  std::vector<CovectorCell> out;
  if (cell.dim == n) return out;
  if (n == 1) {
    out.push_back({{{1}}, {1}});
    out.push_back({{{-1}}, {-1}});
    return out;
  }
  if (cell.dim == 1) {
    for (std::size_t k = 0; k < cell.signs.size(); ++k)
      if (cell.signs[k] == 0) {
        RatVector a = to_rational(st.hyperplanes()[k].a);
        RatVector na{-a[0], -a[1]};
        out.push_back({{a}, a});
        out.push_back({{na}, na});
        return out;
      }
  }
  std::set<RatVector> rays;
  for (auto up : st.above(s)) {
    if (st.stratum(up).dim != 1) continue;
    RatVector d = minus(st.stratum(up).sample, cell.sample);
    rays.insert(ray_of({-d[1], d[0]}));
    rays.insert(ray_of({d[1], -d[0]}));
  }
  std::vector<RatVector> sorted(rays.begin(), rays.end());
  std::sort(sorted.begin(), sorted.end(), angle_less);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& a = sorted[i];
    const auto& b = sorted[(i + 1) % sorted.size()];
    out.push_back({{a}, a});
    if (sorted.size() == 1) break;
    if (a[0] * b[1] - a[1] * b[0] > 0) {
      out.push_back({{a, b}, {a[0] + b[0], a[1] + b[1]}});
    } else {
      RatVector mid{-a[1], a[0]};
      out.push_back({{a, b, mid}, mid});
    }
  }
  return out;
}

}  // namespace

std::vector<SSCell> microsupport(const PosetSheaf& f) {
  const auto& st = f.stratification();
  std::vector<SSCell> out;
  std::vector<std::map<int, std::size_t>> coh(st.size());
  for (std::size_t s = 0; s < st.size(); ++s) coh[s] = f.stalk_cohomology(s);
  for (std::size_t s = 0; s < st.size(); ++s) {
    const auto& h = coh[s];
    if (!h.empty()) out.push_back({s, {}, RatVector(st.ambient_dim(), 0), h});
    // A star on which every generization is a quasi-isomorphism carries a
    // constant sheaf and no covectors.
    bool constant = true;
    for (auto up : st.above(s)) {
      if (!constant) break;
      if (coh[up] != h) {
        constant = false;
        break;
      }
      for (const auto& [k, d] : h)
        if (f.generization_rank(s, up, k) != d) {
          constant = false;
          break;
        }
    }
    if (constant) continue;
    for (const auto& cov : covector_cells(st, s)) {
      // Closed test set: strata of star(s) whose local cone lies in <y - x, xi> >= 0.
      std::vector<bool> in_z(st.size(), false);
      in_z[s] = true;
      for (auto c : st.above(s)) {
        bool ok = dot(cov.sample, minus(st.stratum(c).sample, st.stratum(s).sample)) >= 0;
        for (auto b : st.below(c)) {
          if (!ok) break;
          if (b == s || !st.leq(s, b)) continue;
          ok = dot(cov.sample, minus(st.stratum(b).sample, st.stratum(s).sample)) >= 0;
        }
        in_z[c] = ok;
      }
      PosetSheaf z(f.stratification_ptr());
      for (std::size_t c = 0; c < st.size(); ++c)
        if (in_z[c]) {
          CochainComplex one;
          one.dims[0] = 1;
          z.set_stalk(c, one);
        }
      for (std::size_t c = 0; c < st.size(); ++c) {
        if (!in_z[c]) continue;
        for (auto u : st.above(c))
          if (in_z[u]) z.set_map(c, u, 0, SparseMatrix::identity(1));
      }
      auto micro = rhom(z, f);
      if (!micro.empty()) out.push_back({s, cov.generators, cov.sample, micro});
    }
  }
  return out;
}

TorusHomResult torus_hom(const IndicatorComplex& f, const IndicatorComplex& g, const Box& translations,
                         const Rational& window_radius, const std::vector<Hyperplane>& extra) {
  TorusHomResult res;
  const std::size_t n = f.dim;
  Box window = Box::cube(n, window_radius);
  for (const auto& m : lattice_points({}, AffineLattice::integral(n), translations)) {
    IndicatorComplex fm = f.translated(m);
    auto regions = fm.regions();
    for (auto& r : g.regions()) regions.push_back(r);
    auto strat = refine_arrangement(regions, window, extra);
    auto dims = rhom(realize(fm, strat), realize(g, strat));
    if (dims.empty()) continue;
    res.dims[m] = dims;
    for (std::size_t i = 0; i < n; ++i)
      if (m[i] == translations.lo[i] || m[i] == translations.hi[i]) res.boundary_contribution = true;
  }
  return res;
}

}  // namespace ccc
