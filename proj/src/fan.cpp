#include "ccc/fan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ccc {

Fan::Fan(std::size_t ambient, std::vector<IntVector> rays, const std::vector<std::vector<std::size_t>>& cones)
    : ambient_(ambient), rays_(std::move(rays)) {
  for (const auto& r : rays_) {
    if (r.size() != ambient_) throw LinalgError("fan ray has wrong dimension");
    if (gcd_of(r) != 1) throw LinalgError("fan ray " + to_string(r) + " is not primitive");
  }
  for (std::size_t i = 0; i < rays_.size(); ++i)
    for (std::size_t j = i + 1; j < rays_.size(); ++j)
      if (rays_[i] == rays_[j]) throw LinalgError("duplicate fan ray " + to_string(rays_[i]));

  std::set<std::vector<std::size_t>> all;
  all.insert({});
  for (auto c : cones) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (auto i : c)
      if (i >= rays_.size()) throw LinalgError("cone refers to missing ray");
    std::vector<IntVector> gens;
    for (auto i : c) gens.push_back(rays_[i]);
    Cone geo(ambient_, gens);
    for (const auto& face : geo.faces()) {
      std::vector<std::size_t> ids;
      for (auto k : face) ids.push_back(c[k]);
      all.insert(ids);
    }
  }
  cones_.assign(all.begin(), all.end());
  for (const auto& c : cones_) {
    std::vector<IntVector> gens;
    for (auto i : c) gens.push_back(rays_[i]);
    geometry_.emplace_back(ambient_, gens);
  }
  std::vector<std::size_t> order(cones_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return geometry_[a].dimension() < geometry_[b].dimension();
  });
  std::vector<std::vector<std::size_t>> c2;
  std::vector<Cone> g2;
  for (auto i : order) {
    c2.push_back(cones_[i]);
    g2.push_back(geometry_[i]);
  }
  cones_ = std::move(c2);
  geometry_ = std::move(g2);
}

std::optional<std::size_t> Fan::index_of(std::vector<std::size_t> rays) const {
  std::sort(rays.begin(), rays.end());
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i] == rays) return i;
  return std::nullopt;
}

bool Fan::is_face(std::size_t tau, std::size_t sigma) const {
  return std::includes(cones_[sigma].begin(), cones_[sigma].end(), cones_[tau].begin(), cones_[tau].end());
}

std::vector<std::size_t> Fan::maximal_cones() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cones_.size() && maximal; ++j)
      if (j != i && is_face(i, j)) maximal = false;
    if (maximal) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Fan::cones_of_dim(std::size_t d) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (dim(i) == d) out.push_back(i);
  return out;
}

std::vector<IntVector> Fan::cone_rays(std::size_t i) const {
  std::vector<IntVector> out;
  for (auto r : cones_[i]) out.push_back(rays_[r]);
  return out;
}

bool relative_interiors_meet(const Cone& a, const Cone& b) {
  // x = sum l_i a_i = sum m_j b_j with all l_i, m_j > 0.
  const auto& ga = a.generators();
  const auto& gb = b.generators();
  std::size_t n = ga.size() + gb.size();
  ConstraintSystem sys;
  for (std::size_t i = 0; i < n; ++i) {
    RatVector e(n, 0);
    e[i] = 1;
    sys.push_back(gt(e, 0));
  }
  for (std::size_t k = 0; k < a.ambient_dim(); ++k) {
    RatVector row(n, 0);
    for (std::size_t i = 0; i < ga.size(); ++i) row[i] = ga[i][k];
    for (std::size_t j = 0; j < gb.size(); ++j) row[ga.size() + j] = -gb[j][k];
    sys.push_back(eq(row, 0));
  }
  return fm_feasible(sys, n);
}

std::optional<std::string> Fan::validate() const {
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (!geometry_[i].is_strictly_convex()) return "cone " + cone_label(i) + " is not strictly convex";
  for (std::size_t i = 0; i < cones_.size(); ++i)
    for (std::size_t j = i + 1; j < cones_.size(); ++j)
      if (relative_interiors_meet(geometry_[i], geometry_[j]))
        return "cones " + cone_label(i) + " and " + cone_label(j) + " overlap";
  return std::nullopt;
}

bool Fan::is_simplicial() const {
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (geometry_[i].dimension() != cones_[i].size()) return false;
  return true;
}

bool Fan::is_smooth() const {
  if (!is_simplicial()) return false;
  for (auto i : maximal_cones()) {
    auto gens = cone_rays(i);
    if (gens.empty()) continue;
    IntMatrix m(gens.size(), ambient_);
    for (std::size_t r = 0; r < gens.size(); ++r)
      for (std::size_t c = 0; c < ambient_; ++c) m(r, c) = gens[r][c];
    for (const auto& d : smith_normal_form(m).invariant_factors)
      if (d != 1) return false;
  }
  return true;
}

bool Fan::is_complete() const {
  if (ambient_ == 0) return true;
  for (auto i : maximal_cones())
    if (dim(i) != ambient_) return false;
  // Every wall is shared by exactly two maximal cones.
  for (auto w : cones_of_dim(ambient_ - 1)) {
    std::size_t count = 0;
    for (auto m : cones_of_dim(ambient_))
      if (is_face(w, m)) ++count;
    if (count != 2) return false;
  }
  Integer bound = 1;
  for (const auto& r : rays_)
    for (const auto& v : r) bound = std::max(bound, Integer(abs(v)));
  long R = 3 * bound.get_si();
  std::vector<long> x(ambient_, -R);
  while (true) {
    IntVector v(ambient_);
    for (std::size_t k = 0; k < ambient_; ++k) v[k] = x[k];
    if (gcd_of(v) == 1) {
      RatVector q = to_rational(v);
      bool covered = false;
      for (std::size_t i = 0; i < cones_.size() && !covered; ++i) covered = geometry_[i].contains(q);
      if (!covered) return false;
    }
    std::size_t k = 0;
    while (k < ambient_ && x[k] == R) x[k++] = -R;
    if (k == ambient_) break;
    ++x[k];
  }
  return true;
}

std::string Fan::cone_label(std::size_t i) const {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < cones_[i].size(); ++k) os << (k ? "," : "") << cones_[i][k];
  os << "}";
  return os.str();
}

Fan star_subdivision(const Fan& f, std::size_t sigma) {
  if (f.dim(sigma) < 2) throw LinalgError("star subdivision needs a cone of dimension at least 2");
  IntVector sum(f.ambient_dim(), 0);
  for (const auto& g : f.cone_rays(sigma))
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += g[k];
  IntVector ray = primitive(sum);
  std::vector<IntVector> rays = f.rays();
  std::size_t new_ray = rays.size();
  rays.push_back(ray);
  std::vector<std::vector<std::size_t>> cones;
  for (auto m : f.maximal_cones()) {
    if (!f.is_face(sigma, m)) {
      cones.push_back(f.cones()[m]);
      continue;
    }
    const Cone& geo = f.cone(m);
    const auto& ids = f.cones()[m];
    for (const auto& normal : geo.inequalities()) {
      auto on = geo.generators_on(normal);
      std::vector<std::size_t> facet;
      for (auto k : on) facet.push_back(ids[k]);
      if (std::includes(facet.begin(), facet.end(), f.cones()[sigma].begin(), f.cones()[sigma].end())) continue;
      facet.push_back(new_ray);
      cones.push_back(facet);
    }
  }
  return Fan(f.ambient_dim(), rays, cones);
}

}  // namespace ccc
