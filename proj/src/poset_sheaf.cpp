#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ccc/polysheaf.hpp"
#include "sheaf_internal.hpp"

namespace ccc {

namespace detail {

SparseMatrix zero_matrix(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }

SparseMatrix block_matrix_rank_helper(const SparseMatrix& f, const SparseMatrix& b, const SparseMatrix& a) {
  // [[f, b], [a, 0]]
  SparseMatrix m(f.rows() + a.rows(), f.cols() + b.cols());
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (const auto& [c, v] : f.row(i)) m.add(i, c, v);
    for (const auto& [c, v] : b.row(i)) m.add(i, f.cols() + c, v);
  }
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto& [c, v] : a.row(i)) m.add(f.rows() + i, c, v);
  return m;
}

TensorLayout tensor_layout(const CochainComplex& a, const CochainComplex& b) {
  TensorLayout t;
  for (const auto& [i, da] : a.dims) {
    if (da == 0) continue;
    for (const auto& [j, db] : b.dims) {
      if (db == 0) continue;
      auto& off = t.offsets[{i, j}];
      off = t.dims[i + j];
      t.dims[i + j] += da * db;
    }
  }
  return t;
}

CochainComplex tensor_complex(const CochainComplex& a, const CochainComplex& b) {
  TensorLayout t = tensor_layout(a, b);
  CochainComplex c;
  c.dims = t.dims;
  for (const auto& [deg, dim] : t.dims) {
    SparseMatrix d(c.dim(deg + 1), dim);
    for (const auto& [ij, off] : t.offsets) {
      auto [i, j] = ij;
      if (i + j != deg) continue;
      const std::size_t da = a.dim(i), db = b.dim(j);
      SparseMatrix d_a = a.differential(i), d_b = b.differential(j);
      auto to_a = t.offsets.find({i + 1, j});
      auto to_b = t.offsets.find({i, j + 1});
      const std::int64_t sign = (i % 2 == 0) ? 1 : -1;
      for (std::size_t x = 0; x < da; ++x)
        for (std::size_t y = 0; y < db; ++y) {
          std::size_t col = off + x * db + y;
          if (to_a != t.offsets.end())
            for (std::size_t x2 = 0; x2 < d_a.rows(); ++x2) {
              auto v = d_a.at(x2, x);
              if (v) d.add(to_a->second + x2 * db + y, col, v);
            }
          if (to_b != t.offsets.end())
            for (std::size_t y2 = 0; y2 < d_b.rows(); ++y2) {
              auto v = d_b.at(y2, y);
              if (v) d.add(to_b->second + x * d_b.rows() + y2, col, sign * v);
            }
        }
    }
    if (!d.is_zero()) c.d[deg] = d;
  }
  return c;
}

SparseMatrix tensor_map(const CochainComplex& a, const CochainComplex& b, const CochainComplex& a2,
                        const CochainComplex& b2, const std::function<SparseMatrix(int)>& f,
                        const std::function<SparseMatrix(int)>& g, int degree) {
  TensorLayout src = tensor_layout(a, b), dst = tensor_layout(a2, b2);
  SparseMatrix m(dst.dims.count(degree) ? dst.dims.at(degree) : 0, src.dims.count(degree) ? src.dims.at(degree) : 0);
  for (const auto& [ij, off] : src.offsets) {
    auto [i, j] = ij;
    if (i + j != degree) continue;
    auto it = dst.offsets.find(ij);
    if (it == dst.offsets.end()) continue;
    SparseMatrix fi = f(i), gj = g(j);
    const std::size_t db = b.dim(j), db2 = b2.dim(j);
    for (std::size_t x2 = 0; x2 < fi.rows(); ++x2)
      for (const auto& [x, fv] : fi.row(x2))
        for (std::size_t y2 = 0; y2 < gj.rows(); ++y2)
          for (const auto& [y, gv] : gj.row(y2)) m.add(it->second + x2 * db2 + y2, off + x * db + y, fv * gv);
  }
  return m;
}

int sign_int(const Rational& q) { return sgn(q); }

RatVector cell_direction(const Stratification& s, std::size_t c) {
  const auto& st = s.stratum(c);
  if (s.ambient_dim() == 1) return {1};
  for (std::size_t k = 0; k < st.signs.size(); ++k)
    if (st.signs[k] == 0) {
      const auto& a = s.hyperplanes()[k].a;
      return {Rational(-a[1]), Rational(a[0])};
    }
  throw LinalgError("edge without a supporting hyperplane");
}

int incidence(const Stratification& s, std::size_t c, std::size_t top) {
  const auto& lo = s.stratum(c);
  const auto& hi = s.stratum(top);
  RatVector out(lo.sample.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lo.sample[i] - hi.sample[i];
  if (lo.dim == 0) {
    RatVector u = hi.dim == s.ambient_dim() && s.ambient_dim() == 1 ? RatVector{1} : cell_direction(s, top);
    return sign_int(dot(out, u));
  }
  RatVector u = cell_direction(s, c);
  return sign_int(out[0] * u[1] - out[1] * u[0]);
}

CompactLayout compact_layout(const PosetSheaf& f, const std::vector<std::size_t>& strata) {
  CompactLayout l;
  const auto& s = f.stratification();
  for (auto c : strata) {
    const auto& st = f.stalk(c);
    for (const auto& [k, d] : st.dims) {
      if (d == 0) continue;
      int deg = static_cast<int>(s.stratum(c).dim) + k;
      l.offsets[{c, k}] = l.dims[deg];
      l.dims[deg] += d;
    }
  }
  return l;
}

CochainComplex compact_complex(const PosetSheaf& f, const std::vector<std::size_t>& strata, const CompactLayout& l) {
  const auto& s = f.stratification();
  std::set<std::size_t> in(strata.begin(), strata.end());
  CochainComplex c;
  c.dims = l.dims;
  std::map<int, SparseMatrix> d;
  for (const auto& [deg, dim] : l.dims) d[deg] = SparseMatrix(c.dim(deg + 1), dim);
  for (const auto& [ck, off] : l.offsets) {
    auto [cell, k] = ck;
    const int cdim = static_cast<int>(s.stratum(cell).dim);
    const int deg = cdim + k;
    auto& m = d[deg];
    const std::int64_t sign = cdim % 2 == 0 ? 1 : -1;
    SparseMatrix inner = f.stalk(cell).differential(k);
    auto it = l.offsets.find({cell, k + 1});
    if (it != l.offsets.end())
      for (std::size_t r = 0; r < inner.rows(); ++r)
        for (const auto& [col, v] : inner.row(r)) m.add(it->second + r, off + col, sign * v);
    for (auto up : s.above(cell)) {
      if (s.stratum(up).dim != s.stratum(cell).dim + 1 || !in.count(up)) continue;
      auto jt = l.offsets.find({up, k});
      if (jt == l.offsets.end()) continue;
      int inc = incidence(s, cell, up);
      SparseMatrix g = f.map(cell, up, k);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (const auto& [col, v] : g.row(r)) m.add(jt->second + r, off + col, inc * v);
    }
  }
  for (auto& [deg, m] : d)
    if (!m.is_zero()) c.d[deg] = std::move(m);
  return c;
}

}  // namespace detail

using namespace detail;

PosetSheaf::PosetSheaf(StratificationPtr strat) : strat_(std::move(strat)), stalks_(strat_->size()) {}

SparseMatrix PosetSheaf::map(std::size_t i, std::size_t j, int k) const {
  const std::size_t rows = stalks_[j].dim(k), cols = stalks_[i].dim(k);
  if (i == j) return SparseMatrix::identity(rows);
  auto it = maps_.find({i, j});
  if (it != maps_.end()) {
    auto jt = it->second.find(k);
    if (jt != it->second.end()) return jt->second;
  }
  return SparseMatrix(rows, cols);
}

void PosetSheaf::set_map(std::size_t i, std::size_t j, int k, SparseMatrix m) {
  if (m.rows() != stalks_[j].dim(k) || m.cols() != stalks_[i].dim(k)) throw LinalgError("generization map has the wrong shape");
  if (m.is_zero()) return;
  maps_[{i, j}][k] = std::move(m);
}

bool PosetSheaf::stalk_is_zero(std::size_t i) const { return stalks_[i].is_zero(); }

bool PosetSheaf::is_zero() const {
  return std::all_of(stalks_.begin(), stalks_.end(), [](const CochainComplex& c) { return c.is_zero(); });
}

std::optional<std::string> PosetSheaf::check() const {
  const auto& s = *strat_;
  for (std::size_t i = 0; i < size(); ++i)
    if (!stalks_[i].squares_to_zero()) return "stalk " + std::to_string(i) + " is not a complex";
  for (std::size_t i = 0; i < size(); ++i) {
    if (stalk_is_zero(i)) continue;
    for (auto j : s.above(i)) {
      for (const auto& [k, d] : stalks_[i].dims) {
        if (d == 0) continue;
        SparseMatrix lhs = stalks_[j].differential(k) * map(i, j, k);
        SparseMatrix rhs = map(i, j, k + 1) * stalks_[i].differential(k);
        if (!(lhs == rhs)) return "generization " + std::to_string(i) + "->" + std::to_string(j) + " is not a chain map";
      }
      for (auto l : s.above(j))
        for (const auto& [k, d] : stalks_[i].dims) {
          if (d == 0) continue;
          if (!(map(j, l, k) * map(i, j, k) == map(i, l, k)))
            return "generizations " + std::to_string(i) + "->" + std::to_string(j) + "->" + std::to_string(l) + " do not compose";
        }
    }
  }
  return std::nullopt;
}

std::map<int, std::size_t> PosetSheaf::stalk_cohomology(std::size_t i) const { return cohomology_dims(stalks_[i]); }

std::size_t PosetSheaf::generization_rank(std::size_t i, std::size_t j, int k) const {
  SparseMatrix f = map(i, j, k);
  if (f.is_zero()) return 0;
  SparseMatrix a = stalks_[i].differential(k);
  SparseMatrix b = stalks_[j].differential(k - 1);
  return exact_rank(block_matrix_rank_helper(f, b, a)) - exact_rank(a) - exact_rank(b);
}

std::pair<int, int> PosetSheaf::degree_range() const {
  int lo = 0, hi = -1;
  bool any = false;
  for (const auto& st : stalks_)
    for (const auto& [k, d] : st.dims)
      if (d > 0) {
        if (!any || k < lo) lo = k;
        if (!any || k > hi) hi = k;
        any = true;
      }
  return {lo, hi};
}

PosetSheaf PosetSheaf::pullback(const StratificationPtr& finer) const {
  auto pi = strat_->coarsening_map(*finer);
  PosetSheaf out(finer);
  for (std::size_t c = 0; c < finer->size(); ++c) out.stalks_[c] = stalks_[pi[c]];
  for (std::size_t c = 0; c < finer->size(); ++c) {
    if (out.stalk_is_zero(c)) continue;
    for (auto u : finer->above(c)) {
      if (pi[c] == pi[u]) {
        for (const auto& [k, d] : out.stalks_[c].dims)
          if (d) out.maps_[{c, u}][k] = SparseMatrix::identity(d);
        continue;
      }
      auto it = maps_.find({pi[c], pi[u]});
      if (it != maps_.end()) out.maps_[{c, u}] = it->second;
    }
  }
  return out;
}

PosetSheaf PosetSheaf::reflected() const {
  PosetSheaf out = *this;
  out.strat_ = std::make_shared<const Stratification>(strat_->reflected());
  return out;
}

PosetSheaf PosetSheaf::shifted(int s) const {
  PosetSheaf out(strat_);
  const std::int64_t sign = s % 2 == 0 ? 1 : -1;
  for (std::size_t i = 0; i < size(); ++i) {
    for (const auto& [k, d] : stalks_[i].dims) out.stalks_[i].dims[k - s] = d;
    for (const auto& [k, m] : stalks_[i].d) out.stalks_[i].d[k - s] = sign == 1 ? m : -m;
  }
  for (const auto& [key, cm] : maps_)
    for (const auto& [k, m] : cm) out.maps_[key][k - s] = m;
  return out;
}

StalkProfile stalk_profile(const PosetSheaf& f) {
  StalkProfile p;
  const auto& s = f.stratification();
  for (std::size_t i = 0; i < f.size(); ++i) p.cohomology.push_back(f.stalk_cohomology(i));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (p.cohomology[i].empty()) continue;
    for (auto j : s.above(i)) {
      std::map<int, std::size_t> r;
      for (const auto& [k, d] : p.cohomology[i]) {
        if (!p.cohomology[j].count(k)) continue;
        auto v = f.generization_rank(i, j, k);
        if (v) r[k] = v;
      }
      if (!r.empty()) p.ranks[{i, j}] = r;
    }
  }
  return p;
}

std::optional<std::string> compare_profiles(const PosetSheaf& a, const PosetSheaf& b) {
  if (a.size() != b.size()) return "different stratifications";
  auto pa = stalk_profile(a), pb = stalk_profile(b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (pa.cohomology[i] != pb.cohomology[i]) return "stalk cohomology differs at stratum " + std::to_string(i);
  if (pa.ranks != pb.ranks) {
    for (const auto& [key, r] : pa.ranks) {
      auto it = pb.ranks.find(key);
      if (it == pb.ranks.end() || it->second != r)
        return "generization rank differs on " + std::to_string(key.first) + "->" + std::to_string(key.second);
    }
    return "generization rank differs";
  }
  return std::nullopt;
}

IndicatorComplex IndicatorComplex::single(const LCPolyhedron& p, int shift) {
  IndicatorComplex c;
  c.dim = p.dim;
  c.terms.push_back({p, -shift});
  return c;
}

std::vector<Hyperplane> IndicatorComplex::hyperplanes() const {
  std::set<Hyperplane> hs;
  for (const auto& t : terms)
    for (auto& h : t.region.hyperplanes()) hs.insert(h);
  return {hs.begin(), hs.end()};
}

IndicatorComplex IndicatorComplex::translated(const RatVector& m) const {
  IndicatorComplex c = *this;
  for (auto& t : c.terms) t.region = t.region.translated(m);
  return c;
}

IndicatorComplex IndicatorComplex::reflected() const {
  IndicatorComplex c = *this;
  for (auto& t : c.terms) t.region = t.region.reflected();
  return c;
}

IndicatorComplex IndicatorComplex::shifted(int s) const {
  IndicatorComplex c = *this;
  for (auto& t : c.terms) t.degree -= s;
  if (s % 2 != 0)
    for (auto& a : c.arrows) a.coefficient = -a.coefficient;
  return c;
}

std::vector<LCPolyhedron> IndicatorComplex::regions() const {
  std::vector<LCPolyhedron> out;
  for (const auto& t : terms) out.push_back(t.region);
  return out;
}

PosetSheaf indicator_sheaf(const LCPolyhedron& p, int shift, const StratificationPtr& strat) {
  return realize(IndicatorComplex::single(p, shift), strat);
}

PosetSheaf realize(const IndicatorComplex& c, const StratificationPtr& strat) {
  const auto& s = *strat;
  for (const auto& t : c.terms)
    if (!s.adapted(t.region)) throw LinalgError("polyhedron is not a union of strata");
  for (const auto& a : c.arrows)
    if (c.terms.at(a.to).degree != c.terms.at(a.from).degree + 1) throw LinalgError("indicator arrow of wrong degree");
  PosetSheaf f(strat);
  // position[i][t]: index of term t inside its degree block at stratum i.
  std::vector<std::map<std::size_t, std::size_t>> position(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CochainComplex st;
    for (std::size_t t = 0; t < c.terms.size(); ++t)
      if (c.terms[t].region.contains(s.stratum(i).sample)) position[i][t] = st.dims[c.terms[t].degree]++;
    for (const auto& a : c.arrows) {
      auto from = position[i].find(a.from), to = position[i].find(a.to);
      if (from == position[i].end() || to == position[i].end() || a.coefficient == 0) continue;
      int k = c.terms[a.from].degree;
      auto it = st.d.find(k);
      if (it == st.d.end()) it = st.d.emplace(k, SparseMatrix(st.dim(k + 1), st.dim(k))).first;
      it->second.add(to->second, from->second, a.coefficient);
    }
    f.set_stalk(i, st);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (position[i].empty()) continue;
    for (auto j : s.above(i)) {
      std::map<int, SparseMatrix> m;
      for (const auto& [t, pos] : position[i]) {
        auto it = position[j].find(t);
        if (it == position[j].end()) continue;
        int k = c.terms[t].degree;
        auto mt = m.find(k);
        if (mt == m.end()) mt = m.emplace(k, SparseMatrix(f.stalk(j).dim(k), f.stalk(i).dim(k))).first;
        mt->second.add(it->second, pos, 1);
      }
      for (auto& [k, mat] : m) f.set_map(i, j, k, std::move(mat));
      for (const auto& [k, d] : f.stalk(i).dims) {
        if (d == 0) continue;
        SparseMatrix lhs = f.stalk(j).differential(k) * f.map(i, j, k);
        SparseMatrix rhs = f.map(i, j, k + 1) * f.stalk(i).differential(k);
        if (!(lhs == rhs)) throw LinalgError("indicator differential is not a morphism of sheaves");
      }
    }
  }
  return f;
}

CochainComplex compact_support_complex(const PosetSheaf& f, const std::vector<std::size_t>& strata) {
  return compact_complex(f, strata, compact_layout(f, strata));
}

PosetSheaf verdier_dual(const PosetSheaf& f) {
  const auto& s = f.stratification();
  PosetSheaf out(f.stratification_ptr());
  std::vector<std::vector<std::size_t>> stars(s.size());
  std::vector<CompactLayout> layouts(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) {
    stars[c].push_back(c);
    for (auto u : s.above(c)) stars[c].push_back(u);
    std::sort(stars[c].begin(), stars[c].end());
    layouts[c] = compact_layout(f, stars[c]);
    CochainComplex cs = compact_complex(f, stars[c], layouts[c]);
    CochainComplex dual;
    for (const auto& [k, d] : cs.dims)
      if (d) dual.dims[-k] = d;
    for (const auto& [k, m] : cs.d) dual.d[-k - 1] = m.transposed();
    out.set_stalk(c, dual);
  }
  for (std::size_t c = 0; c < s.size(); ++c)
    for (auto u : s.above(c)) {
      // Restriction dual to the inclusion C_c(star u) -> C_c(star c).
      std::map<int, SparseMatrix> m;
      for (const auto& [ck, off] : layouts[u].offsets) {
        auto [cell, k] = ck;
        int deg = static_cast<int>(s.stratum(cell).dim) + k;
        auto big = layouts[c].offsets.at(ck);
        auto it = m.find(-deg);
        if (it == m.end()) it = m.emplace(-deg, SparseMatrix(out.stalk(u).dim(-deg), out.stalk(c).dim(-deg))).first;
        for (std::size_t x = 0; x < f.stalk(cell).dim(k); ++x) it->second.add(off + x, big + x, 1);
      }
      for (auto& [k, mat] : m) out.set_map(c, u, k, std::move(mat));
    }
  return out;
}

}  // namespace ccc
