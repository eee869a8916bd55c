#include "ccc/semigroups.hpp"

#include <algorithm>
#include <set>

namespace ccc {

namespace {

Integer ceil_q(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

RatVector sub(const RatVector& a, const RatVector& b) {
  RatVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

// Recession cone of a constraint system is contained in the closed cone c.
bool recession_inside(const ConstraintSystem& piece, const Cone& c, std::size_t n) {
  ConstraintSystem hom;
  for (const auto& row : piece) hom.push_back(row.rel == Relation::EQ ? eq(row.a, 0) : ge(row.a, 0));
  for (const auto& u : c.inequalities()) {
    auto sys = hom;
    RatVector neg = to_rational(u);
    for (auto& q : neg) q = -q;
    sys.push_back(gt(neg, 0));
    if (fm_feasible(sys, n)) return false;
  }
  for (const auto& e : c.equations()) {
    for (int sign : {1, -1}) {
      auto sys = hom;
      RatVector v = to_rational(e);
      for (auto& q : v) q *= sign;
      sys.push_back(gt(v, 0));
      if (fm_feasible(sys, n)) return false;
    }
  }
  return true;
}

}  // namespace

AffineLattice::AffineLattice(RationalLattice lattice, RatVector shift) : lattice_(std::move(lattice)), shift_(std::move(shift)) {
  const std::size_t n = lattice_.ambient_dim();
  if (lattice_.rank() != n) throw LinalgError("affine lattice needs a full-rank lattice");
  if (shift_.empty()) shift_.assign(n, 0);
  standard_ = lattice_.denominator == 1 && hermite_row_basis(lattice_.numerators) == IntMatrix::identity(n);
  if (!standard_) {
    // Coefficients c with x = c * B solve B^T c = x; precompute (B^T)^{-1}.
    RatMatrix bt(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) bt(j, i) = Rational(lattice_.numerators(i, j)) / lattice_.denominator;
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) aug(i, j) = bt(i, j);
      aug(i, n + i) = 1;
    }
    rref(aug);
    inverse_ = RatMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inverse_(i, j) = aug(i, n + j);
  }
}

AffineLattice AffineLattice::integral(std::size_t n, RatVector shift) {
  RationalLattice l;
  l.numerators = IntMatrix::identity(n);
  l.denominator = 1;
  return AffineLattice(l, std::move(shift));
}

bool AffineLattice::contains(const RatVector& x) const {
  RatVector y = sub(x, shift_);
  if (standard_) return std::all_of(y.begin(), y.end(), [](const Rational& q) { return q.get_den() == 1; });
  RatVector c = inverse_ * y;
  return std::all_of(c.begin(), c.end(), [](const Rational& q) { return q.get_den() == 1; });
}

RatVector AffineLattice::primitive_on_ray(const IntVector& v) const {
  RatVector x = to_rational(v);
  RatVector c = standard_ ? x : inverse_ * x;
  IntVector p = primitive(c);
  // Rescale v by the ratio between p and c.
  Rational t = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) {
      t = Rational(p[i]) / c[i];
      break;
    }
  for (auto& q : x) q *= t;
  return x;
}

Box Box::cube(std::size_t n, const Rational& radius) { return Box{RatVector(n, -radius), RatVector(n, radius)}; }

bool Box::contains(const RatVector& x) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Box Box::scaled(const Rational& f) const {
  Box b = *this;
  for (auto& q : b.lo) q *= f;
  for (auto& q : b.hi) q *= f;
  return b;
}

std::vector<RatVector> lattice_points(const ConstraintSystem& polyhedron, const AffineLattice& lattice, const Box& box) {
  const std::size_t n = lattice.dim();
  const Integer& den = lattice.lattice().denominator;
  std::vector<Integer> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = ceil_q((box.lo[i] - lattice.shift()[i]) * den);
    hi[i] = floor_q((box.hi[i] - lattice.shift()[i]) * den);
    if (lo[i] > hi[i]) return {};
  }
  std::vector<RatVector> out;
  std::vector<Integer> k = lo;
  while (true) {
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lattice.shift()[i] + Rational(k[i]) / den;
    for (auto& q : x) q.canonicalize();
    if (satisfies_all(polyhedron, x) && lattice.contains(x)) out.push_back(x);
    std::size_t i = n;
    while (i > 0 && k[i - 1] == hi[i - 1]) {
      k[i - 1] = lo[i - 1];
      --i;
    }
    if (i == 0) break;
    ++k[i - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

AffineSemigroup hilbert_basis(const Cone& cone, const AffineLattice& lattice) {
  if (!cone.is_strictly_convex()) throw LinalgError("hilbert_basis requires a strictly convex cone");
  const std::size_t n = cone.ambient_dim();
  AffineLattice lat(lattice.lattice());
  AffineSemigroup s{cone, lat, {}};
  if (cone.generators().empty()) return s;
  // Candidates: lattice points of the cone inside the bounding box of the zonotope
  // spanned by the primitive lattice vectors on the generators.
  std::vector<RatVector> rays;
  for (const auto& g : cone.generators()) rays.push_back(lat.primitive_on_ray(g));
  Box box{RatVector(n, 0), RatVector(n, 0)};
  for (const auto& r : rays)
    for (std::size_t i = 0; i < n; ++i) (r[i] > 0 ? box.hi[i] : box.lo[i]) += r[i];
  ConstraintSystem in_cone = cone.constraints();
  auto candidates = lattice_points(in_cone, lat, box);
  std::vector<RatVector> nonzero;
  for (const auto& c : candidates)
    if (!is_zero(c)) nonzero.push_back(c);
  for (const auto& x : nonzero) {
    bool reducible = false;
    for (const auto& y : nonzero) {
      if (y == x) continue;
      RatVector r = sub(x, y);
      if (!is_zero(r) && s.contains(r)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) s.hilbert_basis.push_back(x);
  }
  std::sort(s.hilbert_basis.begin(), s.hilbert_basis.end());
  return s;
}

bool SemigroupModule::region_contains(const RatVector& x) const {
  return std::any_of(region.begin(), region.end(), [&](const ConstraintSystem& p) { return satisfies_all(p, x); });
}

SemigroupModule module_generators(const std::vector<ConstraintSystem>& region, const AffineSemigroup& s, const Box& box) {
  const std::size_t n = s.cone.ambient_dim();
  for (const auto& piece : region) {
    if (!fm_feasible(piece, n)) continue;
    if (!recession_inside(piece, s.cone, n))
      throw LinalgError("region is not finitely generated over the semigroup: recession cone exceeds the semigroup cone");
  }
  SemigroupModule m;
  m.region = region;
  std::set<RatVector> points;
  for (const auto& piece : region)
    for (auto& p : lattice_points(piece, s.lattice, box)) points.insert(p);
  for (const auto& x : points) {
    bool generated = false;
    for (const auto& h : s.hilbert_basis) {
      RatVector y = sub(x, h);
      if (m.region_contains(y) && s.lattice.contains(y)) {
        generated = true;
        break;
      }
    }
    if (!generated) m.generators.push_back(x);
  }
  return m;
}

ConstraintSystem translated_cone(const Cone& c, const RatVector& shift, bool open) {
  ConstraintSystem sys;
  for (const auto& e : c.equations()) {
    RatVector a = to_rational(e);
    sys.push_back(eq(a, dot(a, shift)));
  }
  for (const auto& u : c.inequalities()) {
    RatVector a = to_rational(u);
    sys.push_back(open ? gt(a, dot(a, shift)) : ge(a, dot(a, shift)));
  }
  return sys;
}

std::vector<Syzygy> module_resolution_step(const SemigroupModule& m, const AffineSemigroup& s, const Box& box) {
  std::vector<Syzygy> out;
  for (std::size_t i = 0; i < m.generators.size(); ++i)
    for (std::size_t j = i + 1; j < m.generators.size(); ++j) {
      ConstraintSystem piece = translated_cone(s.cone, m.generators[i]);
      auto other = translated_cone(s.cone, m.generators[j]);
      piece.insert(piece.end(), other.begin(), other.end());
      out.push_back({i, j, module_generators({piece}, s, box)});
    }
  return out;
}

Resolution resolve(const SemigroupModule& m, const AffineSemigroup& s, const Box& box, std::size_t depth) {
  Resolution r;
  std::vector<SemigroupModule> current{m};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<SemigroupModule> next;
    for (const auto& mod : current)
      for (auto& syz : module_resolution_step(mod, s, box))
        if (!syz.module.generators.empty()) next.push_back(std::move(syz.module));
    r.levels.push_back(current);
    if (next.empty()) return r;
    current = std::move(next);
  }
  r.truncated = true;
  r.levels.push_back(current);
  return r;
}

}  // namespace ccc
