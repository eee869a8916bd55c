#include "ccc/cone.hpp"

#include <algorithm>
#include <set>

namespace ccc {

namespace {

IntMatrix rows_matrix(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<IntVector> matrix_rows(const IntMatrix& m) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row(i));
  return out;
}

// Integer basis of {x : <v, x> = 0 for all v in rows}, in Hermite form.
std::vector<IntVector> orthogonal_basis(const std::vector<IntVector>& rows, std::size_t ambient) {
  auto k = kernel_basis(rows_matrix(rows, ambient));
  if (k.empty()) return {};
  return matrix_rows(hermite_row_basis(rows_matrix(k, ambient)));
}

// Calls f on every k-subset of {0..n-1}.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Rational pairing(const IntVector& a, const RatVector& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

Integer pairing(const IntVector& a, const IntVector& x) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

std::vector<IntVector> saturated_span_basis(const std::vector<IntVector>& generators, std::size_t ambient) {
  std::vector<IntVector> nonzero;
  for (const auto& g : generators)
    if (gcd_of(g) != 0) nonzero.push_back(g);
  if (nonzero.empty()) return {};
  auto perp = orthogonal_basis(nonzero, ambient);
  if (perp.empty()) {
    std::vector<IntVector> id;
    for (std::size_t i = 0; i < ambient; ++i) {
      IntVector e(ambient, 0);
      e[i] = 1;
      id.push_back(e);
    }
    return id;
  }
  return orthogonal_basis(perp, ambient);
}

Cone::Cone(std::size_t ambient, std::vector<IntVector> generators) : ambient_(ambient) {
  for (auto& g : generators) {
    if (g.size() != ambient) throw LinalgError("cone generator has wrong dimension");
    if (gcd_of(g) == 0) continue;
    IntVector p = primitive(g);
    if (std::find(generators_.begin(), generators_.end(), p) == generators_.end()) generators_.push_back(p);
  }
  if (generators_.empty()) {
    for (std::size_t i = 0; i < ambient; ++i) {
      IntVector e(ambient, 0);
      e[i] = 1;
      equations_.push_back(e);
    }
    return;
  }
  equations_ = orthogonal_basis(generators_, ambient);
  std::size_t k = ambient - equations_.size();
  std::set<IntVector> found;
  for_each_subset(generators_.size(), k - 1, [&](const std::vector<std::size_t>& idx) {
    std::vector<IntVector> rows = equations_;
    for (auto i : idx) rows.push_back(generators_[i]);
    RatMatrix m = to_rational(rows_matrix(rows, ambient));
    if (rank(m) != ambient - 1) return;
    auto ns = nullspace(m);
    IntVector a = primitive(ns.front());
    bool pos = false, neg = false;
    for (const auto& g : generators_) {
      Integer s = pairing(a, g);
      if (s > 0) pos = true;
      if (s < 0) neg = true;
    }
    if (pos && neg) return;
    if (neg)
      for (auto& v : a) v = -v;
    found.insert(a);
  });
  inequalities_.assign(found.begin(), found.end());
}

bool Cone::is_strictly_convex() const {
  // Pointed iff the minimal face is {0}; equivalently some functional is positive on every generator.
  if (generators_.empty()) return true;
  ConstraintSystem sys;
  for (const auto& g : generators_) sys.push_back(ge(to_rational(g), 1));
  return fm_feasible(sys, ambient_);
}

bool Cone::contains(const RatVector& x) const {
  for (const auto& e : equations_)
    if (pairing(e, x) != 0) return false;
  for (const auto& a : inequalities_)
    if (pairing(a, x) < 0) return false;
  return true;
}

bool Cone::contains_in_relative_interior(const RatVector& x) const {
  if (!contains(x)) return false;
  for (const auto& a : inequalities_)
    if (pairing(a, x) == 0) return false;
  return true;
}

RatVector Cone::interior_point() const {
  RatVector p(ambient_, 0);
  for (const auto& g : generators_)
    for (std::size_t i = 0; i < ambient_; ++i) p[i] += g[i];
  return p;
}

ConstraintSystem Cone::constraints(bool relative_interior) const {
  ConstraintSystem sys;
  for (const auto& e : equations_) sys.push_back(eq(to_rational(e), 0));
  for (const auto& a : inequalities_)
    sys.push_back(relative_interior ? gt(to_rational(a), 0) : ge(to_rational(a), 0));
  return sys;
}

std::vector<std::size_t> Cone::generators_on(const IntVector& normal) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (pairing(normal, generators_[i]) == 0) out.push_back(i);
  return out;
}

std::vector<std::vector<std::size_t>> Cone::faces() const {
  std::vector<std::size_t> all(generators_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::set<std::vector<std::size_t>> seen{all};
  std::vector<std::vector<std::size_t>> queue{all};
  while (!queue.empty()) {
    auto f = queue.back();
    queue.pop_back();
    for (const auto& a : inequalities_) {
      std::vector<std::size_t> g;
      for (auto i : f)
        if (pairing(a, generators_[i]) == 0) g.push_back(i);
      if (seen.insert(g).second) queue.push_back(g);
    }
  }
  std::vector<std::vector<std::size_t>> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

bool Cone::same_set(const Cone& other) const {
  if (ambient_ != other.ambient_) return false;
  for (const auto& g : other.generators_)
    if (!contains(to_rational(g))) return false;
  for (const auto& g : generators_)
    if (!other.contains(to_rational(g))) return false;
  return true;
}

Cone dual_cone(const Cone& c) {
  std::vector<IntVector> gens = c.inequalities();
  for (const auto& e : c.equations()) {
    gens.push_back(e);
    IntVector m = e;
    for (auto& v : m) v = -v;
    gens.push_back(m);
  }
  return Cone(c.ambient_dim(), gens);
}

}  // namespace ccc
