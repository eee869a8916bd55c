#include "ccc/coherent.hpp"

#include <algorithm>

namespace ccc {

namespace {

Rational frac(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - f;
}

RatVector cone_dual_point_shift(const RatVector& a, const RatVector& b) {
  RatVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = frac(b[i] - a[i]);
  return d;
}

// Least-norm solution of A x = b for A with independent rows.
RatVector least_norm_solution(const std::vector<IntVector>& rows, const RatVector& b, std::size_t n) {
  const std::size_t k = rows.size();
  if (k == 0) return RatVector(n, 0);
  RatMatrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = Rational(pairing(rows[i], rows[j]));
  RatVector y;
  if (!solve(gram, b, y)) throw LinalgError("chart shift equations are inconsistent");
  RatVector x(n, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < n; ++c) x[c] += y[i] * rows[i][c];
  return x;
}

}  // namespace

GenObject make_generator(const StackyFan& sf, std::size_t cone, std::size_t coset) {
  auto data = compute_M_sigma_beta(sf, cone);
  if (coset >= data.coset_count()) throw LinalgError("coset index out of range");
  return GenObject{cone, coset, data.representatives[coset]};
}

std::vector<GenObject> all_generators(const StackyFan& sf) {
  std::vector<GenObject> out;
  for (std::size_t s = 0; s < sf.sigma.size(); ++s) {
    auto data = compute_M_sigma_beta(sf, s);
    for (std::size_t c = 0; c < data.coset_count(); ++c) out.push_back(GenObject{s, c, data.representatives[c]});
  }
  return out;
}

GradedHom hom_basis(const StackyFan& sf, const GenObject& a, const GenObject& b, const Box& window) {
  GradedHom h{a, b, window, {}, 0};
  if (!sf.sigma.is_face(b.cone, a.cone)) return h;
  Cone tau_dual = dual_cone(sf.sigma.cone(b.cone));
  AffineLattice coset = AffineLattice::integral(sf.n_rank, cone_dual_point_shift(a.chi, b.chi));
  h.basis = lattice_points(tau_dual.constraints(), coset, window);
  return h;
}

HomElement compose(const StackyFan& sf, const HomElement& f, const HomElement& g) {
  if (!(f.target == g.source)) throw LinalgError("incomposable morphisms: target and source differ");
  if (!sf.sigma.is_face(g.target.cone, f.source.cone)) throw LinalgError("incomposable morphisms: cones are not nested");
  HomElement h{f.source, g.target, f.label};
  for (std::size_t i = 0; i < h.label.size(); ++i) h.label[i] += g.label[i];
  if (!dual_cone(sf.sigma.cone(g.target.cone)).contains(h.label)) throw LinalgError("composite label leaves the dual cone");
  return h;
}

GenObject restrict_generator(const StackyFan& sf, const GenObject& a, std::size_t tau) {
  if (!sf.sigma.is_face(tau, a.cone)) throw LinalgError("restriction target is not a face");
  auto data = compute_M_sigma_beta(sf, tau);
  std::size_t idx = data.coset_index(a.chi);
  return GenObject{tau, idx, data.representatives[idx]};
}

int face_sign(const std::vector<std::size_t>& sigma, const std::vector<std::size_t>& tau) {
  if (tau.size() + 1 != sigma.size()) throw LinalgError("face_sign needs a codimension-one face");
  for (std::size_t k = 0; k < sigma.size(); ++k)
    if (std::find(tau.begin(), tau.end(), sigma[k]) == tau.end()) return k % 2 == 0 ? 1 : -1;
  throw LinalgError("face_sign: tau is not a face of sigma");
}

CechComplex cech_structure_complex(const StackyFan& sf) {
  if (!sf.sigma.is_simplicial()) throw LinalgError("the Cech complex needs a simplicial fan");
  CechComplex c;
  c.n = sf.n_rank;
  std::vector<std::vector<std::size_t>> cones_by_level;
  for (std::size_t i = 0; i <= c.n; ++i) {
    auto cones = sf.sigma.cones_of_dim(c.n - i);
    cones_by_level.push_back(cones);
    std::vector<GenObject> gens;
    for (auto s : cones) gens.push_back(make_generator(sf, s, 0));
    c.terms.push_back(gens);
  }
  for (std::size_t i = 0; i < c.n; ++i) {
    const auto& from = cones_by_level[i];
    const auto& to = cones_by_level[i + 1];
    SparseMatrix d(to.size(), from.size());
    for (std::size_t a = 0; a < from.size(); ++a)
      for (std::size_t b = 0; b < to.size(); ++b)
        if (sf.sigma.is_face(to[b], from[a])) d.add(b, a, face_sign(sf.sigma.cones()[from[a]], sf.sigma.cones()[to[b]]));
    c.differential.push_back(d);
  }
  return c;
}

bool CechComplex::squares_to_zero() const {
  for (std::size_t i = 0; i + 1 < differential.size(); ++i)
    if (!(differential[i + 1] * differential[i]).is_zero()) return false;
  return true;
}

CochainComplex CechComplex::strand(const StackyFan& sf, const RatVector& m) const {
  CochainComplex out;
  std::vector<std::vector<std::size_t>> present(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t k = 0; k < terms[i].size(); ++k)
      if (dual_cone(sf.sigma.cone(terms[i][k].cone)).contains(m)) present[i].push_back(k);
    out.dims[static_cast<int>(i)] = present[i].size();
  }
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    SparseMatrix d(present[i + 1].size(), present[i].size());
    for (std::size_t a = 0; a < present[i].size(); ++a)
      for (std::size_t b = 0; b < present[i + 1].size(); ++b) d.add(b, a, differential[i].at(present[i + 1][b], present[i][a]));
    out.d[static_cast<int>(i)] = d;
  }
  return out;
}

DivisorData DivisorData::multiple_of(const StackyFan& sf, std::size_t ray, long d) {
  DivisorData D;
  D.coefficients.assign(sf.sigma_hat.rays().size(), 0);
  D.coefficients.at(ray) = d;
  return D;
}

DivisorData DivisorData::uniform(const StackyFan& sf, long d) {
  DivisorData D;
  D.coefficients.assign(sf.sigma_hat.rays().size(), d);
  return D;
}

ConstraintSystem DivisorData::chart_polyhedron(const StackyFan& sf, std::size_t sigma) const {
  ConstraintSystem sys;
  for (auto r : sf.sigma.cones()[sigma]) {
    IntVector u = sf.apply_beta(sf.sigma_hat.rays()[r]);
    sys.push_back(ge(to_rational(u), -Rational(coefficients.at(r))));
  }
  return sys;
}

RatVector DivisorData::chart_shift(const StackyFan& sf, std::size_t sigma) const {
  std::vector<IntVector> rows;
  RatVector b;
  for (auto r : sf.sigma.cones()[sigma]) {
    rows.push_back(sf.apply_beta(sf.sigma_hat.rays()[r]));
    b.push_back(-Rational(coefficients.at(r)));
  }
  return least_norm_solution(rows, b, sf.n_rank);
}

std::map<RatVector, std::map<int, std::size_t>> line_bundle_cohomology(const StackyFan& sf, const DivisorData& d, const Box& window) {
  auto maximal = sf.sigma.maximal_cones();
  const std::size_t k = maximal.size();
  // Index sets i_0 < ... < i_p of maximal cones and their intersection cones.
  std::vector<std::vector<std::vector<std::size_t>>> subsets(k);
  std::vector<std::vector<std::size_t>> intersection_cone(k);
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) idx.push_back(i);
    subsets[idx.size() - 1].push_back(idx);
  }
  auto cone_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> rays = sf.sigma.cones()[maximal[idx[0]]];
    for (std::size_t t = 1; t < idx.size(); ++t) {
      std::vector<std::size_t> next;
      const auto& other = sf.sigma.cones()[maximal[idx[t]]];
      std::set_intersection(rays.begin(), rays.end(), other.begin(), other.end(), std::back_inserter(next));
      rays = next;
    }
    return *sf.sigma.index_of(rays);
  };
  std::vector<std::vector<ConstraintSystem>> charts(k);
  for (std::size_t p = 0; p < k; ++p)
    for (const auto& idx : subsets[p]) charts[p].push_back(d.chart_polyhedron(sf, cone_of(idx)));

  std::map<RatVector, std::map<int, std::size_t>> out;
  for (const auto& m : lattice_points({}, AffineLattice::integral(sf.n_rank), window)) {
    CochainComplex c;
    std::vector<std::vector<std::size_t>> present(k);
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t s = 0; s < subsets[p].size(); ++s)
        if (satisfies_all(charts[p][s], m)) present[p].push_back(s);
      c.dims[static_cast<int>(p)] = present[p].size();
    }
    for (std::size_t p = 0; p + 1 < k; ++p) {
      SparseMatrix dm(present[p + 1].size(), present[p].size());
      for (std::size_t b = 0; b < present[p + 1].size(); ++b) {
        const auto& big = subsets[p + 1][present[p + 1][b]];
        for (std::size_t drop = 0; drop < big.size(); ++drop) {
          std::vector<std::size_t> small = big;
          small.erase(small.begin() + static_cast<std::ptrdiff_t>(drop));
          auto it = std::find(subsets[p].begin(), subsets[p].end(), small);
          std::size_t s = static_cast<std::size_t>(it - subsets[p].begin());
          auto pos = std::find(present[p].begin(), present[p].end(), s);
          if (pos == present[p].end()) continue;
          dm.add(b, static_cast<std::size_t>(pos - present[p].begin()), drop % 2 == 0 ? 1 : -1);
        }
      }
      c.d[static_cast<int>(p)] = dm;
    }
    auto h = cohomology_dims(c);
    if (!h.empty()) out[m] = h;
  }
  return out;
}

std::map<int, std::size_t> total_cohomology(const std::map<RatVector, std::map<int, std::size_t>>& per_degree) {
  std::map<int, std::size_t> t;
  for (const auto& [m, h] : per_degree)
    for (const auto& [i, v] : h) t[i] += v;
  return t;
}

}  // namespace ccc
