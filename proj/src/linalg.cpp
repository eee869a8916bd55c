#include "ccc/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace ccc {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

RatVector to_rational(const IntVector& v) {
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i]);
  return r;
}

namespace {

// Elementary operations applied to A together with the transforms so that
// U * A0 * V = A is maintained throughout.
struct SmithState {
  IntMatrix A, U, U_inv, V, V_inv;

  void row_add(std::size_t i, std::size_t j, const Integer& q) {  // row_i += q row_j
    if (q == 0) return;
    for (std::size_t c = 0; c < A.cols(); ++c) A(i, c) += q * A(j, c);
    for (std::size_t c = 0; c < U.cols(); ++c) U(i, c) += q * U(j, c);
    for (std::size_t r = 0; r < U_inv.rows(); ++r) U_inv(r, j) -= q * U_inv(r, i);
  }
  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < A.cols(); ++c) std::swap(A(i, c), A(j, c));
    for (std::size_t c = 0; c < U.cols(); ++c) std::swap(U(i, c), U(j, c));
    for (std::size_t r = 0; r < U_inv.rows(); ++r) std::swap(U_inv(r, i), U_inv(r, j));
  }
  void row_negate(std::size_t i) {
    for (std::size_t c = 0; c < A.cols(); ++c) A(i, c) = -A(i, c);
    for (std::size_t c = 0; c < U.cols(); ++c) U(i, c) = -U(i, c);
    for (std::size_t r = 0; r < U_inv.rows(); ++r) U_inv(r, i) = -U_inv(r, i);
  }
  void col_add(std::size_t i, std::size_t j, const Integer& q) {  // col_i += q col_j
    if (q == 0) return;
    for (std::size_t r = 0; r < A.rows(); ++r) A(r, i) += q * A(r, j);
    for (std::size_t r = 0; r < V.rows(); ++r) V(r, i) += q * V(r, j);
    for (std::size_t c = 0; c < V_inv.cols(); ++c) V_inv(j, c) -= q * V_inv(i, c);
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < A.rows(); ++r) std::swap(A(r, i), A(r, j));
    for (std::size_t r = 0; r < V.rows(); ++r) std::swap(V(r, i), V(r, j));
    for (std::size_t c = 0; c < V_inv.cols(); ++c) std::swap(V_inv(i, c), V_inv(j, c));
  }
};

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithState s{a, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n),
               IntMatrix::identity(n)};
  const std::size_t k = std::min(m, n);
  std::size_t t = 0;
  for (; t < k; ++t) {
    while (true) {
      // pivot: smallest nonzero absolute value in the trailing block
      bool found = false;
      std::size_t pi = t, pj = t;
      Integer best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (s.A(i, j) != 0 && (!found || abs(s.A(i, j)) < best)) {
            found = true;
            best = abs(s.A(i, j));
            pi = i;
            pj = j;
          }
      if (!found) goto done;
      s.row_swap(t, pi);
      s.col_swap(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s.A(i, t) == 0) continue;
        s.row_add(i, t, -floor_div(s.A(i, t), s.A(t, t)));
        if (s.A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s.A(t, j) == 0) continue;
        s.col_add(j, t, -floor_div(s.A(t, j), s.A(t, t)));
        if (s.A(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the trailing block by the pivot
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (s.A(i, j) % s.A(t, t) != 0) {
            s.row_add(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (s.A(t, t) < 0) s.row_negate(t);
  }
done:
  SmithDecomposition out;
  out.U = std::move(s.U);
  out.U_inv = std::move(s.U_inv);
  out.V = std::move(s.V);
  out.V_inv = std::move(s.V_inv);
  for (std::size_t i = 0; i < k; ++i)
    if (s.A(i, i) != 0) out.invariant_factors.push_back(s.A(i, i));
  out.D = std::move(s.A);
  return out;
}

IntMatrix hermite_row_basis(const IntMatrix& generators) {
  IntMatrix h = generators;
  const std::size_t m = h.rows(), n = h.cols();
  std::size_t r = 0;
  auto add_row = [&](std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t c = 0; c < n; ++c) h(i, c) += q * h(j, c);
  };
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) std::swap(h(i, c), h(j, c));
  };
  for (std::size_t c = 0; c < n && r < m; ++c) {
    while (true) {
      std::size_t piv = m;
      for (std::size_t i = r; i < m; ++i)
        if (h(i, c) != 0 && (piv == m || abs(h(i, c)) < abs(h(piv, c)))) piv = i;
      if (piv == m) break;
      swap_rows(r, piv);
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        add_row(i, r, -floor_div(h(i, c), h(r, c)));
        if (h(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (r < m && h(r, c) != 0) {
      if (h(r, c) < 0)
        for (std::size_t j = 0; j < n; ++j) h(r, j) = -h(r, j);
      for (std::size_t i = 0; i < r; ++i) add_row(i, r, -floor_div(h(i, c), h(r, c)));
      ++r;
    }
  }
  IntMatrix out(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = h(i, j);
  return out;
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw LinalgError("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  RatMatrix r = to_rational(a);
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (r(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(r(c, j), r(piv, j));
      det = -det;
    }
    det *= r(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (r(i, c) == 0) continue;
      Rational f = r(i, c) / r(c, c);
      for (std::size_t j = c; j < n; ++j) r(i, j) -= f * r(c, j);
    }
  }
  return det.get_num();
}

std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  const SmithDecomposition snf = smith_normal_form(a);
  std::vector<IntVector> basis;
  for (std::size_t j = snf.rank(); j < a.cols(); ++j) basis.push_back(snf.V.col(j));
  return basis;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<Integer> factors) {
  for (auto& f : factors) {
    if (f < 0) f = -f;
    if (f == 0) throw LinalgError("finite abelian group with a free factor");
    if (f >= 2) factors_.push_back(f);
  }
}

Integer FiniteAbelianGroup::order() const {
  Integer o = 1;
  for (const auto& f : factors_) o *= f;
  return o;
}

IntVector FiniteAbelianGroup::reduce(IntVector element) const {
  if (element.size() != factors_.size()) throw LinalgError("group element has wrong length");
  for (std::size_t i = 0; i < element.size(); ++i) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), element[i].get_mpz_t(), factors_[i].get_mpz_t());
    element[i] = r;
  }
  return element;
}

std::vector<IntVector> FiniteAbelianGroup::elements() const {
  std::vector<IntVector> out{IntVector(factors_.size(), Integer(0))};
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::vector<IntVector> next;
    for (const auto& e : out)
      for (Integer v = 0; v < factors_[i]; ++v) {
        IntVector x = e;
        x[i] = v;
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string FiniteAbelianGroup::to_string() const {
  if (factors_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? " x " : "") << "Z/" << factors_[i];
  return os.str();
}

Cokernel cokernel(const IntMatrix& a) {
  const SmithDecomposition snf = smith_normal_form(a);
  Cokernel c;
  c.torsion = FiniteAbelianGroup(snf.invariant_factors);
  c.free_rank = a.rows() - snf.rank();
  return c;
}

RatVector RationalLattice::basis_vector(std::size_t i) const {
  RatVector v(ambient_dim());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = Rational(numerators(i, j), denominator);
    v[j].canonicalize();
  }
  return v;
}

bool RationalLattice::contains(const RatVector& x) const {
  // x in lattice iff denominator * x is an integer combination of the numerator rows
  RatMatrix bt = to_rational(numerators.transposed());
  RatVector scaled(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) scaled[j] = x[j] * denominator;
  RatVector coeffs;
  if (!solve(bt, scaled, coeffs)) return false;
  if (ccc::rank(bt) != numerators.rows()) throw LinalgError("lattice basis is not independent");
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& q) { return q.get_den() == 1; });
}

Integer RationalLattice::index_over_integers() const {
  if (rank() != ambient_dim()) throw LinalgError("index of a non-full-rank lattice");
  Integer det = abs(determinant(numerators));
  Integer dn = 1;
  for (std::size_t i = 0; i < rank(); ++i) dn *= denominator;
  Rational covol(det, dn);
  covol.canonicalize();
  Rational idx = 1 / covol;
  if (idx.get_den() != 1) throw LinalgError("lattice does not contain Z^n");
  return idx.get_num();
}

RationalLattice lattice_from_generators(const std::vector<RatVector>& generators, std::size_t dim) {
  Integer den = 1;
  for (const auto& g : generators) {
    if (g.size() != dim) throw LinalgError("generator has wrong dimension");
    for (const auto& q : g) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  }
  IntMatrix gens(generators.size(), dim);
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Rational s = generators[i][j] * den;
      gens(i, j) = s.get_num();
    }
  RationalLattice lat;
  lat.numerators = hermite_row_basis(gens);
  // shrink the common denominator
  Integer g = den;
  for (std::size_t i = 0; i < lat.numerators.rows(); ++i)
    for (std::size_t j = 0; j < dim; ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), lat.numerators(i, j).get_mpz_t());
  if (g == 0) g = 1;
  lat.denominator = den / g;
  for (std::size_t i = 0; i < lat.numerators.rows(); ++i)
    for (std::size_t j = 0; j < dim; ++j) lat.numerators(i, j) /= g;
  return lat;
}

RationalLattice preimage_lattice(const IntMatrix& a, const IntMatrix& sublattice_rows) {
  const std::size_t m = a.rows(), n = a.cols();
  if (sublattice_rows.cols() != m) throw LinalgError("sublattice lives in the wrong ambient space");
  const RatMatrix aq = to_rational(a);
  if (rank(aq) != n) throw LinalgError("preimage is not a full-rank lattice: map is not injective");
  // y in Z^k with S^T y in image(A): left-nullspace functionals must vanish on S^T y.
  const IntMatrix st = sublattice_rows.transposed();  // m x k, columns are sublattice generators
  const std::vector<RatVector> left_null = nullspace(aq.transposed());
  IntMatrix constraint(left_null.size(), st.cols());
  for (std::size_t r = 0; r < left_null.size(); ++r) {
    IntVector c = primitive(left_null[r]);
    for (std::size_t j = 0; j < st.cols(); ++j) {
      Integer s = 0;
      for (std::size_t i = 0; i < m; ++i) s += c[i] * st(i, j);
      constraint(r, j) = s;
    }
  }
  std::vector<IntVector> ys;
  if (left_null.empty()) {
    for (std::size_t j = 0; j < st.cols(); ++j) {
      IntVector e(st.cols(), Integer(0));
      e[j] = 1;
      ys.push_back(e);
    }
  } else {
    ys = kernel_basis(constraint);
  }
  std::vector<RatVector> gens;
  for (const auto& y : ys) {
    RatVector target(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < st.cols(); ++j) target[i] += Rational(st(i, j) * y[j]);
    RatVector x;
    if (!solve(aq, target, x)) throw LinalgError("internal: preimage solve failed");
    gens.push_back(x);
  }
  RationalLattice lat = lattice_from_generators(gens, n);
  if (lat.rank() != n) throw LinalgError("preimage is not a full-rank lattice");
  return lat;
}

std::vector<std::size_t> rref(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = a.rows();
    for (std::size_t i = r; i < a.rows(); ++i)
      if (a(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(piv, j));
    Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(const RatMatrix& a) {
  RatMatrix c = a;
  return rref(c).size();
}

std::vector<RatVector> nullspace(const RatMatrix& a) {
  RatMatrix r = a;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(a.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool solve(const RatMatrix& a, const RatVector& b, RatVector& x) {
  if (b.size() != a.rows()) throw LinalgError("solve: dimension mismatch");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return false;
  x.assign(a.cols(), Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, a.cols());
  return true;
}

Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw LinalgError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer gcd_of(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

IntVector primitive(const IntVector& v) {
  Integer g = gcd_of(v);
  if (g == 0) return v;
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

IntVector primitive(const RatVector& v) {
  Integer den = 1;
  for (const auto& q : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * den;
    out[i] = s.get_num();
  }
  return primitive(out);
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const RatVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

std::string to_string(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

}  // namespace ccc
