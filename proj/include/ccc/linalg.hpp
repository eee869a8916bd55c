#pragma once

// Exact integer and rational linear algebra: dense matrices over Z and Q,
// Smith and Hermite normal forms, integer kernels, cokernels, finite abelian
// groups and rational lattices.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccc {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw LinalgError("ragged matrix initializer");
      for (long v : row) data_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw LinalgError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  [[nodiscard]] std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }
  [[nodiscard]] Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw LinalgError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
    if (a.cols_ != x.size()) throw LinalgError("matrix-vector dimension mismatch");
    std::vector<T> y(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);
RatVector to_rational(const IntVector& v);

/// U * A * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ... .
struct SmithDecomposition {
  IntMatrix U, D, V;
  IntMatrix U_inv, V_inv;
  /// Nonzero diagonal entries of D, all positive, in divisibility order.
  std::vector<Integer> invariant_factors;
  [[nodiscard]] std::size_t rank() const { return invariant_factors.size(); }
};

SmithDecomposition smith_normal_form(const IntMatrix& a);

/// Row-style Hermite normal form of the row lattice; zero rows dropped.
IntMatrix hermite_row_basis(const IntMatrix& generators);

Integer determinant(const IntMatrix& a);

/// Basis of the saturated lattice {x in Z^n : A x = 0}.
std::vector<IntVector> kernel_basis(const IntMatrix& a);

/// Product of cyclic groups Z/d_1 x ... x Z/d_k with every d_i >= 2.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<Integer> factors);

  [[nodiscard]] const std::vector<Integer>& factors() const { return factors_; }
  [[nodiscard]] Integer order() const;
  [[nodiscard]] bool is_trivial() const { return factors_.empty(); }
  [[nodiscard]] IntVector reduce(IntVector element) const;
  /// All elements in lexicographic order of residues.
  [[nodiscard]] std::vector<IntVector> elements() const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const FiniteAbelianGroup&, const FiniteAbelianGroup&) = default;

 private:
  std::vector<Integer> factors_;
};

struct Cokernel {
  FiniteAbelianGroup torsion;
  std::size_t free_rank = 0;
};

Cokernel cokernel(const IntMatrix& a);

/// A full-rank lattice in a rational vector space: the rows of
/// numerators / denominator form a basis.
struct RationalLattice {
  IntMatrix numerators;
  Integer denominator = 1;

  [[nodiscard]] std::size_t rank() const { return numerators.rows(); }
  [[nodiscard]] std::size_t ambient_dim() const { return numerators.cols(); }
  [[nodiscard]] RatVector basis_vector(std::size_t i) const;
  [[nodiscard]] bool contains(const RatVector& x) const;
  /// Index [this : Z^n] as a superlattice of the standard lattice (requires Z^n subset).
  [[nodiscard]] Integer index_over_integers() const;
};

RationalLattice lattice_from_generators(const std::vector<RatVector>& generators, std::size_t dim);

/// {x in Q^n : A x in span_Z(sublattice rows)}. Throws LinalgError when the
/// preimage is not a full-rank lattice of Q^n.
RationalLattice preimage_lattice(const IntMatrix& a, const IntMatrix& sublattice_rows);

// Rational helpers.
std::size_t rank(const RatMatrix& a);
/// Basis of {x in Q^n : A x = 0}.
std::vector<RatVector> nullspace(const RatMatrix& a);
/// Reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& a);
/// Some solution of A x = b, or empty optional-like (returns false).
bool solve(const RatMatrix& a, const RatVector& b, RatVector& x);
Rational dot(const RatVector& a, const RatVector& b);
Integer gcd_of(const IntVector& v);
IntVector primitive(const IntVector& v);
/// Scale a rational vector to the primitive integer vector on the same ray.
IntVector primitive(const RatVector& v);

std::string to_string(const Rational& q);
std::string to_string(const RatVector& v);
std::string to_string(const IntVector& v);

}  // namespace ccc
