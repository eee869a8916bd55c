#pragma once

// Sparse integer cochain complexes and exact cohomology dimensions.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace ccc {

/// Row-major sparse matrix with machine-integer entries; every map produced by
/// the sheaf engine is integral with small coefficients. Arithmetic overflow
/// throws instead of wrapping.
class SparseMatrix {
 public:
  using Entry = std::pair<std::uint32_t, std::int64_t>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  /// Accumulates into (i, j).
  void add(std::size_t i, std::size_t j, std::int64_t v);
  [[nodiscard]] std::int64_t at(std::size_t i, std::size_t j) const;
  [[nodiscard]] const std::vector<Entry>& row(std::size_t i) const { return data_[i]; }
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] std::size_t nonzeros() const;
  [[nodiscard]] SparseMatrix transposed() const;

  static SparseMatrix identity(std::size_t n);
  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator-(const SparseMatrix& a);
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  void normalize_row(std::size_t i);
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<Entry>> data_;  // each row sorted by column, no zeros
};

/// Cochain complex: differential in degree k maps C^k -> C^{k+1}.
struct CochainComplex {
  std::map<int, std::size_t> dims;
  std::map<int, SparseMatrix> d;

  [[nodiscard]] std::size_t dim(int k) const;
  /// Zero map of the right shape when absent.
  [[nodiscard]] SparseMatrix differential(int k) const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool squares_to_zero() const;
  [[nodiscard]] long euler_characteristic() const;
};

/// Exact rank over Q.
std::size_t exact_rank(const SparseMatrix& m);
/// Rank over Z/p for the fixed 61-bit Mersenne prime; a lower bound for the rank over Q.
std::size_t modular_rank(const SparseMatrix& m);

/// Exact dimension of H^k over Q for every degree with nonzero cohomology.
/// Ranks are first taken modulo a large prime; when the resulting cohomology
/// sits in at most one degree the Euler characteristic certifies it exactly,
/// otherwise the ranks are recomputed over Q.
std::map<int, std::size_t> cohomology_dims(const CochainComplex& c);

}  // namespace ccc
