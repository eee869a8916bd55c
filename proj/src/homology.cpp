#include "ccc/homology.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace ccc {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("sparse matrix entry overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("sparse matrix entry overflow");
  return r;
}

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  if (s >= kPrime) s -= kPrime;
  return s;
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mod_mul(r, a);
    a = mod_mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t to_mod(std::int64_t v) {
  std::int64_t r = v % static_cast<std::int64_t>(kPrime);
  if (r < 0) r += static_cast<std::int64_t>(kPrime);
  return static_cast<std::uint64_t>(r);
}

// Generic sparse Gaussian elimination: rows are reduced against pivots keyed by
// their leading column.
template <class Field>
std::size_t sparse_rank(const SparseMatrix& m) {
  using Value = typename Field::Value;
  using Row = std::vector<std::pair<std::uint32_t, Value>>;
  std::unordered_map<std::uint32_t, Row> pivots;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Row row;
    for (const auto& [c, v] : m.row(i)) {
      Value x = Field::from(v);
      if (!Field::is_zero(x)) row.emplace_back(c, x);
    }
    while (!row.empty()) {
      auto it = pivots.find(row.front().first);
      if (it == pivots.end()) break;
      const Row& p = it->second;  // leading coefficient is one
      Value f = row.front().second;
      Row out;
      out.reserve(row.size() + p.size());
      std::size_t a = 0, b = 0;
      while (a < row.size() || b < p.size()) {
        if (b == p.size() || (a < row.size() && row[a].first < p[b].first)) {
          out.push_back(row[a++]);
        } else if (a == row.size() || p[b].first < row[a].first) {
          out.emplace_back(p[b].first, Field::neg(Field::mul(f, p[b].second)));
          ++b;
        } else {
          Value v = Field::sub(row[a].second, Field::mul(f, p[b].second));
          if (!Field::is_zero(v)) out.emplace_back(row[a].first, v);
          ++a;
          ++b;
        }
      }
      row = std::move(out);
    }
    if (row.empty()) continue;
    Value inv = Field::inv(row.front().second);
    for (auto& e : row) e.second = Field::mul(e.second, inv);
    pivots.emplace(row.front().first, std::move(row));
    ++rank;
  }
  return rank;
}

struct ModField {
  using Value = std::uint64_t;
  static Value from(std::int64_t v) { return to_mod(v); }
  static bool is_zero(Value v) { return v == 0; }
  static Value mul(Value a, Value b) { return mod_mul(a, b); }
  static Value sub(Value a, Value b) { return a >= b ? a - b : a + kPrime - b; }
  static Value neg(Value a) { return a == 0 ? 0 : kPrime - a; }
  static Value inv(Value a) { return mod_pow(a, kPrime - 2); }
};

struct RatField {
  using Value = mpq_class;
  static Value from(std::int64_t v) { return mpq_class(static_cast<long>(v)); }
  static bool is_zero(const Value& v) { return v == 0; }
  static Value mul(const Value& a, const Value& b) { return a * b; }
  static Value sub(const Value& a, const Value& b) { return a - b; }
  static Value neg(const Value& a) { return -a; }
  static Value inv(const Value& a) { return 1 / a; }
};

}  // namespace

void SparseMatrix::add(std::size_t i, std::size_t j, std::int64_t v) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("sparse matrix index");
  if (v == 0) return;
  auto& r = data_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) {
    it->second = checked_add(it->second, v);
    if (it->second == 0) r.erase(it);
  } else {
    r.insert(it, Entry(static_cast<std::uint32_t>(j), v));
  }
}

std::int64_t SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto& r = data_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
  return (it != r.end() && it->first == j) ? it->second : 0;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const auto& r) { return r.empty(); });
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [c, v] : data_[i]) t.data_[c].emplace_back(static_cast<std::uint32_t>(i), v);
  return t;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(static_cast<std::uint32_t>(i), 1);
  return m;
}

void SparseMatrix::normalize_row(std::size_t i) {
  auto& r = data_[i];
  std::sort(r.begin(), r.end());
  std::vector<Entry> out;
  for (const auto& e : r) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second = checked_add(out.back().second, e.second);
    else
      out.push_back(e);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Entry& e) { return e.second == 0; }), out.end());
  r = std::move(out);
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("sparse product dimension mismatch");
  SparseMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    std::unordered_map<std::uint32_t, std::int64_t> acc;
    for (const auto& [k, v] : a.data_[i])
      for (const auto& [j, w] : b.data_[k]) acc[j] = checked_add(acc[j], checked_mul(v, w));
    for (const auto& [j, v] : acc)
      if (v != 0) c.data_[i].emplace_back(j, v);
    std::sort(c.data_[i].begin(), c.data_[i].end());
  }
  return c;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("sparse sum dimension mismatch");
  SparseMatrix c = a;
  for (std::size_t i = 0; i < b.rows_; ++i) {
    c.data_[i].insert(c.data_[i].end(), b.data_[i].begin(), b.data_[i].end());
    c.normalize_row(i);
  }
  return c;
}

SparseMatrix operator-(const SparseMatrix& a) {
  SparseMatrix c = a;
  for (auto& r : c.data_)
    for (auto& e : r) e.second = -e.second;
  return c;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::size_t CochainComplex::dim(int k) const {
  auto it = dims.find(k);
  return it == dims.end() ? 0 : it->second;
}

SparseMatrix CochainComplex::differential(int k) const {
  auto it = d.find(k);
  if (it != d.end()) return it->second;
  return SparseMatrix(dim(k + 1), dim(k));
}

bool CochainComplex::is_zero() const {
  return std::all_of(dims.begin(), dims.end(), [](const auto& e) { return e.second == 0; });
}

bool CochainComplex::squares_to_zero() const {
  for (const auto& [k, m] : d) {
    auto next = d.find(k + 1);
    if (next == d.end()) continue;
    if (!(next->second * m).is_zero()) return false;
  }
  return true;
}

long CochainComplex::euler_characteristic() const {
  long e = 0;
  for (const auto& [k, n] : dims) e += (k % 2 == 0 ? 1 : -1) * static_cast<long>(n);
  return e;
}

std::size_t exact_rank(const SparseMatrix& m) { return sparse_rank<RatField>(m); }
std::size_t modular_rank(const SparseMatrix& m) { return sparse_rank<ModField>(m); }

namespace {

std::map<int, std::size_t> dims_from_ranks(const CochainComplex& c, const std::map<int, std::size_t>& ranks) {
  std::map<int, std::size_t> out;
  auto rank_at = [&](int k) {
    auto it = ranks.find(k);
    return it == ranks.end() ? std::size_t{0} : it->second;
  };
  for (const auto& [k, n] : c.dims) {
    std::size_t h = n - rank_at(k) - rank_at(k - 1);
    if (h != 0) out[k] = h;
  }
  return out;
}

}  // namespace

std::map<int, std::size_t> cohomology_dims(const CochainComplex& c) {
  std::map<int, std::size_t> ranks;
  for (const auto& [k, m] : c.d)
    if (!m.is_zero()) ranks[k] = modular_rank(m);
  auto dims = dims_from_ranks(c, ranks);
  if (dims.size() <= 1) {
    // dim_Q H^k <= dim_p H^k in every degree and both sides share the Euler characteristic.
    return dims;
  }
  for (const auto& [k, m] : c.d)
    if (!m.is_zero()) ranks[k] = exact_rank(m);
  return dims_from_ranks(c, ranks);
}

}  // namespace ccc
