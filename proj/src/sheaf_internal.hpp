#pragma once

#include <functional>
#include <map>
#include <utility>

#include "ccc/polysheaf.hpp"

namespace ccc::detail {

/// Offsets of the blocks A^i (x) B^j inside (A (x) B)^{i+j}.
struct TensorLayout {
  std::map<int, std::size_t> dims;
  std::map<std::pair<int, int>, std::size_t> offsets;
};

TensorLayout tensor_layout(const CochainComplex& a, const CochainComplex& b);
CochainComplex tensor_complex(const CochainComplex& a, const CochainComplex& b);
/// (f (x) g) in one degree, A (x) B -> A2 (x) B2.
SparseMatrix tensor_map(const CochainComplex& a, const CochainComplex& b, const CochainComplex& a2,
                        const CochainComplex& b2, const std::function<SparseMatrix(int)>& f,
                        const std::function<SparseMatrix(int)>& g, int degree);

/// Offsets of the blocks F(c)^k inside the compactly supported cochains in
/// degree dim(c) + k.
struct CompactLayout {
  std::map<int, std::size_t> dims;
  std::map<std::pair<std::size_t, int>, std::size_t> offsets;
};

CompactLayout compact_layout(const PosetSheaf& f, const std::vector<std::size_t>& strata);
CochainComplex compact_complex(const PosetSheaf& f, const std::vector<std::size_t>& strata, const CompactLayout& l);

/// Boundary orientation sign of the codimension-one face c of top.
int incidence(const Stratification& s, std::size_t c, std::size_t top);

}  // namespace ccc::detail
