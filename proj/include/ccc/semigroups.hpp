#pragma once

// Affine semigroups cone cap lattice, lattice points of rational polyhedra and
// finitely generated semigroup modules.

#include <optional>
#include <vector>

#include "ccc/cone.hpp"
#include "ccc/polyhedron.hpp"

namespace ccc {

/// chi + Lambda for a full-rank lattice Lambda of Q^n.
class AffineLattice {
 public:
  explicit AffineLattice(RationalLattice lattice, RatVector shift = {});
  /// Z^n translated by chi.
  static AffineLattice integral(std::size_t n, RatVector shift = {});

  [[nodiscard]] std::size_t dim() const { return lattice_.ambient_dim(); }
  [[nodiscard]] const RationalLattice& lattice() const { return lattice_; }
  [[nodiscard]] const RatVector& shift() const { return shift_; }
  [[nodiscard]] bool contains(const RatVector& x) const;
  /// Shortest lattice vector of Lambda on the ray through v.
  [[nodiscard]] RatVector primitive_on_ray(const IntVector& v) const;

 private:
  RationalLattice lattice_;
  RatVector shift_;
  RatMatrix inverse_;  // coefficient map x -> x * B^{-1}
  bool standard_ = false;
};

/// Axis-aligned box [lo_i, hi_i].
struct Box {
  RatVector lo, hi;
  static Box cube(std::size_t n, const Rational& radius);
  [[nodiscard]] bool contains(const RatVector& x) const;
  [[nodiscard]] Box scaled(const Rational& f) const;
};

/// All points of the affine lattice inside polyhedron cap box, lexicographically sorted.
std::vector<RatVector> lattice_points(const ConstraintSystem& polyhedron, const AffineLattice& lattice, const Box& box);

struct AffineSemigroup {
  Cone cone;
  AffineLattice lattice;
  std::vector<RatVector> hilbert_basis;  // sorted lexicographically

  [[nodiscard]] bool contains(const RatVector& x) const { return cone.contains(x) && lattice.contains(x); }
};

/// Minimal generating set of a strictly convex cone cap lattice.
AffineSemigroup hilbert_basis(const Cone& cone, const AffineLattice& lattice);

/// Lattice points of a finite union of polyhedra, closed under the semigroup.
struct SemigroupModule {
  std::vector<ConstraintSystem> region;
  std::vector<RatVector> generators;

  [[nodiscard]] bool region_contains(const RatVector& x) const;
};

/// Minimal generators of region cap lattice over the semigroup, searched in `box`.
/// Throws LinalgError when some piece's recession cone differs from the semigroup cone.
SemigroupModule module_generators(const std::vector<ConstraintSystem>& region, const AffineSemigroup& s, const Box& box);

struct Syzygy {
  std::size_t i = 0, j = 0;
  SemigroupModule module;  // (cone + m_i) cap (cone + m_j)
};

/// One step of the resolution: pairwise intersections of the translated cones.
std::vector<Syzygy> module_resolution_step(const SemigroupModule& m, const AffineSemigroup& s, const Box& box);

struct Resolution {
  std::vector<std::vector<SemigroupModule>> levels;
  /// The cap was reached with generators still present.
  bool truncated = false;
};

/// Iterated resolution steps up to `depth` (default 4).
Resolution resolve(const SemigroupModule& m, const AffineSemigroup& s, const Box& box, std::size_t depth = 4);

/// Constraints of cone + shift.
ConstraintSystem translated_cone(const Cone& c, const RatVector& shift, bool open = false);

}  // namespace ccc
