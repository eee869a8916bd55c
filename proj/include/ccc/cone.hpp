#pragma once

// Rational polyhedral cones with paired V- and H-representations.

#include <vector>

#include "ccc/linalg.hpp"
#include "ccc/polyhedron.hpp"

namespace ccc {

class Cone {
 public:
  Cone() = default;
  /// Generators are made primitive; zero vectors are dropped. The H-representation
  /// is derived by facet enumeration over generator subsets.
  Cone(std::size_t ambient, std::vector<IntVector> generators);

  [[nodiscard]] std::size_t ambient_dim() const { return ambient_; }
  [[nodiscard]] const std::vector<IntVector>& generators() const { return generators_; }
  /// Facet normals a with <a, x> >= 0 on the cone, primitive and lying in the span.
  [[nodiscard]] const std::vector<IntVector>& inequalities() const { return inequalities_; }
  /// Integer basis of span(cone)^perp: <e, x> = 0 on the cone.
  [[nodiscard]] const std::vector<IntVector>& equations() const { return equations_; }
  [[nodiscard]] std::size_t dimension() const { return ambient_ - equations_.size(); }
  [[nodiscard]] bool is_strictly_convex() const;
  [[nodiscard]] bool is_full_dimensional() const { return equations_.empty(); }

  [[nodiscard]] bool contains(const RatVector& x) const;
  [[nodiscard]] bool contains_in_relative_interior(const RatVector& x) const;
  /// Sum of the generators; lies in the relative interior.
  [[nodiscard]] RatVector interior_point() const;

  /// H-representation as constraints, optionally with strict facet inequalities
  /// (the relative interior).
  [[nodiscard]] ConstraintSystem constraints(bool relative_interior = false) const;

  /// Faces as sorted lists of generator indices, from the minimal face up to the
  /// whole cone. For a strictly convex cone the minimal face is the empty list.
  [[nodiscard]] std::vector<std::vector<std::size_t>> faces() const;
  /// Generator indices lying on the given facet normal.
  [[nodiscard]] std::vector<std::size_t> generators_on(const IntVector& normal) const;

  /// Same closed set, compared through the H-representations.
  [[nodiscard]] bool same_set(const Cone& other) const;

 private:
  std::size_t ambient_ = 0;
  std::vector<IntVector> generators_;
  std::vector<IntVector> inequalities_;
  std::vector<IntVector> equations_;
};

/// sigma^vee = { m : <m, s> >= 0 for all s in sigma }.
Cone dual_cone(const Cone& c);

/// Integer basis of L cap span(generators).
std::vector<IntVector> saturated_span_basis(const std::vector<IntVector>& generators, std::size_t ambient);

Rational pairing(const IntVector& a, const RatVector& x);
Integer pairing(const IntVector& a, const IntVector& x);

}  // namespace ccc
