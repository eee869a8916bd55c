#pragma once

// Systems of exact linear constraints mixing strict, non-strict and equality
// rows, with Fourier-Motzkin feasibility and witness points.

#include <optional>
#include <string>
#include <vector>

#include "ccc/linalg.hpp"

namespace ccc {

enum class Relation { GE, GT, EQ };

/// a . x  (>= | > | =)  b
struct Constraint {
  RatVector a;
  Rational b;
  Relation rel = Relation::GE;

  [[nodiscard]] bool satisfied_by(const RatVector& x) const;
};

using ConstraintSystem = std::vector<Constraint>;

Constraint ge(RatVector a, Rational b);
Constraint gt(RatVector a, Rational b);
Constraint eq(RatVector a, Rational b);

/// A point satisfying every constraint, or nullopt when the system is infeasible.
std::optional<RatVector> fm_sample_point(const ConstraintSystem& system, std::size_t dim);
bool fm_feasible(const ConstraintSystem& system, std::size_t dim);

/// Projection of the solution set onto the first `keep` coordinates, as a constraint
/// system in those coordinates (Fourier-Motzkin elimination of the rest).
ConstraintSystem fm_project(const ConstraintSystem& system, std::size_t dim, std::size_t keep);

bool satisfies_all(const ConstraintSystem& system, const RatVector& x);

}  // namespace ccc
