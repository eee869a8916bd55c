#pragma once

// Locally closed polyhedra and the cell stratifications of an open window cut
// out by a hyperplane arrangement (ambient dimension 1 or 2).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ccc/polyhedron.hpp"
#include "ccc/semigroups.hpp"

namespace ccc {

/// a . x = b with a primitive integral and its first nonzero entry positive.
struct Hyperplane {
  IntVector a;
  Rational b;

  [[nodiscard]] Rational value(const RatVector& x) const;
  /// Normalized hyperplane through the zero set of the affine functional a . x - b.
  static Hyperplane from(const RatVector& a, const Rational& b);

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
  friend bool operator<(const Hyperplane& l, const Hyperplane& r) {
    return l.a != r.a ? l.a < r.a : l.b < r.b;
  }
};

/// Finite intersection of open half-spaces, closed half-spaces and hyperplanes.
struct LCPolyhedron {
  std::size_t dim = 0;
  ConstraintSystem constraints;

  static LCPolyhedron whole(std::size_t n);
  /// Interior (open = true) or closure of cone + shift.
  static LCPolyhedron from_cone(const Cone& c, const RatVector& shift, bool open);

  [[nodiscard]] bool contains(const RatVector& x) const { return satisfies_all(constraints, x); }
  [[nodiscard]] bool is_empty() const { return !fm_feasible(constraints, dim); }
  [[nodiscard]] std::vector<Hyperplane> hyperplanes() const;
  [[nodiscard]] LCPolyhedron translated(const RatVector& m) const;
  /// Image under x -> -x.
  [[nodiscard]] LCPolyhedron reflected() const;
  /// Swap strict and non-strict inequalities.
  [[nodiscard]] LCPolyhedron toggled() const;
  /// Adds constraints.
  [[nodiscard]] LCPolyhedron intersect(const LCPolyhedron& other) const;
};

struct Stratum {
  std::vector<std::int8_t> signs;  // sign of a . x - b for each hyperplane
  std::size_t dim = 0;
  RatVector sample;                 // a point of the relative interior
};

/// Cells of the open window (lo, hi) cut by the hyperplanes. Strata are listed
/// by dimension and then by sign vector; the order is closure containment.
class Stratification {
 public:
  Stratification(std::size_t n, Box window, std::vector<Hyperplane> hyperplanes);

  [[nodiscard]] std::size_t ambient_dim() const { return n_; }
  [[nodiscard]] const Box& window() const { return window_; }
  [[nodiscard]] const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
  [[nodiscard]] std::size_t size() const { return strata_.size(); }
  [[nodiscard]] const Stratum& stratum(std::size_t i) const { return strata_[i]; }
  [[nodiscard]] const std::vector<Stratum>& strata() const { return strata_; }

  /// i <= j: stratum i lies in the closure of stratum j.
  [[nodiscard]] bool leq(std::size_t i, std::size_t j) const;
  /// Strata strictly above / below i.
  [[nodiscard]] const std::vector<std::uint32_t>& above(std::size_t i) const { return above_[i]; }
  [[nodiscard]] const std::vector<std::uint32_t>& below(std::size_t i) const { return below_[i]; }

  /// Stratum containing x, if x lies in the open window.
  [[nodiscard]] std::optional<std::size_t> locate(const RatVector& x) const;
  /// Constraint system describing stratum i (without the window).
  [[nodiscard]] ConstraintSystem constraints(std::size_t i) const;
  /// Whether the polyhedron is a union of strata.
  [[nodiscard]] bool adapted(const LCPolyhedron& p) const;
  /// For a finer stratification over the same window whose hyperplanes contain
  /// these: the stratum of this one containing each fine stratum.
  [[nodiscard]] std::vector<std::size_t> coarsening_map(const Stratification& finer) const;
  /// The image under x -> -x, with strata in the same order.
  [[nodiscard]] Stratification reflected() const;

  [[nodiscard]] std::vector<std::int8_t> sign_vector(const RatVector& x) const;

 private:
  Stratification() = default;
  void build_order();

  std::size_t n_ = 0;
  Box window_;
  std::vector<Hyperplane> hyperplanes_;
  std::vector<Stratum> strata_;
  std::map<std::vector<std::int8_t>, std::size_t> by_signs_;
  std::vector<std::vector<std::uint32_t>> above_, below_;
};

using StratificationPtr = std::shared_ptr<const Stratification>;

/// Stratification of the window by every hyperplane of the polyhedra plus extras.
StratificationPtr refine_arrangement(const std::vector<LCPolyhedron>& polys, const Box& window,
                                     const std::vector<Hyperplane>& extra = {});

}  // namespace ccc
