#pragma once

// Rational polyhedral fans stored as ray lists plus cones given by ray indices.

#include <optional>
#include <string>
#include <vector>

#include "ccc/cone.hpp"

namespace ccc {

class Fan {
 public:
  Fan() = default;
  /// Builds the face closure of the given cones. Rays must be primitive and distinct.
  Fan(std::size_t ambient, std::vector<IntVector> rays, const std::vector<std::vector<std::size_t>>& cones);

  [[nodiscard]] std::size_t ambient_dim() const { return ambient_; }
  [[nodiscard]] const std::vector<IntVector>& rays() const { return rays_; }
  /// Every cone, including the zero cone, ordered by dimension then ray indices.
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& cones() const { return cones_; }
  [[nodiscard]] std::size_t size() const { return cones_.size(); }
  [[nodiscard]] const Cone& cone(std::size_t i) const { return geometry_[i]; }
  [[nodiscard]] std::size_t dim(std::size_t i) const { return geometry_[i].dimension(); }
  [[nodiscard]] std::optional<std::size_t> index_of(std::vector<std::size_t> rays) const;
  /// tau is a face of sigma.
  [[nodiscard]] bool is_face(std::size_t tau, std::size_t sigma) const;
  [[nodiscard]] std::vector<std::size_t> maximal_cones() const;
  /// Cones of the given dimension.
  [[nodiscard]] std::vector<std::size_t> cones_of_dim(std::size_t d) const;
  [[nodiscard]] std::vector<IntVector> cone_rays(std::size_t i) const;

  /// nullopt when the cones are strictly convex with pairwise disjoint relative
  /// interiors; otherwise a message naming the offending cones.
  [[nodiscard]] std::optional<std::string> validate() const;

  [[nodiscard]] bool is_simplicial() const;
  [[nodiscard]] bool is_smooth() const;
  [[nodiscard]] bool is_complete() const;

  [[nodiscard]] std::string cone_label(std::size_t i) const;

 private:
  std::size_t ambient_ = 0;
  std::vector<IntVector> rays_;
  std::vector<std::vector<std::size_t>> cones_;
  std::vector<Cone> geometry_;
};

/// Replaces every cone containing sigma by the cones over its facets that miss
/// sigma, joined with the new ray through the sum of sigma's generators.
Fan star_subdivision(const Fan& f, std::size_t sigma);

/// Relative interiors of two cones meet.
bool relative_interiors_meet(const Cone& a, const Cone& b);

}  // namespace ccc
