#pragma once

// Stacky fans (L, N, beta, Sigma-hat), their derived fan Sigma, the coset data
// M_{sigma,beta}/M, the groups H_beta and the skeleton Lambda.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "ccc/fan.hpp"

namespace ccc {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StackyFan {
  std::string name;
  std::size_t l_rank = 0;
  std::size_t n_rank = 0;
  IntMatrix beta;  // n_rank x l_rank, acting on column vectors
  Fan sigma_hat;

  // Filled by validate_condition1.
  bool validated = false;
  Fan sigma;
  std::vector<std::size_t> ray_map;   // hat ray -> ray of sigma
  std::vector<std::size_t> cone_map;  // hat cone -> cone of sigma
  std::vector<std::size_t> cone_map_inverse;

  [[nodiscard]] IntVector apply_beta(const IntVector& l) const;
  /// Convenience for the suite: the M rank equals the N rank.
  [[nodiscard]] std::size_t m_rank() const { return n_rank; }
};

/// Parses the stacky fan schema (n_rank, l_rank, beta, rays_hat, cones_hat and an
/// optional name). Throws InputError on malformed input.
StackyFan parse_stacky_fan(const nlohmann::json& j);
StackyFan load_stacky_fan(const std::string& path);
nlohmann::json to_json(const StackyFan& sf);

struct ValidationReport {
  bool valid = false;
  std::vector<std::string> passed;
  std::string failed_clause;
  std::string message;
  std::optional<std::pair<std::size_t, std::size_t>> offending_cones;  // indices into sigma_hat
};

/// Checks Condition 1; on success caches Sigma and the poset isomorphism in `sf`.
ValidationReport validate_condition1(StackyFan& sf);

/// Lattice and coset data attached to a cone sigma of the derived fan.
struct ConeStackData {
  std::size_t cone = 0;
  std::vector<IntVector> n_sigma_basis;  // basis of N cap span(sigma)
  std::vector<IntVector> l_sigma_basis;  // basis of L cap span(sigma-hat)
  IntMatrix beta_coords;                 // beta(l_j) = sum_i beta_coords(i, j) n_i
  FiniteAbelianGroup coset_group;        // M_{sigma,beta}/M
  std::vector<IntVector> elements;       // group elements, lexicographic
  std::vector<RatVector> representatives;  // matching chi in [0,1)^n
  RationalLattice lattice;               // M + Z{representatives}

  [[nodiscard]] std::size_t coset_count() const { return representatives.size(); }
  /// Index of the coset of chi modulo M + sigma^perp.
  [[nodiscard]] std::size_t coset_index(const RatVector& chi) const;
  /// chi pairs integrally with every vector of beta(L cap span sigma-hat).
  [[nodiscard]] bool in_lattice(const RatVector& chi) const;
};

ConeStackData compute_M_sigma_beta(const StackyFan& sf, std::size_t sigma);
/// Cokernel of beta restricted to L cap span(sigma-hat) -> N cap span(sigma).
FiniteAbelianGroup compute_H_beta(const StackyFan& sf, std::size_t sigma);

struct SkeletonCell {
  std::size_t cone = 0;
  IntVector coset;
  RatVector chi;
  std::vector<IntVector> perp_basis;   // sigma^perp in M
  std::vector<IntVector> minus_sigma;  // generators of -sigma
  std::vector<IntVector> n_sigma_basis;

  /// x lies on chi + sigma^perp modulo M.
  [[nodiscard]] bool base_contains(const RatVector& x) const;
};

struct Skeleton {
  std::size_t m_rank = 0;
  std::vector<SkeletonCell> cells;
};

Skeleton build_skeleton(const StackyFan& sf);
nlohmann::json to_json(const Skeleton& s);

}  // namespace ccc
