#pragma once

// Coherent side: generators Theta'(sigma, chi), their M-graded hom bases, the
// Cech complex of the structure sheaf and line-bundle cohomology.

#include <map>
#include <vector>

#include "ccc/homology.hpp"
#include "ccc/semigroups.hpp"
#include "ccc/stacky_fan.hpp"

namespace ccc {

struct GenObject {
  std::size_t cone = 0;   // index into sf.sigma
  std::size_t coset = 0;  // index into the coset group of the cone
  RatVector chi;          // canonical representative in [0,1)^n

  friend bool operator==(const GenObject&, const GenObject&) = default;
};

/// Theta'(sigma, chi) for the coset with the given index.
GenObject make_generator(const StackyFan& sf, std::size_t cone, std::size_t coset = 0);
/// All generators of the fan, cone by cone and coset by coset.
std::vector<GenObject> all_generators(const StackyFan& sf);

struct GradedHom {
  GenObject source, target;
  Box window;
  std::vector<RatVector> basis;  // lattice points of tau^vee cap (M + chi_2 - chi_1) in the window
  int homological_degree = 0;
};

GradedHom hom_basis(const StackyFan& sf, const GenObject& a, const GenObject& b, const Box& window);

/// A single graded morphism a -> b labelled by a point of M_R.
struct HomElement {
  GenObject source, target;
  RatVector label;
};

/// g after f; labels add. Throws LinalgError for incomposable pairs.
HomElement compose(const StackyFan& sf, const HomElement& f, const HomElement& g);

/// (tau, [chi]) with the coset recomputed in M_{tau,beta}/M.
GenObject restrict_generator(const StackyFan& sf, const GenObject& a, std::size_t tau);

/// 0 -> O -> (+)_{Sigma(n)} Theta'(sigma,0) -> ... -> Theta'({0},0).
struct CechComplex {
  std::size_t n = 0;
  /// terms[i] are the generators indexed by Sigma(n - i); cochain degree i.
  std::vector<std::vector<GenObject>> terms;
  /// differential[i] : terms[i] -> terms[i+1], entries are +-1 restriction maps of label 0.
  std::vector<SparseMatrix> differential;

  [[nodiscard]] bool squares_to_zero() const;
  /// Degree-m strand: the term at sigma contributes when m lies in sigma^vee.
  [[nodiscard]] CochainComplex strand(const StackyFan& sf, const RatVector& m) const;
};

CechComplex cech_structure_complex(const StackyFan& sf);

/// Sign of the face tau inside the simplicial cone sigma with one ray fewer:
/// (-1)^position of the removed ray in sigma's sorted ray list.
int face_sign(const std::vector<std::size_t>& sigma, const std::vector<std::size_t>& tau);

/// Torus-invariant divisor sum a_rho D_rho on the rays of sigma-hat.
struct DivisorData {
  std::vector<Integer> coefficients;

  static DivisorData multiple_of(const StackyFan& sf, std::size_t ray, long d);
  static DivisorData uniform(const StackyFan& sf, long d);
  /// Section condition on the chart of cone sigma: <m, beta(rho)> >= -a_rho for rho in sigma.
  [[nodiscard]] ConstraintSystem chart_polyhedron(const StackyFan& sf, std::size_t sigma) const;
  /// The character m_sigma with <m_sigma, beta(rho)> = -a_rho on the rays of sigma,
  /// chosen inside span(sigma) dual coordinates; rational in general.
  [[nodiscard]] RatVector chart_shift(const StackyFan& sf, std::size_t sigma) const;
};

/// Per degree m in the window, dimensions of H^i(X, O(D))_m from the Cech complex
/// over the maximal cones.
std::map<RatVector, std::map<int, std::size_t>> line_bundle_cohomology(const StackyFan& sf, const DivisorData& d, const Box& window);

/// Totals over the window.
std::map<int, std::size_t> total_cohomology(const std::map<RatVector, std::map<int, std::size_t>>& per_degree);

}  // namespace ccc
