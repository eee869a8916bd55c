#pragma once

// Constructible sheaves on M_R modelled as functors from the stratum poset to
// bounded complexes of finite-dimensional Q-vector spaces.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccc/homology.hpp"
#include "ccc/stratification.hpp"

namespace ccc {

/// Degreewise matrices A^k -> B^k.
using ChainMap = std::map<int, SparseMatrix>;

class PosetSheaf {
 public:
  PosetSheaf() = default;
  explicit PosetSheaf(StratificationPtr strat);

  [[nodiscard]] const Stratification& stratification() const { return *strat_; }
  [[nodiscard]] const StratificationPtr& stratification_ptr() const { return strat_; }
  [[nodiscard]] std::size_t size() const { return stalks_.size(); }

  [[nodiscard]] const CochainComplex& stalk(std::size_t i) const { return stalks_[i]; }
  void set_stalk(std::size_t i, CochainComplex c) { stalks_[i] = std::move(c); }
  /// Generization map F(i) -> F(j) in degree k for i <= j (zero when unset).
  [[nodiscard]] SparseMatrix map(std::size_t i, std::size_t j, int k) const;
  void set_map(std::size_t i, std::size_t j, int k, SparseMatrix m);

  [[nodiscard]] bool stalk_is_zero(std::size_t i) const;
  [[nodiscard]] bool is_zero() const;
  /// Every stalk squares to zero, every map is a chain map and maps compose.
  /// Returns a description of the first defect.
  [[nodiscard]] std::optional<std::string> check() const;

  [[nodiscard]] std::map<int, std::size_t> stalk_cohomology(std::size_t i) const;
  /// Rank of the map induced on H^k by the generization i -> j.
  [[nodiscard]] std::size_t generization_rank(std::size_t i, std::size_t j, int k) const;
  /// Degrees in which some stalk is nonzero.
  [[nodiscard]] std::pair<int, int> degree_range() const;

  /// Pullback to a refinement of the stratification.
  [[nodiscard]] PosetSheaf pullback(const StratificationPtr& finer) const;
  /// (-1)^* F on the reflected stratification.
  [[nodiscard]] PosetSheaf reflected() const;
  /// F[s]: stalk degrees lowered by s with differentials multiplied by (-1)^s.
  [[nodiscard]] PosetSheaf shifted(int s) const;

 private:
  StratificationPtr strat_;
  std::vector<CochainComplex> stalks_;
  std::map<std::pair<std::size_t, std::size_t>, ChainMap> maps_;
};

/// Stalk-level data used to compare two sheaves on the same stratification:
/// stalk cohomology per stratum and generization ranks on comparable pairs.
struct StalkProfile {
  std::vector<std::map<int, std::size_t>> cohomology;
  std::map<std::pair<std::size_t, std::size_t>, std::map<int, std::size_t>> ranks;

  friend bool operator==(const StalkProfile&, const StalkProfile&) = default;
};

StalkProfile stalk_profile(const PosetSheaf& f);
/// First stratum where the profiles disagree, as a message.
std::optional<std::string> compare_profiles(const PosetSheaf& a, const PosetSheaf& b);

/// Direct sum of indicator sheaves Q_{P_t}[-degree_t] with scalar differentials.
struct IndicatorComplex {
  struct Term {
    LCPolyhedron region;
    int degree = 0;
  };
  struct Arrow {
    std::size_t from = 0, to = 0;
    long coefficient = 0;
  };

  std::size_t dim = 0;
  std::vector<Term> terms;
  std::vector<Arrow> arrows;  // degree(to) = degree(from) + 1

  static IndicatorComplex single(const LCPolyhedron& p, int shift = 0);
  [[nodiscard]] std::vector<Hyperplane> hyperplanes() const;
  [[nodiscard]] IndicatorComplex translated(const RatVector& m) const;
  [[nodiscard]] IndicatorComplex reflected() const;
  [[nodiscard]] IndicatorComplex shifted(int s) const;
  [[nodiscard]] std::vector<LCPolyhedron> regions() const;
};

/// Q_P[shift] on an adapted stratification. Throws LinalgError when P is not a
/// union of strata.
PosetSheaf indicator_sheaf(const LCPolyhedron& p, int shift, const StratificationPtr& strat);
/// Realization of an indicator complex; checks adaptedness and naturality.
PosetSheaf realize(const IndicatorComplex& c, const StratificationPtr& strat);

/// RHom(F, G) over the stratum poset via the normalized bar resolution.
/// Both sheaves must live on the same stratification.
CochainComplex rhom_complex(const PosetSheaf& f, const PosetSheaf& g);
std::map<int, std::size_t> rhom(const PosetSheaf& f, const PosetSheaf& g);

/// Sections over the whole window: RHom(Q, F).
std::map<int, std::size_t> global_sections(const PosetSheaf& f);

/// Compactly supported cellular cochains of F over a set of strata (which must be
/// open in the window, i.e. closed under going up).
CochainComplex compact_support_complex(const PosetSheaf& f, const std::vector<std::size_t>& strata);

/// Windowed m_!(F boxtimes G) on the output window, which must be no larger than
/// the input window. Both sheaves share one stratification.
PosetSheaf convolve(const PosetSheaf& f, const PosetSheaf& g, const Box& output_window);

/// Verdier dual on the same stratification.
PosetSheaf verdier_dual(const PosetSheaf& f);

/// G star (-1)^* D F, the right adjoint of convolution with F for compactly
/// supported F.
PosetSheaf hom_star(const PosetSheaf& f, const PosetSheaf& g, const Box& output_window);

/// A microsupport cell: a stratum and a relatively open cone of covectors,
/// given by generators of its closure. The zero section is the empty generator list.
struct SSCell {
  std::size_t stratum = 0;
  std::vector<RatVector> sector;   // closure generators; empty for the zero section
  RatVector sample;                // a covector in the cell
  std::map<int, std::size_t> microstalk;
};

/// Microsupport with the convention: xi is in SS when sections supported in
/// {<y - x, xi> >= 0} do not vanish. Lists every stratum of the zero-section
/// support and every conormal cell with nonzero microstalk.
std::vector<SSCell> microsupport(const PosetSheaf& f);

/// Per translation m in the box: dims of RHom(F + m, G) computed on a common
/// window of the given radius around the origin.
struct TorusHomResult {
  std::map<RatVector, std::map<int, std::size_t>> dims;
  /// Some translation on the boundary of the box contributed.
  bool boundary_contribution = false;
};

TorusHomResult torus_hom(const IndicatorComplex& f, const IndicatorComplex& g, const Box& translations,
                         const Rational& window_radius, const std::vector<Hyperplane>& extra = {});

}  // namespace ccc
