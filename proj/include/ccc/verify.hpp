#pragma once
// The functor kappa on generators and line bundles, and the cross-side checks
// comparing the coherent and constructible computations.
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccc/coherent.hpp"
#include "ccc/polysheaf.hpp"
#include "json.hpp"

namespace ccc {

/// Nonempty subsets of the maximal cones ordered by inclusion, each tagged with
/// the intersection cone.
struct CechPoset {
  std::vector<std::size_t> maximal;  // cone indices in sf.sigma
  struct Element {
    std::vector<std::size_t> subset;  // sorted positions into `maximal`
    std::size_t cone = 0;
  };
  std::vector<Element> elements;  // by subset size, then lexicographic
  [[nodiscard]] std::size_t size() const { return elements.size(); }
  [[nodiscard]] bool leq(std::size_t i, std::size_t j) const;
};

CechPoset build_cech_poset(const StackyFan& sf);

/// Int(sigma^vee + chi) for a cone of sf.sigma.
LCPolyhedron theta_region(const StackyFan& sf, std::size_t cone, const RatVector& chi);
/// Theta(sigma, chi) = Q_{Int(sigma^vee + chi)}[n].
IndicatorComplex kappa_indicator(const StackyFan& sf, const GenObject& g);
/// kappa_indicator realized on its own arrangement in the cube of the given radius.
PosetSheaf kappa_generator(const StackyFan& sf, const GenObject& g, const Rational& window_radius = 4);
/// Cech complex of O(D) over the Cech poset, pushed through kappa: the subset S
/// contributes Theta(|S|, m_|S|) in cochain degree |S| - 1.
IndicatorComplex kappa_line_bundle(const StackyFan& sf, const DivisorData& d);
/// kappa of the structure sheaf.
IndicatorComplex kappa_structure_sheaf(const StackyFan& sf);

/// Realization on the arrangement of the complex's own hyperplanes.
PosetSheaf realize_on_window(const IndicatorComplex& c, const Rational& window_radius);

/// Compares stalk cohomology and generization ranks after pulling both sheaves
/// back to a common refinement. Only strata whose sample lies in `inner` count.
std::optional<std::string> compare_sheaves(const PosetSheaf& a, const PosetSheaf& b, const std::optional<Box>& inner = {});

enum class CheckStatus { Pass, Fail, NotApplicable };

struct CheckResult {
  std::string id;
  CheckStatus status = CheckStatus::Pass;
  std::vector<std::string> failures;
  nlohmann::json tables = nlohmann::json::object();
  nlohmann::json parameters = nlohmann::json::object();
  std::string note;

  void fail(std::string message);
  [[nodiscard]] bool passed() const { return status != CheckStatus::Fail; }
};

struct VerificationReport {
  std::string suite;
  std::map<std::string, CheckResult> checks;
  [[nodiscard]] bool passed() const;
  void add(CheckResult c);
};

nlohmann::json to_json(const VerificationReport& r);
std::string format_rational(const Rational& q);
nlohmann::json rational_json(const RatVector& v);

struct HomMatchOptions {
  long translation_radius = 3;
  Rational window_radius = 0;  // 0 picks a radius covering every translate
  std::vector<Hyperplane> extra_hyperplanes;
};

/// Pairs of generator indices (into all_generators) with sigma_1 containing sigma_2.
std::vector<std::pair<std::size_t, std::size_t>> face_pairs(const StackyFan& sf);
/// Pairs with sigma_1 not containing sigma_2; both sides must vanish.
std::vector<std::pair<std::size_t, std::size_t>> non_face_pairs(const StackyFan& sf);
/// "cone/coset" label of a generator.
std::string generator_label(const StackyFan& sf, const GenObject& g);

CheckResult verify_hom_match(const StackyFan& sf, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                             const HomMatchOptions& options = {});
CheckResult verify_unit(const StackyFan& sf);
/// Convolutions that must vanish (generators against closed cones strictly inside
/// their dual cones, constant sheaves against proper cones) and the negative
/// controls that must not.
CheckResult verify_vanishing(const StackyFan& sf);
CheckResult verify_monoidal(const StackyFan& sf, const std::vector<std::pair<DivisorData, DivisorData>>& pairs);
/// E star kappa(O) over the star subdivision at `sigma` against the original fan,
/// for E ranging over the generators.
CheckResult verify_refinement(const StackyFan& sf, std::optional<std::size_t> sigma);
CheckResult verify_skeleton_ss(const StackyFan& sf, const Rational& window_radius = 3);
/// Coherent H^i(O(D))_m against RHom(kappa(O) + m, kappa(O(D))) for every m in the box.
CheckResult verify_line_bundle(const StackyFan& sf, const std::vector<DivisorData>& divisors, long translation_radius);
/// |M_{sigma,beta}/M| = |H_beta| on every cone.
CheckResult verify_stacky_arithmetic(const StackyFan& sf);

/// Microsupport containment in the skeleton for an arbitrary sheaf; returns the
/// escaping cells as messages.
std::vector<std::string> skeleton_escapes(const StackyFan& sf, const PosetSheaf& f);

/// SS(F star G) lies over sums of points of SS(F) and SS(G) sharing a covector.
std::vector<std::string> ss_estimate_violations(const PosetSheaf& f, const PosetSheaf& g, const PosetSheaf& conv);

struct SuiteOptions {
  std::vector<std::string> checks;  // empty selects every check
  long hom_radius = 3;
  unsigned jobs = 1;
};

const std::vector<std::string>& suite_check_names();
VerificationReport run_suite(const StackyFan& sf, const SuiteOptions& options);

}  // namespace ccc
