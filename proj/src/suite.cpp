#include <atomic>
#include <functional>
#include <thread>

#include "ccc/verify.hpp"

namespace ccc {

const std::vector<std::string>& suite_check_names() {
  static const std::vector<std::string> names{"hom_match", "unit",        "vanishing",   "monoidal",
                                              "refinement", "skeleton_ss", "line_bundle", "stacky_arithmetic"};
  return names;
}

namespace {

std::optional<std::size_t> default_subdivision(const StackyFan& sf) {
  for (auto c : sf.sigma.maximal_cones())
    if (sf.sigma.dim(c) >= 2) return c;
  return std::nullopt;
}

std::vector<std::pair<DivisorData, DivisorData>> default_divisor_pairs(const StackyFan& sf) {
  auto d = [&](long k) { return DivisorData::multiple_of(sf, 0, k); };
  if (sf.n_rank == 1) return {{d(1), d(1)}, {d(0), d(1)}};
  return {{d(1), d(-1)}, {d(1), d(1)}};
}

std::function<CheckResult()> make_check(const StackyFan& sf, const std::string& name, const SuiteOptions& o) {
  if (name == "hom_match")
    return [&sf, &o] {
      auto pairs = face_pairs(sf);
      auto extra = non_face_pairs(sf);
      pairs.insert(pairs.end(), extra.begin(), extra.end());
      return verify_hom_match(sf, pairs, {o.hom_radius, 0, {}});
    };
  if (name == "unit") return [&sf] { return verify_unit(sf); };
  if (name == "vanishing") return [&sf] { return verify_vanishing(sf); };
  if (name == "monoidal") return [&sf] { return verify_monoidal(sf, default_divisor_pairs(sf)); };
  if (name == "refinement") return [&sf] { return verify_refinement(sf, default_subdivision(sf)); };
  if (name == "skeleton_ss") return [&sf] { return verify_skeleton_ss(sf); };
  if (name == "line_bundle")
    return [&sf] {
      if (!sf.sigma.is_complete()) {
        CheckResult r;
        r.id = "line_bundle";
        r.status = CheckStatus::NotApplicable;
        r.note = "the fan is not complete";
        return r;
      }
      std::vector<DivisorData> ds;
      for (long d = -3; d <= 2; ++d) ds.push_back(DivisorData::multiple_of(sf, 0, d));
      return verify_line_bundle(sf, ds, 3);
    };
  if (name == "stacky_arithmetic") return [&sf] { return verify_stacky_arithmetic(sf); };
  throw InputError("unknown check: " + name);
}

}  // namespace

VerificationReport run_suite(const StackyFan& sf, const SuiteOptions& options) {
  if (!sf.validated) throw InputError("the stacky fan has not been validated");
  VerificationReport report;
  report.suite = sf.name;
  const auto& names = options.checks.empty() ? suite_check_names() : options.checks;
  std::vector<std::function<CheckResult()>> tasks;
  for (const auto& name : names) tasks.push_back(make_check(sf, name, options));
  std::vector<CheckResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& r : results) report.add(std::move(r));
  return report;
}

}  // namespace ccc
