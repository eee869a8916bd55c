#include "ccc/verify.hpp"

namespace ccc {

void CheckResult::fail(std::string message) {
  status = CheckStatus::Fail;
  failures.push_back(std::move(message));
}

bool VerificationReport::passed() const {
  for (const auto& [id, c] : checks)
    if (!c.passed()) return false;
  return true;
}

void VerificationReport::add(CheckResult c) {
  std::string id = c.id;
  checks[id] = std::move(c);
}

std::string format_rational(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

nlohmann::json rational_json(const RatVector& v) {
  nlohmann::json a = nlohmann::json::array();
  bool integral = true;
  for (const auto& q : v) integral = integral && q.get_den() == 1;
  for (const auto& q : v) {
    if (integral && q.get_num().fits_slong_p())
      a.push_back(q.get_num().get_si());
    else
      a.push_back(format_rational(q));
  }
  return a;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json out;
  out["suite"] = r.suite;
  out["passed"] = r.passed();
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& [id, c] : r.checks) {
    nlohmann::json j;
    j["status"] = c.status == CheckStatus::Pass ? "pass" : c.status == CheckStatus::Fail ? "fail" : "not_applicable";
    j["failures"] = c.failures;
    j["tables"] = c.tables;
    j["parameters"] = c.parameters;
    if (!c.note.empty()) j["note"] = c.note;
    checks[id] = j;
  }
  out["checks"] = checks;
  return out;
}

}  // namespace ccc
