// Command-line front end: validate, skeleton, homs, cohomology, verify.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ccc/verify.hpp"

using namespace ccc;
using nlohmann::json;

namespace {

constexpr int kSuccess = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

struct RunConfig {
  std::string input;
  std::string command;
  long window_radius = 3;
  long box_radius = 3;
  std::string output;
  std::string svg;
  std::string checks = "all";
  std::vector<std::string> pairs;
  std::string divisor;
  unsigned jobs = 1;
  bool cross_check = false;
};

std::string fixture_dir() {
  if (const char* env = std::getenv("CCC_FIXTURE_DIR")) return env;
#ifdef CCC_DEFAULT_FIXTURE_DIR
  return CCC_DEFAULT_FIXTURE_DIR;
#else
  return "fixtures";
#endif
}

// Existing paths win; otherwise look the name up in the fixture directory.
std::string resolve_input(const std::string& input) {
  namespace fs = std::filesystem;
  if (fs::exists(input)) return input;
  const fs::path dir = fixture_dir();
  for (const fs::path& p : {dir / input, dir / (input + ".json"), dir / "suite" / (input + ".json"), dir / "invalid" / (input + ".json"), dir / "extra" / (input + ".json")})
    if (fs::exists(p)) return p.string();
  throw InputError("input not found: " + input + " (fixture directory " + dir.string() + ")");
}

StackyFan load_valid(const RunConfig& cfg) {
  StackyFan sf = load_stacky_fan(resolve_input(cfg.input));
  auto rep = validate_condition1(sf);
  if (!rep.valid) throw InputError("Condition 1 fails (" + rep.failed_clause + "): " + rep.message);
  return sf;
}

void emit(const RunConfig& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output);
    if (!out) throw InputError("cannot write " + cfg.output);
    out << text;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

long parse_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw InputError("not an integer: " + s);
  }
  if (used != s.size()) throw InputError("not an integer: " + s);
  return v;
}

int cmd_validate(const RunConfig& cfg) {
  StackyFan sf = load_stacky_fan(resolve_input(cfg.input));
  auto rep = validate_condition1(sf);
  json j;
  j["name"] = sf.name;
  j["valid"] = rep.valid;
  j["passed"] = rep.passed;
  if (!rep.valid) {
    j["failed_clause"] = rep.failed_clause;
    j["message"] = rep.message;
    if (rep.offending_cones)
      j["offending_cones"] = {sf.sigma_hat.cone_label(rep.offending_cones->first), sf.sigma_hat.cone_label(rep.offending_cones->second)};
  } else {
    j["cones"] = sf.sigma.size();
    j["complete"] = sf.sigma.is_complete();
    j["smooth"] = sf.sigma.is_smooth();
  }
  emit(cfg, j);
  return rep.valid ? kSuccess : kCheckFailed;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << x;
  return s.str();
}

// The base arrangement on the fundamental square [0,1]^n with conormal glyphs
// pointing along -sigma.
std::string skeleton_svg(const StackyFan& sf, const Skeleton& sk) {
  const double size = 400, margin = 50, scale = 300, glyph = 0.06;
  const std::size_t n = sf.n_rank;
  auto px = [&](double x) { return margin + scale * x; };
  auto py = [&](double y) { return n == 1 ? size / 2 : size - margin - scale * y; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"400\" height=\"400\" fill=\"white\"/>\n";
  if (n == 1)
    out << "<line x1=\"" << fmt(px(0)) << "\" y1=\"200.00\" x2=\"" << fmt(px(1)) << "\" y2=\"200.00\" stroke=\"#bbbbbb\" stroke-width=\"6\"/>\n";
  else
    out << "<rect x=\"" << fmt(px(0)) << "\" y=\"" << fmt(py(1)) << "\" width=\"300.00\" height=\"300.00\" fill=\"#eeeeee\" stroke=\"#999999\"/>\n";
  auto arrow = [&](double x, double y, double dx, double dy) {
    double len = std::hypot(dx, dy);
    dx = dx / len * glyph;
    dy = dy / len * glyph;
    out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(py(y)) << "\" x2=\"" << fmt(px(x + dx)) << "\" y2=\""
        << fmt(n == 1 ? py(y) : py(y + dy)) << "\" stroke=\"#cc3333\" stroke-width=\"2\"/>\n";
  };
  for (const auto& cell : sk.cells) {
    const std::size_t d = sf.sigma.dim(cell.cone);
    if (d == 0) continue;
    std::vector<double> chi;
    for (const auto& q : cell.chi) chi.push_back(q.get_d());
    std::vector<std::vector<double>> minus;
    for (const auto& v : cell.minus_sigma) minus.push_back({v[0].get_d(), n > 1 ? v[1].get_d() : 0.0});
    if (d == n) {
      // Points chi + M in the closed square.
      for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= (n > 1 ? 1 : 0); ++b) {
          double x = chi[0] + a, y = n > 1 ? chi[1] + b : 0;
          if (x > 1 + 1e-9 || y > 1 + 1e-9) continue;
          out << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"4\" fill=\"black\"/>\n";
          for (const auto& v : minus) arrow(x, y, v[0], v[1]);
        }
      continue;
    }
    // A ray cone in rank 2: the lines <v, x> = <v, chi> + k clipped to the square.
    const double v0 = -minus[0][0], v1 = -minus[0][1];
    const double c0 = v0 * chi[0] + v1 * chi[1];
    double lo = std::min({0.0, v0, v1, v0 + v1}), hi = std::max({0.0, v0, v1, v0 + v1});
    for (long k = static_cast<long>(std::floor(lo - c0)) - 1; k <= static_cast<long>(std::ceil(hi - c0)) + 1; ++k) {
      const double c = c0 + k;
      std::vector<std::pair<double, double>> hits;
      auto push = [&](double x, double y) {
        if (x < -1e-9 || x > 1 + 1e-9 || y < -1e-9 || y > 1 + 1e-9) return;
        for (auto& h : hits)
          if (std::abs(h.first - x) < 1e-9 && std::abs(h.second - y) < 1e-9) return;
        hits.emplace_back(x, y);
      };
      if (v1 != 0) {
        push(0, c / v1);
        push(1, (c - v0) / v1);
      }
      if (v0 != 0) {
        push(c / v0, 0);
        push((c - v1) / v0, 1);
      }
      if (hits.size() < 2) continue;
      std::sort(hits.begin(), hits.end());
      const auto& [x1, y1] = hits.front();
      const auto& [x2, y2] = hits.back();
      out << "<line x1=\"" << fmt(px(x1)) << "\" y1=\"" << fmt(py(y1)) << "\" x2=\"" << fmt(px(x2)) << "\" y2=\"" << fmt(py(y2))
          << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
      arrow((x1 + x2) / 2, (y1 + y2) / 2, -v0, -v1);
    }
  }
  out << "</svg>\n";
  return out.str();
}

int cmd_skeleton(const RunConfig& cfg) {
  StackyFan sf = load_valid(cfg);
  Skeleton sk = build_skeleton(sf);
  json j = to_json(sk);
  j["name"] = sf.name;
  for (std::size_t i = 0; i < sk.cells.size(); ++i) j["cells"][i]["cone_label"] = sf.sigma.cone_label(sk.cells[i].cone);
  emit(cfg, j);
  if (cfg.svg.empty()) return kSuccess;
  if (sf.n_rank > 2) {
    std::cerr << "error: SVG export needs rank at most 2 (this fan has rank " << sf.n_rank << ")\n";
    return kInputError;
  }
  std::ofstream out(cfg.svg);
  if (!out) throw InputError("cannot write " + cfg.svg);
  out << skeleton_svg(sf, sk);
  return kSuccess;
}

int cmd_homs(const RunConfig& cfg) {
  StackyFan sf = load_valid(cfg);
  const auto gens = all_generators(sf);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (cfg.pairs.empty()) {
    pairs = face_pairs(sf);
  } else {
    for (const auto& p : cfg.pairs) {
      auto parts = split(p, ',');
      if (parts.size() != 2) throw InputError("a pair is written as i,j: " + p);
      long a = parse_long(parts[0]), b = parse_long(parts[1]);
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= gens.size() || static_cast<std::size_t>(b) >= gens.size())
        throw InputError("unknown generator id in pair " + p + " (there are " + std::to_string(gens.size()) + " generators)");
      pairs.emplace_back(a, b);
    }
  }
  auto res = verify_hom_match(sf, pairs, {cfg.window_radius, 0, {}});
  json gen_list = json::array();
  for (std::size_t i = 0; i < gens.size(); ++i)
    gen_list.push_back({{"id", i}, {"label", generator_label(sf, gens[i])}, {"chi", rational_json(gens[i].chi)}});
  VerificationReport rep;
  rep.suite = sf.name;
  rep.add(res);
  json j = to_json(rep);
  j["generators"] = gen_list;
  emit(cfg, j);
  return rep.passed() ? kSuccess : kCheckFailed;
}

int cmd_cohomology(const RunConfig& cfg) {
  StackyFan sf = load_valid(cfg);
  DivisorData d = DivisorData::uniform(sf, 0);
  if (!cfg.divisor.empty()) {
    auto parts = split(cfg.divisor, ',');
    if (parts.size() != d.coefficients.size())
      throw InputError("the divisor needs one coefficient per ray of sigma-hat (" + std::to_string(d.coefficients.size()) + ")");
    for (std::size_t i = 0; i < parts.size(); ++i) d.coefficients[i] = parse_long(parts[i]);
  }
  const Box box = Box::cube(sf.n_rank, cfg.box_radius);
  auto per = line_bundle_cohomology(sf, d, box);
  json table = json::object();
  for (const auto& [m, dims] : per) {
    json e = json::object();
    for (const auto& [k, v] : dims)
      if (v) e[std::to_string(k)] = v;
    if (e.empty()) continue;
    std::string key;
    for (std::size_t i = 0; i < m.size(); ++i) key += (i ? "," : "") + format_rational(m[i]);
    table[key] = e;
  }
  json totals = json::object();
  for (const auto& [k, v] : total_cohomology(per))
    if (v) totals[std::to_string(k)] = v;
  json j;
  j["name"] = sf.name;
  json coeffs = json::array();
  for (const auto& c : d.coefficients) coeffs.push_back(c.get_si());
  j["divisor"] = coeffs;
  j["box_radius"] = cfg.box_radius;
  j["per_degree"] = table;
  j["totals"] = totals;
  int code = kSuccess;
  if (cfg.cross_check) {
    auto res = verify_line_bundle(sf, {d}, cfg.box_radius);
    j["cross_check"] = res.passed() ? "pass" : "fail";
    j["failures"] = res.failures;
    if (!res.passed()) code = kCheckFailed;
  }
  emit(cfg, j);
  return code;
}

int cmd_verify(const RunConfig& cfg) {
  StackyFan sf = load_stacky_fan(resolve_input(cfg.input));
  auto validation = validate_condition1(sf);
  if (!validation.valid) {
    VerificationReport rep;
    rep.suite = sf.name;
    CheckResult c;
    c.id = "condition1";
    c.fail(validation.failed_clause + ": " + validation.message);
    rep.add(c);
    emit(cfg, to_json(rep));
    std::cerr << "failing checks: condition1\n";
    return kCheckFailed;
  }
  SuiteOptions o;
  o.jobs = cfg.jobs;
  o.hom_radius = cfg.window_radius;
  VerificationReport rep;
  rep.suite = sf.name;
  if (cfg.checks != "all") {
    o.checks = split(cfg.checks, ',');
    for (const auto& c : o.checks)
      if (std::find(suite_check_names().begin(), suite_check_names().end(), c) == suite_check_names().end())
        throw InputError("unknown check: " + c);
  }
  if (cfg.checks == "all" || !o.checks.empty()) rep = run_suite(sf, o);
  json j = to_json(rep);
  j["parameters"] = {{"hom_radius", cfg.window_radius}, {"checks", cfg.checks}};
  emit(cfg, j);
  if (!rep.passed()) {
    std::cerr << "failing checks:";
    for (const auto& [id, c] : rep.checks)
      if (!c.passed()) std::cerr << " " << id;
    std::cerr << "\n";
    return kCheckFailed;
  }
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-constructible correspondence for toric stacks"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto radius_check = CLI::Range(1L, 1000L);

  auto* validate = app.add_subcommand("validate", "Check Condition 1 for a stacky fan");
  validate->add_option("input", cfg.input, "stacky fan JSON or fixture name")->required();
  validate->add_option("-o,--output", cfg.output, "write the report here");

  auto* skeleton = app.add_subcommand("skeleton", "Skeleton cells, optionally drawn as SVG");
  skeleton->add_option("input", cfg.input)->required();
  skeleton->add_option("--svg", cfg.svg, "SVG output path (rank at most 2)");
  skeleton->add_option("-o,--output", cfg.output);

  auto* homs = app.add_subcommand("homs", "Generator homs on both sides");
  homs->add_option("input", cfg.input)->required();
  homs->add_option("--pairs", cfg.pairs, "generator id pairs i,j")->expected(1, -1);
  homs->add_option("--window", cfg.window_radius, "translation radius")->check(radius_check);
  homs->add_option("-o,--output", cfg.output);

  auto* cohomology = app.add_subcommand("cohomology", "Line-bundle cohomology per degree");
  cohomology->add_option("input", cfg.input)->required();
  cohomology->add_option("--divisor", cfg.divisor, "coefficients a_rho, comma separated");
  cohomology->add_option("--window", cfg.box_radius, "degree box radius")->check(radius_check);
  cohomology->add_flag("--cross-check", cfg.cross_check, "compare with the constructible side");
  cohomology->add_option("-o,--output", cfg.output);

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("input", cfg.input)->required();
  verify->add_option("--suite", cfg.checks, "comma separated checks, or all");
  verify->add_option("--jobs", cfg.jobs, "parallel checks")->check(CLI::Range(1u, 256u));
  verify->add_option("--window", cfg.window_radius, "hom translation radius")->check(radius_check);
  verify->add_option("-o,--output", cfg.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*validate) return cmd_validate(cfg);
    if (*skeleton) return cmd_skeleton(cfg);
    if (*homs) return cmd_homs(cfg);
    if (*cohomology) return cmd_cohomology(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
