#include "ccc/stacky_fan.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace ccc {

using nlohmann::json;

namespace {

IntMatrix rows_matrix(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

Rational frac(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - f;
}

RatVector frac(RatVector v) {
  for (auto& q : v) q = frac(q);
  return v;
}

IntVector int_vector(const json& j, std::size_t expected, const std::string& what) {
  if (!j.is_array() || j.size() != expected) throw InputError(what + " must be an integer array of length " + std::to_string(expected));
  IntVector v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InputError(what + " must contain integers");
    v.emplace_back(static_cast<long>(x.get<long long>()));
  }
  return v;
}

}  // namespace

IntVector StackyFan::apply_beta(const IntVector& l) const { return beta * l; }

StackyFan parse_stacky_fan(const json& j) {
  if (!j.is_object()) throw InputError("stacky fan must be a JSON object");
  for (const char* key : {"n_rank", "l_rank", "beta", "rays_hat", "cones_hat"})
    if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  StackyFan sf;
  sf.name = j.value("name", std::string());
  if (!j["n_rank"].is_number_unsigned() || !j["l_rank"].is_number_unsigned())
    throw InputError("n_rank and l_rank must be non-negative integers");
  sf.n_rank = j["n_rank"].get<std::size_t>();
  sf.l_rank = j["l_rank"].get<std::size_t>();
  const json& beta = j["beta"];
  if (!beta.is_array() || beta.size() != sf.n_rank) throw InputError("beta must have n_rank rows");
  sf.beta = IntMatrix(sf.n_rank, sf.l_rank);
  for (std::size_t i = 0; i < sf.n_rank; ++i) {
    IntVector row = int_vector(beta[i], sf.l_rank, "beta row");
    for (std::size_t k = 0; k < sf.l_rank; ++k) sf.beta(i, k) = row[k];
  }
  std::vector<IntVector> rays;
  if (!j["rays_hat"].is_array()) throw InputError("rays_hat must be an array");
  for (const auto& r : j["rays_hat"]) {
    IntVector v = int_vector(r, sf.l_rank, "ray");
    if (gcd_of(v) != 1) throw InputError("ray " + to_string(v) + " is zero or not primitive");
    rays.push_back(v);
  }
  std::vector<std::vector<std::size_t>> cones;
  if (!j["cones_hat"].is_array()) throw InputError("cones_hat must be an array");
  for (const auto& c : j["cones_hat"]) {
    if (!c.is_array()) throw InputError("each cone must be a list of ray indices");
    std::vector<std::size_t> ids;
    for (const auto& x : c) {
      if (!x.is_number_unsigned() || x.get<std::size_t>() >= rays.size()) throw InputError("cone refers to a missing ray");
      ids.push_back(x.get<std::size_t>());
    }
    cones.push_back(ids);
  }
  try {
    sf.sigma_hat = Fan(sf.l_rank, rays, cones);
  } catch (const LinalgError& e) {
    throw InputError(e.what());
  }
  return sf;
}

StackyFan load_stacky_fan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return parse_stacky_fan(j);
}

json to_json(const StackyFan& sf) {
  json j;
  j["name"] = sf.name;
  j["n_rank"] = sf.n_rank;
  j["l_rank"] = sf.l_rank;
  json beta = json::array();
  for (std::size_t i = 0; i < sf.n_rank; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < sf.l_rank; ++k) row.push_back(sf.beta(i, k).get_si());
    beta.push_back(row);
  }
  j["beta"] = beta;
  json rays = json::array();
  for (const auto& r : sf.sigma_hat.rays()) {
    json v = json::array();
    for (const auto& x : r) v.push_back(x.get_si());
    rays.push_back(v);
  }
  j["rays_hat"] = rays;
  json cones = json::array();
  for (auto m : sf.sigma_hat.maximal_cones()) cones.push_back(sf.sigma_hat.cones()[m]);
  j["cones_hat"] = cones;
  return j;
}

ValidationReport validate_condition1(StackyFan& sf) {
  ValidationReport rep;
  sf.validated = false;
  auto fail = [&](std::string clause, std::string msg, std::optional<std::pair<std::size_t, std::size_t>> pair = {}) {
    rep.valid = false;
    rep.failed_clause = std::move(clause);
    rep.message = std::move(msg);
    rep.offending_cones = pair;
    return rep;
  };
  const Fan& hat = sf.sigma_hat;

  if (cokernel(sf.beta).free_rank != 0) return fail("finite_cokernel", "beta does not have finite cokernel");
  rep.passed.push_back("finite_cokernel");

  if (auto err = hat.validate()) return fail("sigma_hat_is_fan", *err);
  rep.passed.push_back("sigma_hat_is_fan");

  for (std::size_t i = 0; i < hat.size(); ++i) {
    auto gens = hat.cone_rays(i);
    std::vector<IntVector> images;
    for (const auto& g : gens) images.push_back(sf.apply_beta(g));
    std::size_t image_rank = gens.empty() ? 0 : rank(to_rational(rows_matrix(images, sf.n_rank)));
    if (image_rank != hat.dim(i))
      return fail("injective_on_cones", "beta is not injective on span of cone " + hat.cone_label(i) +
                                            " (dimension " + std::to_string(hat.dim(i)) + " drops to " +
                                            std::to_string(image_rank) + ")",
                  std::make_pair(i, i));
  }
  rep.passed.push_back("injective_on_cones");

  std::vector<IntVector> rays;
  for (std::size_t r = 0; r < hat.rays().size(); ++r) {
    IntVector img = primitive(sf.apply_beta(hat.rays()[r]));
    for (std::size_t s = 0; s < rays.size(); ++s)
      if (rays[s] == img) {
        auto a = hat.index_of({s}), b = hat.index_of({r});
        return fail("rays_map_to_distinct_rays", "rays " + std::to_string(s) + " and " + std::to_string(r) + " have the same image",
                    std::make_pair(a.value_or(0), b.value_or(0)));
      }
    rays.push_back(img);
  }
  rep.passed.push_back("rays_map_to_distinct_rays");

  std::vector<Cone> images;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    std::vector<IntVector> gens;
    for (auto r : hat.cones()[i]) gens.push_back(rays[r]);
    images.emplace_back(sf.n_rank, gens);
  }
  for (std::size_t i = 0; i < hat.size(); ++i) {
    if (!images[i].is_strictly_convex())
      return fail("image_is_fan", "image of cone " + hat.cone_label(i) + " is not strictly convex", std::make_pair(i, i));
    for (std::size_t j = i + 1; j < hat.size(); ++j)
      if (relative_interiors_meet(images[i], images[j]))
        return fail("image_is_fan", "images of cones " + hat.cone_label(i) + " and " + hat.cone_label(j) + " overlap",
                    std::make_pair(i, j));
  }
  rep.passed.push_back("image_is_fan");

  std::vector<std::vector<std::size_t>> maximal;
  for (auto m : hat.maximal_cones()) maximal.push_back(hat.cones()[m]);
  Fan sigma(sf.n_rank, rays, maximal);
  if (sigma.size() != hat.size())
    return fail("poset_isomorphism", "derived fan has " + std::to_string(sigma.size()) + " cones, sigma-hat has " +
                                         std::to_string(hat.size()));
  std::vector<std::size_t> cone_map(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    auto idx = sigma.index_of(hat.cones()[i]);
    if (!idx) return fail("poset_isomorphism", "image of cone " + hat.cone_label(i) + " is not a cone of the derived fan", std::make_pair(i, i));
    cone_map[i] = *idx;
  }
  for (std::size_t i = 0; i < hat.size(); ++i)
    for (std::size_t j = 0; j < hat.size(); ++j)
      if (hat.is_face(i, j) != sigma.is_face(cone_map[i], cone_map[j]))
        return fail("poset_isomorphism", "face relation between " + hat.cone_label(i) + " and " + hat.cone_label(j) + " is not preserved",
                    std::make_pair(i, j));
  rep.passed.push_back("poset_isomorphism");

  for (std::size_t i = 0; i < hat.size(); ++i)
    if (hat.dim(i) != sigma.dim(cone_map[i]))
      return fail("dimension_preserved", "dimension of cone " + hat.cone_label(i) + " changes", std::make_pair(i, i));
  rep.passed.push_back("dimension_preserved");

  sf.sigma = std::move(sigma);
  sf.ray_map.resize(hat.rays().size());
  for (std::size_t r = 0; r < sf.ray_map.size(); ++r) sf.ray_map[r] = r;
  sf.cone_map = cone_map;
  sf.cone_map_inverse.assign(hat.size(), 0);
  for (std::size_t i = 0; i < hat.size(); ++i) sf.cone_map_inverse[cone_map[i]] = i;
  sf.validated = true;
  rep.valid = true;
  return rep;
}

std::size_t ConeStackData::coset_index(const RatVector& chi) const {
  auto coords = [&](const RatVector& x) {
    RatVector v;
    for (const auto& n : n_sigma_basis) v.push_back(frac(pairing(n, x)));
    return v;
  };
  RatVector v = coords(chi);
  for (std::size_t i = 0; i < representatives.size(); ++i)
    if (coords(representatives[i]) == v) return i;
  throw LinalgError("character " + to_string(chi) + " does not lie in M_{sigma,beta}");
}

bool ConeStackData::in_lattice(const RatVector& chi) const {
  for (std::size_t j = 0; j < l_sigma_basis.size(); ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < n_sigma_basis.size(); ++i) s += beta_coords(i, j) * pairing(n_sigma_basis[i], chi);
    if (s.get_den() != 1) return false;
  }
  return true;
}

ConeStackData compute_M_sigma_beta(const StackyFan& sf, std::size_t sigma) {
  if (!sf.validated) throw LinalgError("stacky fan has not been validated");
  ConeStackData out;
  out.cone = sigma;
  const std::size_t n = sf.n_rank;
  out.n_sigma_basis = saturated_span_basis(sf.sigma.cone_rays(sigma), n);
  out.l_sigma_basis = saturated_span_basis(sf.sigma_hat.cone_rays(sf.cone_map_inverse[sigma]), sf.l_rank);
  const std::size_t d = out.n_sigma_basis.size();
  if (out.l_sigma_basis.size() != d) throw LinalgError("beta changes the dimension of a cone");

  out.beta_coords = IntMatrix(d, d);
  RatMatrix P_t(n, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < n; ++k) P_t(k, i) = out.n_sigma_basis[i][k];
  for (std::size_t j = 0; j < d; ++j) {
    RatVector c;
    if (!solve(P_t, to_rational(sf.apply_beta(out.l_sigma_basis[j])), c)) throw LinalgError("beta image leaves span of sigma");
    for (std::size_t i = 0; i < d; ++i) {
      if (c[i].get_den() != 1) throw LinalgError("beta image is not integral in N_sigma");
      out.beta_coords(i, j) = c[i].get_num();
    }
  }

  // Characters m_i of M with <m_i, n_j> = delta_ij.
  IntMatrix lift(n, d);
  if (d > 0) {
    IntMatrix P(d, n);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < n; ++k) P(i, k) = out.n_sigma_basis[i][k];
    auto snf = smith_normal_form(P);
    IntMatrix Vd(n, d);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < d; ++i) Vd(k, i) = snf.V(k, i);
    lift = Vd * snf.U;
  }

  std::vector<Integer> factors;
  std::vector<RatVector> generators_v;
  if (d > 0) {
    auto snf = smith_normal_form(out.beta_coords.transposed());
    for (std::size_t i = 0; i < d; ++i) {
      const Integer& di = snf.D(i, i);
      if (di == 1) continue;
      factors.push_back(di);
      RatVector v(d);
      for (std::size_t k = 0; k < d; ++k) v[k] = Rational(snf.V(k, i)) / di;
      generators_v.push_back(v);
    }
  }
  out.coset_group = FiniteAbelianGroup(factors);
  out.elements = out.coset_group.elements();
  auto lift_chi = [&](const RatVector& v) {
    RatVector chi(n, 0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < d; ++i) chi[k] += lift(k, i) * v[i];
    return frac(chi);
  };
  for (const auto& e : out.elements) {
    RatVector v(d, 0);
    for (std::size_t g = 0; g < e.size(); ++g)
      for (std::size_t k = 0; k < d; ++k) v[k] += e[g] * generators_v[g][k];
    out.representatives.push_back(lift_chi(frac(v)));
  }
  std::vector<RatVector> lattice_gens;
  for (std::size_t k = 0; k < n; ++k) {
    RatVector e(n, 0);
    e[k] = 1;
    lattice_gens.push_back(e);
  }
  for (const auto& v : generators_v) lattice_gens.push_back(lift_chi(v));
  out.lattice = lattice_from_generators(lattice_gens, n);
  return out;
}

FiniteAbelianGroup compute_H_beta(const StackyFan& sf, std::size_t sigma) {
  if (!sf.validated) throw LinalgError("stacky fan has not been validated");
  const std::size_t n = sf.n_rank;
  auto n_basis = saturated_span_basis(sf.sigma.cone_rays(sigma), n);
  auto l_basis = saturated_span_basis(sf.sigma_hat.cone_rays(sf.cone_map_inverse[sigma]), sf.l_rank);
  if (n_basis.empty()) return FiniteAbelianGroup();
  std::vector<IntVector> images;
  for (const auto& l : l_basis) images.push_back(sf.apply_beta(l));
  IntMatrix nb(n_basis.size(), n);
  for (std::size_t i = 0; i < n_basis.size(); ++i)
    for (std::size_t k = 0; k < n; ++k) nb(i, k) = n_basis[i][k];
  RatMatrix nbt = to_rational(nb.transposed());
  IntMatrix coords(n_basis.size(), images.size());
  for (std::size_t j = 0; j < images.size(); ++j) {
    RatVector c;
    if (!solve(nbt, to_rational(images[j]), c)) throw LinalgError("beta image leaves span of sigma");
    for (std::size_t i = 0; i < c.size(); ++i) coords(i, j) = c[i].get_num();
  }
  return cokernel(coords).torsion;
}

bool SkeletonCell::base_contains(const RatVector& x) const {
  for (const auto& nvec : n_sigma_basis) {
    Rational s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) s += nvec[k] * (x[k] - chi[k]);
    if (s.get_den() != 1) return false;
  }
  return true;
}

Skeleton build_skeleton(const StackyFan& sf) {
  if (!sf.validated) throw LinalgError("stacky fan has not been validated");
  Skeleton sk;
  sk.m_rank = sf.n_rank;
  for (std::size_t s = 0; s < sf.sigma.size(); ++s) {
    auto data = compute_M_sigma_beta(sf, s);
    for (std::size_t c = 0; c < data.coset_count(); ++c) {
      SkeletonCell cell;
      cell.cone = s;
      cell.coset = data.elements[c];
      cell.chi = data.representatives[c];
      cell.perp_basis = sf.sigma.cone(s).equations();
      for (auto g : sf.sigma.cone_rays(s)) {
        for (auto& v : g) v = -v;
        cell.minus_sigma.push_back(g);
      }
      cell.n_sigma_basis = data.n_sigma_basis;
      sk.cells.push_back(std::move(cell));
    }
  }
  return sk;
}

json to_json(const Skeleton& s) {
  auto ints = [](const IntVector& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.get_si());
    return a;
  };
  auto vecs = [&](const std::vector<IntVector>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(ints(v));
    return a;
  };
  json cells = json::array();
  for (const auto& c : s.cells) {
    json chi = json::array();
    for (const auto& q : c.chi) chi.push_back(q.get_den() == 1 ? json(q.get_num().get_si()) : json(q.get_str()));
    json j;
    j["cone"] = c.cone;
    j["coset"] = ints(c.coset);
    j["chi"] = chi;
    j["perp_basis"] = vecs(c.perp_basis);
    j["minus_sigma"] = vecs(c.minus_sigma);
    cells.push_back(j);
  }
  json out;
  out["m_rank"] = s.m_rank;
  out["cells"] = cells;
  return out;
}
}  // namespace ccc
