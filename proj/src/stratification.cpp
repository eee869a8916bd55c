#include "ccc/stratification.hpp"

#include <algorithm>
#include <set>

namespace ccc {

namespace {

std::int8_t sign_of(const Rational& q) { return static_cast<std::int8_t>(sgn(q)); }

bool inside_open(const Box& w, const RatVector& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(w.lo[i] < x[i] && x[i] < w.hi[i])) return false;
  return true;
}

bool inside_closed(const Box& w, const RatVector& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < w.lo[i] || x[i] > w.hi[i]) return false;
  return true;
}

// The hyperplane passes through the open box: the affine functional takes both
// signs at the corners.
bool meets_open(const Box& w, const Hyperplane& h) {
  const std::size_t n = w.lo.size();
  bool neg = false, pos = false;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    RatVector corner(n);
    for (std::size_t i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? w.hi[i] : w.lo[i];
    int s = sgn(h.value(corner));
    neg = neg || s < 0;
    pos = pos || s > 0;
  }
  return neg && pos;
}

ConstraintSystem window_constraints(const Box& w) {
  ConstraintSystem sys;
  const std::size_t n = w.lo.size();
  for (std::size_t i = 0; i < n; ++i) {
    RatVector e(n, 0);
    e[i] = 1;
    sys.push_back(gt(e, w.lo[i]));
    e[i] = -1;
    sys.push_back(gt(e, -w.hi[i]));
  }
  return sys;
}

std::vector<RatVector> candidate_points_1d(const Box& w, const std::vector<Hyperplane>& hs) {
  std::set<Rational> cuts{w.lo[0], w.hi[0]};
  for (const auto& h : hs) {
    Rational x = h.b / Rational(h.a[0]);
    if (w.lo[0] < x && x < w.hi[0]) cuts.insert(x);
  }
  std::vector<Rational> sorted(cuts.begin(), cuts.end());
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && i + 1 < sorted.size()) out.push_back({sorted[i]});
    if (i + 1 < sorted.size()) out.push_back({(sorted[i] + sorted[i + 1]) / 2});
  }
  return out;
}

std::vector<RatVector> candidate_points_2d(const Box& w, const std::vector<Hyperplane>& hs) {
  std::vector<Hyperplane> lines = hs;
  for (std::size_t i = 0; i < 2; ++i) {
    IntVector e(2, 0);
    e[i] = 1;
    lines.push_back({e, w.lo[i]});
    lines.push_back({e, w.hi[i]});
  }
  std::vector<RatVector> out;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto& l = lines[li];
    const bool boundary = li >= hs.size();
    RatVector a = to_rational(l.a);
    RatVector u{-a[1], a[0]};
    RatVector p0 = a[0] != 0 ? RatVector{l.b / a[0], 0} : RatVector{0, l.b / a[1]};
    std::set<Rational> ts;
    for (const auto& h : lines) {
      RatVector ah = to_rational(h.a);
      Rational s = dot(ah, u);
      if (s == 0) continue;
      ts.insert((h.b - dot(ah, p0)) / s);
    }
    std::vector<Rational> sorted(ts.begin(), ts.end());
    auto at = [&](const Rational& t) { return RatVector{p0[0] + t * u[0], p0[1] + t * u[1]}; };
    for (const auto& t : sorted) {
      RatVector p = at(t);
      if (inside_open(w, p)) out.push_back(p);
    }
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      RatVector mid = at((sorted[i] + sorted[i + 1]) / 2);
      if (!inside_closed(w, mid)) continue;
      if (!boundary && inside_open(w, mid)) out.push_back(mid);
      // Step off the segment along the normal, staying clear of every other line.
      Rational delta = -1;
      for (const auto& h : lines) {
        RatVector ah = to_rational(h.a);
        Rational rate = dot(ah, a);
        Rational gap = dot(ah, mid) - h.b;
        if (rate == 0 || gap == 0) continue;
        Rational bound = abs(gap) / (2 * abs(rate));
        if (delta < 0 || bound < delta) delta = bound;
      }
      if (delta < 0) delta = 1;
      for (int s : {1, -1}) {
        RatVector p{mid[0] + s * delta * a[0], mid[1] + s * delta * a[1]};
        if (inside_open(w, p)) out.push_back(p);
      }
    }
  }
  return out;
}

}  // namespace

Rational Hyperplane::value(const RatVector& x) const {
  Rational v = -b;
  for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * x[i];
  return v;
}

Hyperplane Hyperplane::from(const RatVector& a, const Rational& b) {
  IntVector p = primitive(a);
  if (std::all_of(p.begin(), p.end(), [](const Integer& z) { return z == 0; }))
    throw LinalgError("hyperplane with zero normal");
  for (const auto& z : p)
    if (z != 0) {
      if (z < 0)
        for (auto& y : p) y = -y;
      break;
    }
  // p = t * a for a rational t; recover t from any nonzero coordinate.
  Rational t = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) {
      t = Rational(p[i]) / a[i];
      break;
    }
  Rational bb = b * t;
  bb.canonicalize();
  return {p, bb};
}

LCPolyhedron LCPolyhedron::whole(std::size_t n) { return {n, {}}; }

LCPolyhedron LCPolyhedron::from_cone(const Cone& c, const RatVector& shift, bool open) {
  return {c.ambient_dim(), translated_cone(c, shift, open)};
}

std::vector<Hyperplane> LCPolyhedron::hyperplanes() const {
  std::set<Hyperplane> hs;
  for (const auto& row : constraints)
    if (std::any_of(row.a.begin(), row.a.end(), [](const Rational& q) { return q != 0; })) hs.insert(Hyperplane::from(row.a, row.b));
  return {hs.begin(), hs.end()};
}

LCPolyhedron LCPolyhedron::translated(const RatVector& m) const {
  LCPolyhedron p = *this;
  for (auto& row : p.constraints) row.b += dot(row.a, m);
  return p;
}

LCPolyhedron LCPolyhedron::reflected() const {
  LCPolyhedron p = *this;
  for (auto& row : p.constraints)
    for (auto& q : row.a) q = -q;
  return p;
}

LCPolyhedron LCPolyhedron::toggled() const {
  LCPolyhedron p = *this;
  for (auto& row : p.constraints) {
    if (row.rel == Relation::GE)
      row.rel = Relation::GT;
    else if (row.rel == Relation::GT)
      row.rel = Relation::GE;
  }
  return p;
}

LCPolyhedron LCPolyhedron::intersect(const LCPolyhedron& other) const {
  LCPolyhedron p = *this;
  p.constraints.insert(p.constraints.end(), other.constraints.begin(), other.constraints.end());
  return p;
}

Stratification::Stratification(std::size_t n, Box window, std::vector<Hyperplane> hyperplanes)
    : n_(n), window_(std::move(window)) {
  if (n != 1 && n != 2) throw LinalgError("stratifications are implemented in ambient dimension 1 and 2");
  for (std::size_t i = 0; i < n; ++i)
    if (!(window_.lo[i] < window_.hi[i])) throw LinalgError("empty window");
  std::set<Hyperplane> unique;
  for (auto& h : hyperplanes)
    if (meets_open(window_, h)) unique.insert(h);
  hyperplanes_.assign(unique.begin(), unique.end());

  auto points = n == 1 ? candidate_points_1d(window_, hyperplanes_) : candidate_points_2d(window_, hyperplanes_);
  std::map<std::vector<std::int8_t>, RatVector> found;
  for (const auto& p : points) found.emplace(sign_vector(p), p);
  for (const auto& [signs, p] : found) {
    std::size_t zeros = static_cast<std::size_t>(std::count(signs.begin(), signs.end(), 0));
    strata_.push_back({signs, zeros >= n ? 0 : n - zeros, p});
  }
  std::stable_sort(strata_.begin(), strata_.end(), [](const Stratum& a, const Stratum& b) { return a.dim < b.dim; });
  build_order();
}

void Stratification::build_order() {
  by_signs_.clear();
  for (std::size_t i = 0; i < strata_.size(); ++i) by_signs_[strata_[i].signs] = i;
  above_.assign(strata_.size(), {});
  below_.assign(strata_.size(), {});
  for (std::size_t i = 0; i < strata_.size(); ++i)
    for (std::size_t j = 0; j < strata_.size(); ++j)
      if (i != j && leq(i, j)) {
        above_[i].push_back(static_cast<std::uint32_t>(j));
        below_[j].push_back(static_cast<std::uint32_t>(i));
      }
}

bool Stratification::leq(std::size_t i, std::size_t j) const {
  const auto& a = strata_[i].signs;
  const auto& b = strata_[j].signs;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0 && a[k] != b[k]) return false;
  return true;
}

std::vector<std::int8_t> Stratification::sign_vector(const RatVector& x) const {
  std::vector<std::int8_t> s;
  s.reserve(hyperplanes_.size());
  for (const auto& h : hyperplanes_) s.push_back(sign_of(h.value(x)));
  return s;
}

std::optional<std::size_t> Stratification::locate(const RatVector& x) const {
  if (!inside_open(window_, x)) return std::nullopt;
  auto it = by_signs_.find(sign_vector(x));
  if (it == by_signs_.end()) throw LinalgError("point of the window outside every stratum");
  return it->second;
}

ConstraintSystem Stratification::constraints(std::size_t i) const {
  ConstraintSystem sys;
  for (std::size_t k = 0; k < hyperplanes_.size(); ++k) {
    RatVector a = to_rational(hyperplanes_[k].a);
    const Rational& b = hyperplanes_[k].b;
    switch (strata_[i].signs[k]) {
      case 0: sys.push_back(eq(a, b)); break;
      case 1: sys.push_back(gt(a, b)); break;
      default:
        for (auto& q : a) q = -q;
        sys.push_back(gt(a, -b));
    }
  }
  return sys;
}

bool Stratification::adapted(const LCPolyhedron& p) const {
  auto hs = p.hyperplanes();
  if (std::all_of(hs.begin(), hs.end(), [&](const Hyperplane& h) {
        return !meets_open(window_, h) || std::binary_search(hyperplanes_.begin(), hyperplanes_.end(), h);
      }))
    return true;
  const auto win = window_constraints(window_);
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    bool in = p.contains(strata_[i].sample);
    auto cell = constraints(i);
    cell.insert(cell.end(), win.begin(), win.end());
    for (const auto& row : p.constraints) {
      // Points of the cell violating this row.
      std::vector<Constraint> violations;
      RatVector neg = row.a;
      for (auto& q : neg) q = -q;
      if (row.rel == Relation::GE) violations.push_back(gt(neg, -row.b));
      if (row.rel == Relation::GT) violations.push_back(ge(neg, -row.b));
      if (row.rel == Relation::EQ) {
        violations.push_back(gt(row.a, row.b));
        violations.push_back(gt(neg, -row.b));
      }
      for (const auto& v : violations) {
        auto sys = cell;
        sys.push_back(v);
        if (in && fm_feasible(sys, n_)) return false;
      }
    }
    if (!in) {
      auto sys = cell;
      sys.insert(sys.end(), p.constraints.begin(), p.constraints.end());
      if (fm_feasible(sys, n_)) return false;
    }
  }
  return true;
}

std::vector<std::size_t> Stratification::coarsening_map(const Stratification& finer) const {
  if (finer.window_.lo != window_.lo || finer.window_.hi != window_.hi)
    throw LinalgError("coarsening map needs identical windows");
  for (const auto& h : hyperplanes_)
    if (!std::binary_search(finer.hyperplanes_.begin(), finer.hyperplanes_.end(), h))
      throw LinalgError("stratification is not a refinement");
  std::vector<std::size_t> out;
  for (const auto& s : finer.strata_) out.push_back(*locate(s.sample));
  return out;
}

Stratification Stratification::reflected() const {
  Stratification r;
  r.n_ = n_;
  r.window_ = Box{window_.hi, window_.lo};
  for (auto& q : r.window_.lo) q = -q;
  for (auto& q : r.window_.hi) q = -q;
  for (const auto& h : hyperplanes_) r.hyperplanes_.push_back({h.a, -h.b});
  // Hyperplanes stay sorted by normal; resort only to restore the order of offsets.
  std::vector<std::size_t> perm(hyperplanes_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) { return r.hyperplanes_[x] < r.hyperplanes_[y]; });
  std::vector<Hyperplane> sorted;
  for (auto k : perm) sorted.push_back(r.hyperplanes_[k]);
  r.hyperplanes_ = sorted;
  for (const auto& s : strata_) {
    Stratum t;
    t.dim = s.dim;
    for (auto k : perm) t.signs.push_back(static_cast<std::int8_t>(-s.signs[k]));
    t.sample = s.sample;
    for (auto& q : t.sample) q = -q;
    r.strata_.push_back(std::move(t));
  }
  r.build_order();
  return r;
}

StratificationPtr refine_arrangement(const std::vector<LCPolyhedron>& polys, const Box& window,
                                     const std::vector<Hyperplane>& extra) {
  if (window.lo.empty()) throw LinalgError("refine_arrangement needs a window");
  std::vector<Hyperplane> hs = extra;
  for (const auto& p : polys)
    for (auto& h : p.hyperplanes()) hs.push_back(h);
  return std::make_shared<const Stratification>(window.lo.size(), window, hs);
}

}  // namespace ccc
