#include <algorithm>
#include <set>

#include "ccc/polysheaf.hpp"
#include "sheaf_internal.hpp"

namespace ccc {

using namespace detail;

namespace {

std::vector<Hyperplane> with_window_lines(const Stratification& s) {
  std::vector<Hyperplane> lines = s.hyperplanes();
  const std::size_t n = s.ambient_dim();
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, 0);
    e[i] = 1;
    lines.push_back({e, s.window().lo[i]});
    lines.push_back({e, s.window().hi[i]});
  }
  return lines;
}

// Points where hyperplanes meet (n = 1: the hyperplanes themselves) inside the
// closed window.
std::vector<RatVector> vertices(const std::vector<Hyperplane>& lines, const Box& w) {
  std::set<RatVector> out;
  const std::size_t n = w.lo.size();
  auto inside = [&](const RatVector& x) {
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] < w.lo[i] || x[i] > w.hi[i]) return false;
    return true;
  };
  if (n == 1) {
    for (const auto& h : lines) {
      RatVector x{h.b / Rational(h.a[0])};
      if (inside(x)) out.insert(x);
    }
  } else {
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const auto& a = lines[i].a;
        const auto& b = lines[j].a;
        Integer det = a[0] * b[1] - a[1] * b[0];
        if (det == 0) continue;
        RatVector x{(lines[i].b * Rational(b[1]) - lines[j].b * Rational(a[1])) / Rational(det),
                    (Rational(a[0]) * lines[j].b - Rational(b[0]) * lines[i].b) / Rational(det)};
        if (inside(x)) out.insert(x);
      }
  }
  return {out.begin(), out.end()};
}

// Output positions r where the arrangement of fixed hyperplanes (for x) and
// moving hyperplanes (for r - x) changes combinatorial type.
std::vector<Hyperplane> discriminant(const Stratification& s1, const Stratification& s2) {
  auto l1 = with_window_lines(s1), l2 = with_window_lines(s2);
  auto v1 = vertices(l1, s1.window()), v2 = vertices(l2, s2.window());
  std::set<Hyperplane> out;
  if (s1.ambient_dim() == 1) {
    for (const auto& p : v1)
      for (const auto& q : v2) out.insert(Hyperplane::from({1}, p[0] + q[0]));
    return {out.begin(), out.end()};
  }
  for (const auto& v : v1)
    for (const auto& h : l2) {
      RatVector a = to_rational(h.a);
      out.insert(Hyperplane::from(a, h.b + dot(a, v)));
    }
  for (const auto& w : v2)
    for (const auto& h : l1) {
      RatVector a = to_rational(h.a);
      out.insert(Hyperplane::from(a, h.b + dot(a, w)));
    }
  for (const auto& h1 : l1)
    for (const auto& h2 : l2)
      if (h1.a == h2.a) out.insert(Hyperplane::from(to_rational(h1.a), h1.b + h2.b));
  return {out.begin(), out.end()};
}

struct FiberCell {
  std::vector<std::int8_t> ids;  // signs against the fixed then the moving hyperplanes
  std::size_t dim = 0;
  std::size_t cf = 0, cg = 0;
  std::size_t index = 0;  // stratum index in the fiber stratification
};

struct Fiber {
  std::vector<FiberCell> cells;  // only cells with nonzero coefficient complex
  PosetSheaf coefficients;
  CompactLayout layout;
  CochainComplex complex;
};

Fiber build_fiber(const PosetSheaf& f, const PosetSheaf& g, const RatVector& r) {
  const auto& s1 = f.stratification();
  const auto& s2 = g.stratification();
  const std::size_t n = s1.ambient_dim();
  Fiber fib;
  Box box{RatVector(n), RatVector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    box.lo[i] = std::max<Rational>(s1.window().lo[i], r[i] - s2.window().hi[i]);
    box.hi[i] = std::min<Rational>(s1.window().hi[i], r[i] - s2.window().lo[i]);
    if (!(box.lo[i] < box.hi[i])) return fib;
  }
  std::vector<Hyperplane> hs = s1.hyperplanes();
  for (const auto& h : s2.hyperplanes()) {
    RatVector a = to_rational(h.a);
    hs.push_back(Hyperplane::from(a, dot(a, r) - h.b));
  }
  auto strat = std::make_shared<const Stratification>(n, box, hs);
  PosetSheaf k(strat);
  std::vector<std::optional<std::size_t>> slot(strat->size());
  for (std::size_t i = 0; i < strat->size(); ++i) {
    const RatVector& x = strat->stratum(i).sample;
    RatVector y(n);
    for (std::size_t t = 0; t < n; ++t) y[t] = r[t] - x[t];
    auto cf = s1.locate(x);
    auto cg = s2.locate(y);
    if (!cf || !cg || f.stalk_is_zero(*cf) || g.stalk_is_zero(*cg)) continue;
    FiberCell c;
    for (const auto& h : s1.hyperplanes()) c.ids.push_back(static_cast<std::int8_t>(sgn(h.value(x))));
    for (const auto& h : s2.hyperplanes()) c.ids.push_back(static_cast<std::int8_t>(sgn(h.value(y))));
    c.dim = strat->stratum(i).dim;
    c.cf = *cf;
    c.cg = *cg;
    c.index = i;
    slot[i] = fib.cells.size();
    fib.cells.push_back(c);
    k.set_stalk(i, tensor_complex(f.stalk(*cf), g.stalk(*cg)));
  }
  std::vector<std::size_t> support;
  for (const auto& c : fib.cells) {
    support.push_back(c.index);
    for (auto up : strat->above(c.index)) {
      if (!slot[up]) continue;
      const auto& c2 = fib.cells[*slot[up]];
      for (const auto& [deg, d] : k.stalk(c.index).dims) {
        if (d == 0 || k.stalk(up).dim(deg) == 0) continue;
        k.set_map(c.index, up, deg,
                  tensor_map(f.stalk(c.cf), g.stalk(c.cg), f.stalk(c2.cf), g.stalk(c2.cg),
                             [&](int i) { return f.map(c.cf, c2.cf, i); }, [&](int j) { return g.map(c.cg, c2.cg, j); }, deg));
      }
    }
  }
  fib.layout = compact_layout(k, support);
  fib.complex = compact_complex(k, support, fib.layout);
  fib.coefficients = std::move(k);
  return fib;
}

bool compatible(const FiberCell& special, const FiberCell& generic) {
  if (special.dim != generic.dim) return false;
  for (std::size_t i = 0; i < special.ids.size(); ++i)
    if (special.ids[i] != 0 && special.ids[i] != generic.ids[i]) return false;
  return true;
}

}  // namespace

PosetSheaf convolve(const PosetSheaf& f, const PosetSheaf& g, const Box& output_window) {
  const auto& s1 = f.stratification();
  const auto& s2 = g.stratification();
  if (s1.window().lo != s2.window().lo || s1.window().hi != s2.window().hi)
    throw LinalgError("convolution needs both sheaves on the same window");
  auto out_strat = std::make_shared<const Stratification>(s1.ambient_dim(), output_window, discriminant(s1, s2));
  PosetSheaf out(out_strat);
  std::vector<Fiber> fibers;
  fibers.reserve(out_strat->size());
  for (std::size_t t = 0; t < out_strat->size(); ++t) {
    fibers.push_back(build_fiber(f, g, out_strat->stratum(t).sample));
    out.set_stalk(t, fibers.back().complex);
  }
  for (std::size_t t = 0; t < out_strat->size(); ++t) {
    const auto& a = fibers[t];
    if (a.cells.empty()) continue;
    for (auto u : out_strat->above(t)) {
      const auto& b = fibers[u];
      if (b.cells.empty()) continue;
      std::map<int, SparseMatrix> blocks;
      for (const auto& ca : a.cells)
        for (const auto& cb : b.cells) {
          if (!compatible(ca, cb)) continue;
          const auto& ka = a.coefficients.stalk(ca.index);
          const auto& kb = b.coefficients.stalk(cb.index);
          for (const auto& [deg, d] : ka.dims) {
            if (d == 0 || kb.dim(deg) == 0) continue;
            SparseMatrix m = tensor_map(f.stalk(ca.cf), g.stalk(ca.cg), f.stalk(cb.cf), g.stalk(cb.cg),
                                        [&](int i) { return f.map(ca.cf, cb.cf, i); },
                                        [&](int j) { return g.map(ca.cg, cb.cg, j); }, deg);
            const int total = static_cast<int>(ca.dim) + deg;
            auto it = blocks.find(total);
            if (it == blocks.end()) it = blocks.emplace(total, SparseMatrix(out.stalk(u).dim(total), out.stalk(t).dim(total))).first;
            const std::size_t ro = b.layout.offsets.at({cb.index, deg});
            const std::size_t co = a.layout.offsets.at({ca.index, deg});
            for (std::size_t r = 0; r < m.rows(); ++r)
              for (const auto& [c, v] : m.row(r)) it->second.add(ro + r, co + c, v);
          }
        }
      for (auto& [k, m] : blocks) out.set_map(t, u, k, std::move(m));
    }
  }
  return out;
}

PosetSheaf hom_star(const PosetSheaf& f, const PosetSheaf& g, const Box& output_window) {
  return convolve(g, verdier_dual(f).reflected(), output_window);
}

}  // namespace ccc
