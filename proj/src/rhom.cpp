#include <functional>
#include <map>
#include <tuple>

#include "ccc/polysheaf.hpp"

namespace ccc {

namespace {

using Chain = std::vector<std::uint32_t>;

struct Block {
  std::size_t chain;
  int j;  // degree in F(x0)
  int q;  // Hom degree
};

struct BlockPos {
  int degree;
  std::size_t offset;
};

}  // namespace

// Cochains of the normalized bar construction: for a chain x0 < ... < xp a map
// F(x0) -> G(xp) of degree q sits in total degree p + q, with
//   (delta phi)(x0..x_{p+1}) = G(xp -> x_{p+1}) phi(x0..xp)
//                              + sum_{0<i<=p} (-1)^i phi(.. x_i omitted ..)
//                              + (-1)^{p+1} phi(x1..x_{p+1}) F(x0 -> x1)
// and total differential delta + (-1)^p d_Hom.
CochainComplex rhom_complex(const PosetSheaf& f, const PosetSheaf& g) {
  if (f.stratification_ptr() != g.stratification_ptr()) {
    const auto& a = f.stratification();
    const auto& b = g.stratification();
    if (a.hyperplanes() != b.hyperplanes() || a.window().lo != b.window().lo || a.window().hi != b.window().hi)
      throw LinalgError("rhom needs a common stratification");
  }
  const auto& s = f.stratification();
  const std::size_t n = s.size();
  std::vector<bool> f_nonzero(n), g_nonzero(n);
  for (std::size_t i = 0; i < n; ++i) {
    f_nonzero[i] = !f.stalk_is_zero(i);
    g_nonzero[i] = !g.stalk_is_zero(i);
  }

  std::vector<Chain> chains;
  std::map<Chain, std::size_t> chain_id;
  std::function<void(Chain&)> extend = [&](Chain& c) {
    if (g_nonzero[c.back()]) {
      chain_id.emplace(c, chains.size());
      chains.push_back(c);
    }
    for (auto y : s.above(c.back())) {
      c.push_back(y);
      extend(c);
      c.pop_back();
    }
  };
  for (std::uint32_t x = 0; x < n; ++x)
    if (f_nonzero[x]) {
      Chain c{x};
      extend(c);
    }

  CochainComplex out;
  std::map<std::tuple<std::size_t, int, int>, BlockPos> blocks;
  std::vector<Block> block_list;
  for (std::size_t id = 0; id < chains.size(); ++id) {
    const auto& c = chains[id];
    const int p = static_cast<int>(c.size()) - 1;
    const auto& a = f.stalk(c.front());
    const auto& b = g.stalk(c.back());
    for (const auto& [j, da] : a.dims) {
      if (da == 0) continue;
      for (const auto& [k, db] : b.dims) {
        if (db == 0) continue;
        const int q = k - j;
        const int deg = p + q;
        blocks[{id, j, q}] = {deg, out.dims[deg]};
        block_list.push_back({id, j, q});
        out.dims[deg] += da * db;
      }
    }
  }

  std::map<int, SparseMatrix> d;
  for (const auto& [deg, dim] : out.dims) d[deg] = SparseMatrix(out.dim(deg + 1), dim);

  auto find_block = [&](const Chain& c, int j, int q) -> const BlockPos* {
    auto it = chain_id.find(c);
    if (it == chain_id.end()) return nullptr;
    auto jt = blocks.find({it->second, j, q});
    return jt == blocks.end() ? nullptr : &jt->second;
  };

  for (const auto& blk : block_list) {
    const Chain& c = chains[blk.chain];
    const int p = static_cast<int>(c.size()) - 1;
    const int j = blk.j, q = blk.q;
    const BlockPos& here = blocks.at({blk.chain, j, q});
    auto& m = d[here.degree];
    const std::size_t x0 = c.front(), xp = c.back();
    const std::size_t da = f.stalk(x0).dim(j), db = g.stalk(xp).dim(j + q);
    auto col = [&](std::size_t a, std::size_t b) { return here.offset + a * db + b; };

    // Append y above xp: G(xp -> y) after phi.
    for (auto y : s.above(xp)) {
      if (!g_nonzero[y]) continue;
      Chain c2 = c;
      c2.push_back(y);
      const BlockPos* t = find_block(c2, j, q);
      if (!t) continue;
      SparseMatrix gm = g.map(xp, y, j + q);
      const std::size_t db2 = gm.rows();
      for (std::size_t r = 0; r < gm.rows(); ++r)
        for (const auto& [b, v] : gm.row(r))
          for (std::size_t a = 0; a < da; ++a) m.add(t->offset + a * db2 + r, col(a, b), v);
    }
    // Insert y between positions i-1 and i.
    for (int i = 1; i <= p; ++i) {
      const std::int64_t sign = i % 2 == 0 ? 1 : -1;
      for (auto y : s.above(c[i - 1])) {
        if (y == c[i] || !s.leq(y, c[i])) continue;
        Chain c2 = c;
        c2.insert(c2.begin() + i, y);
        const BlockPos* t = find_block(c2, j, q);
        if (!t) continue;
        for (std::size_t a = 0; a < da; ++a)
          for (std::size_t b = 0; b < db; ++b) m.add(t->offset + a * db + b, col(a, b), sign);
      }
    }
    // Prepend y below x0: phi after F(y -> x0).
    {
      const std::int64_t sign = (p + 1) % 2 == 0 ? 1 : -1;
      for (auto y : s.below(x0)) {
        if (!f_nonzero[y]) continue;
        Chain c2 = c;
        c2.insert(c2.begin(), y);
        const BlockPos* t = find_block(c2, j, q);
        if (!t) continue;
        SparseMatrix fm = f.map(y, x0, j);
        for (std::size_t a = 0; a < fm.rows(); ++a)
          for (const auto& [a2, v] : fm.row(a))
            for (std::size_t b = 0; b < db; ++b) m.add(t->offset + a2 * db + b, col(a, b), sign * v);
      }
    }
    // (-1)^p d_Hom phi = (-1)^p (d_G phi - (-1)^q phi d_F).
    const std::int64_t sp = p % 2 == 0 ? 1 : -1;
    if (const BlockPos* t = find_block(c, j, q + 1)) {
      SparseMatrix dg = g.stalk(xp).differential(j + q);
      const std::size_t db2 = dg.rows();
      for (std::size_t r = 0; r < dg.rows(); ++r)
        for (const auto& [b, v] : dg.row(r))
          for (std::size_t a = 0; a < da; ++a) m.add(t->offset + a * db2 + r, col(a, b), sp * v);
    }
    if (const BlockPos* t = find_block(c, j - 1, q + 1)) {
      const std::int64_t sign = -sp * (q % 2 == 0 ? 1 : -1);
      SparseMatrix df = f.stalk(x0).differential(j - 1);
      // (phi d_F)(a2) = sum_a phi(a) dF(a, a2)
      for (std::size_t a = 0; a < df.rows(); ++a)
        for (const auto& [a2, v] : df.row(a))
          for (std::size_t b = 0; b < db; ++b) m.add(t->offset + a2 * db + b, col(a, b), sign * v);
    }
  }
  for (auto& [deg, mat] : d)
    if (!mat.is_zero()) out.d[deg] = std::move(mat);
  return out;
}

std::map<int, std::size_t> rhom(const PosetSheaf& f, const PosetSheaf& g) { return cohomology_dims(rhom_complex(f, g)); }

std::map<int, std::size_t> global_sections(const PosetSheaf& f) {
  PosetSheaf one = indicator_sheaf(LCPolyhedron::whole(f.stratification().ambient_dim()), 0, f.stratification_ptr());
  return rhom(one, f);
}

}  // namespace ccc
