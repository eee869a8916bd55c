#include "ccc/polyhedron.hpp"

#include <map>

namespace ccc {

namespace {

Rational dot_prefix(const RatVector& a, const RatVector& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += a[i] * x[i];
  return s;
}

// Scales so that the first nonzero coefficient has absolute value one.
Constraint normalized(Constraint c) {
  for (const auto& v : c.a) {
    if (v == 0) continue;
    Rational s = abs(v);
    for (auto& w : c.a) w /= s;
    c.b /= s;
    if (c.rel == Relation::EQ && v < 0) {
      for (auto& w : c.a) w = -w;
      c.b = -c.b;
    }
    break;
  }
  return c;
}

bool is_constant(const Constraint& c) {
  for (const auto& v : c.a)
    if (v != 0) return false;
  return true;
}

bool constant_holds(const Constraint& c) {
  switch (c.rel) {
    case Relation::GE: return 0 >= c.b;
    case Relation::GT: return 0 > c.b;
    case Relation::EQ: return c.b == 0;
  }
  return false;
}

// Drops tautologies and duplicates; returns false if a constant row fails.
bool simplify(ConstraintSystem& sys) {
  std::map<std::pair<std::vector<Rational>, int>, Constraint> seen;
  ConstraintSystem out;
  for (auto c : sys) {
    c = normalized(std::move(c));
    if (is_constant(c)) {
      if (!constant_holds(c)) return false;
      continue;
    }
    auto key = std::make_pair(c.a, c.rel == Relation::EQ ? 1 : 0);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, c);
      continue;
    }
    Constraint& old = it->second;
    if (c.rel == Relation::EQ) {
      if (old.b != c.b) return false;
    } else if (c.b > old.b || (c.b == old.b && c.rel == Relation::GT)) {
      old = c;
    }
  }
  for (auto& [k, c] : seen) out.push_back(std::move(c));
  sys = std::move(out);
  return true;
}

Constraint drop_last(const Constraint& c) {
  Constraint r = c;
  r.a.pop_back();
  return r;
}

// Eliminates the last variable; records what is needed for back substitution.
struct Elimination {
  std::optional<Constraint> equation;  // set when the variable was solved from an equality
  ConstraintSystem bounds;             // rows involving the variable otherwise
};

ConstraintSystem eliminate_last(ConstraintSystem sys, std::size_t n, Elimination& record) {
  std::size_t v = n - 1;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (sys[i].rel != Relation::EQ || sys[i].a[v] == 0) continue;
    Constraint e = sys[i];
    record.equation = e;
    ConstraintSystem out;
    for (std::size_t j = 0; j < sys.size(); ++j) {
      if (j == i) continue;
      Constraint c = sys[j];
      if (c.a[v] != 0) {
        Rational f = c.a[v] / e.a[v];
        for (std::size_t k = 0; k < n; ++k) c.a[k] -= f * e.a[k];
        c.b -= f * e.b;
      }
      out.push_back(drop_last(c));
    }
    return out;
  }
  ConstraintSystem lower, upper, out;
  for (const auto& c : sys) {
    if (c.a[v] > 0)
      lower.push_back(c);
    else if (c.a[v] < 0)
      upper.push_back(c);
    else
      out.push_back(drop_last(c));
  }
  record.bounds = lower;
  record.bounds.insert(record.bounds.end(), upper.begin(), upper.end());
  for (const auto& l : lower)
    for (const auto& u : upper) {
      Rational fl = -u.a[v], fu = l.a[v];
      Constraint c;
      c.a.resize(v);
      for (std::size_t k = 0; k < v; ++k) c.a[k] = fl * l.a[k] + fu * u.a[k];
      c.b = fl * l.b + fu * u.b;
      c.rel = (l.rel == Relation::GT || u.rel == Relation::GT) ? Relation::GT : Relation::GE;
      out.push_back(std::move(c));
    }
  return out;
}

Rational back_substitute(const Elimination& rec, const RatVector& prefix) {
  std::size_t v = prefix.size();
  if (rec.equation) {
    const auto& e = *rec.equation;
    return (e.b - dot_prefix(e.a, prefix)) / e.a[v];
  }
  std::optional<Rational> lo, hi;
  for (const auto& c : rec.bounds) {
    Rational bound = (c.b - dot_prefix(c.a, prefix)) / c.a[v];
    if (c.a[v] > 0) {
      if (!lo || bound > *lo) lo = bound;
    } else {
      if (!hi || bound < *hi) hi = bound;
    }
  }
  if (lo && hi) return *lo == *hi ? *lo : (*lo + *hi) / 2;
  if (lo) return *lo + 1;
  if (hi) return *hi - 1;
  return 0;
}

}  // namespace

bool Constraint::satisfied_by(const RatVector& x) const {
  Rational s = dot(a, x);
  switch (rel) {
    case Relation::GE: return s >= b;
    case Relation::GT: return s > b;
    case Relation::EQ: return s == b;
  }
  return false;
}

Constraint ge(RatVector a, Rational b) { return {std::move(a), std::move(b), Relation::GE}; }
Constraint gt(RatVector a, Rational b) { return {std::move(a), std::move(b), Relation::GT}; }
Constraint eq(RatVector a, Rational b) { return {std::move(a), std::move(b), Relation::EQ}; }

std::optional<RatVector> fm_sample_point(const ConstraintSystem& system, std::size_t dim) {
  for (const auto& c : system)
    if (c.a.size() != dim) throw LinalgError("constraint dimension mismatch");
  std::vector<Elimination> records(dim);
  ConstraintSystem sys = system;
  for (std::size_t n = dim; n > 0; --n) {
    if (!simplify(sys)) return std::nullopt;
    sys = eliminate_last(std::move(sys), n, records[n - 1]);
  }
  if (!simplify(sys)) return std::nullopt;
  RatVector x;
  for (std::size_t n = 0; n < dim; ++n) x.push_back(back_substitute(records[n], x));
  if (!satisfies_all(system, x)) throw LinalgError("Fourier-Motzkin back substitution failed");
  return x;
}

bool fm_feasible(const ConstraintSystem& system, std::size_t dim) { return fm_sample_point(system, dim).has_value(); }

ConstraintSystem fm_project(const ConstraintSystem& system, std::size_t dim, std::size_t keep) {
  ConstraintSystem sys = system;
  for (std::size_t n = dim; n > keep; --n) {
    if (!simplify(sys)) {
      ConstraintSystem infeasible{ge(RatVector(keep, 0), 1)};
      return infeasible;
    }
    Elimination rec;
    sys = eliminate_last(std::move(sys), n, rec);
  }
  simplify(sys);
  return sys;
}

bool satisfies_all(const ConstraintSystem& system, const RatVector& x) {
  for (const auto& c : system)
    if (!c.satisfied_by(x)) return false;
  return true;
}

}  // namespace ccc
