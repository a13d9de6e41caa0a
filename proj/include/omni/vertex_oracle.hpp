#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "omni/simplex.hpp"

namespace omni {

inline constexpr int kOracleMaxVars = 12;

struct VertexEnumeration {
  /// Every vertex of {x >= 0 : rows}, as exact points.
  std::vector<std::vector<Rational>> vertices;
  /// Extreme directions of the recession cone.
  std::vector<std::vector<Rational>> rays;
};

namespace detail {

class ZeroSet {
 public:
  explicit ZeroSet(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool subset_of(const ZeroSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  friend ZeroSet operator&(ZeroSet a, const ZeroSet& b) {
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] &= b.words_[i];
    return a;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct ConeRay {
  std::vector<Rational> coords;
  ZeroSet zeros;
};

inline void normalize(std::vector<Rational>& v) {
  for (const auto& c : v) {
    if (sgn(c) != 0) {
      const Rational scale = abs(c);
      for (auto& x : v) x /= scale;
      return;
    }
  }
}

/// Drops rows implied by x >= 0 alone (nonnegative coefficients, rhs <= 0)
/// and inequality rows dominated by another inequality row. Neither changes
/// the feasible set.
inline std::vector<LinearProgram::Row> essential_rows(const LinearProgram& lp) {
  using Sense = LinearProgram::Sense;
  std::vector<std::vector<Rational>> dense;
  std::vector<const LinearProgram::Row*> src;
  for (const auto& row : lp.rows) {
    std::vector<Rational> a(static_cast<std::size_t>(lp.num_vars), Rational(0));
    for (const auto& t : row.terms) a[static_cast<std::size_t>(t.var)] += t.coef;
    bool nonneg = true;
    for (const auto& c : a) nonneg = nonneg && sgn(c) >= 0;
    if (row.sense == Sense::GreaterEqual && nonneg && sgn(row.rhs) <= 0) continue;
    dense.push_back(std::move(a));
    src.push_back(&row);
  }
  // Row q implies row r when both are >=, a_r >= a_q entrywise and rhs_r <= rhs_q.
  auto implies = [&](std::size_t q, std::size_t r) {
    if (src[q]->sense != Sense::GreaterEqual || src[r]->sense != Sense::GreaterEqual) return false;
    if (src[r]->rhs > src[q]->rhs) return false;
    for (std::size_t j = 0; j < dense[r].size(); ++j)
      if (dense[r][j] < dense[q][j]) return false;
    return true;
  };
  std::vector<LinearProgram::Row> out;
  for (std::size_t r = 0; r < dense.size(); ++r) {
    bool redundant = false;
    for (std::size_t q = 0; q < dense.size() && !redundant; ++q) {
      if (q == r || !implies(q, r)) continue;
      // Identical rows imply each other; keep the first copy only.
      redundant = !implies(r, q) || q < r;
    }
    if (!redundant) out.push_back(*src[r]);
  }
  return out;
}

}  // namespace detail

/// Enumerates all vertices and extreme rays of {x >= 0 : rows} with the
/// double description method on the homogenised cone {(x, t) >= 0 :
/// a·x - b t >= 0 (or = 0)}. Vertices are the extreme rays with t > 0.
inline VertexEnumeration enumerate_vertices(const LinearProgram& lp) {
  lp.validate();
  if (lp.num_vars > kOracleMaxVars)
    throw Error(ErrorCode::TooLarge, "vertex enumeration is capped at " + std::to_string(kOracleMaxVars) + " variables");
  using detail::ConeRay;
  using detail::ZeroSet;

  const auto rows = detail::essential_rows(lp);
  const std::size_t dim = static_cast<std::size_t>(lp.num_vars) + 1;  // last coordinate is t
  const std::size_t total = dim + rows.size();

  std::vector<ConeRay> rays;
  for (std::size_t j = 0; j < dim; ++j) {
    ConeRay r{std::vector<Rational>(dim, Rational(0)), ZeroSet(total)};
    r.coords[j] = 1;
    for (std::size_t b = 0; b < dim; ++b)
      if (b != j) r.zeros.set(b);
    rays.push_back(std::move(r));
  }

  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto& row = rows[ri];
    const std::size_t cid = dim + ri;
    std::vector<Rational> h(dim, Rational(0));
    for (const auto& t : row.terms) h[static_cast<std::size_t>(t.var)] += t.coef;
    h[dim - 1] = -row.rhs;

    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<ConeRay> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      Rational v = 0;
      for (std::size_t j = 0; j < dim; ++j)
        if (sgn(h[j]) != 0) v += h[j] * rays[r].coords[j];
      const int s = sgn(v);
      if (s > 0) pos.push_back(r);
      if (s < 0) neg.push_back(r);
      if (s == 0) {
        ConeRay kept = rays[r];
        kept.zeros.set(cid);
        next.push_back(std::move(kept));
      }
      val[r] = std::move(v);
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        ZeroSet common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < dim) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o)
          if (o != p && o != q && common.subset_of(rays[o].zeros)) adjacent = false;
        if (!adjacent) continue;
        ConeRay fresh{std::vector<Rational>(dim), common};
        for (std::size_t j = 0; j < dim; ++j)
          fresh.coords[j] = val[p] * rays[q].coords[j] - val[q] * rays[p].coords[j];
        detail::normalize(fresh.coords);
        fresh.zeros.set(cid);
        next.push_back(std::move(fresh));
      }
    }
    if (row.sense == LinearProgram::Sense::GreaterEqual)
      for (std::size_t p : pos) next.push_back(std::move(rays[p]));
    rays = std::move(next);
  }

  VertexEnumeration out;
  for (auto& r : rays) {
    const Rational t = r.coords[dim - 1];
    r.coords.pop_back();
    if (sgn(t) > 0) {
      for (auto& c : r.coords) c /= t;
      out.vertices.push_back(std::move(r.coords));
    } else {
      out.rays.push_back(std::move(r.coords));
    }
  }
  return out;
}

/// Minimum of the program found by enumerating every vertex. Shares no code
/// with simplex_min and is meant only as a test oracle on small programs.
inline Rational vertex_oracle(const LinearProgram& lp) {
  const auto en = enumerate_vertices(lp);
  if (en.vertices.empty()) throw Error(ErrorCode::Infeasible, "polyhedron has no vertex");
  for (const auto& d : en.rays)
    if (sgn(lp.objective_value(d)) < 0) throw Error(ErrorCode::Unbounded, "objective decreases along a ray");
  std::optional<Rational> best;
  for (const auto& v : en.vertices) {
    Rational val = lp.objective_value(v);
    if (!best || val < *best) best = std::move(val);
  }
  return *best;
}

}  // namespace omni
