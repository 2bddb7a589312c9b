#pragma once

// Brute-force reference computations used only by the tests. They take
// deliberately different routes from the library code they check.

#include <lattice_gp/combinatorics.hpp>
#include <lattice_gp/geometry.hpp>
#include <lattice_gp/integer.hpp>
#include <lattice_gp/linalg.hpp>
#include <lattice_gp/point_set.hpp>

#include <optional>
#include <random>
#include <set>
#include <vector>

namespace lgp::oracle {

// Laplace expansion along the first row.
inline Integer laplace_det(const Matrix<Integer>& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Integer total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    Matrix<Integer> minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, o = 0; c < n; ++c)
        if (c != j) minor(r - 1, o++) = m(r, c);
    const Integer term = m(0, j) * laplace_det(minor);
    total += (j % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

// Circumcenter of d+1 points from the equidistance equations
// 2 <p_i - p_0, c> = |p_i|^2 - |p_0|^2; nullopt when degenerate.
inline std::optional<std::vector<Rational>> circumcenter(const std::vector<LatticePoint>& pts) {
  const std::size_t d = pts.front().dim();
  Matrix<Rational> a(d, d);
  std::vector<Rational> b(d);
  for (std::size_t i = 1; i <= d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i - 1, j) = 2 * (pts[i][j] - pts[0][j]);
    b[i - 1] = pts[i].squared_norm() - pts[0].squared_norm();
  }
  return solve_full_column_rank(a, b);
}

inline Rational squared_distance(const std::vector<Rational>& c, const LatticePoint& p) {
  Rational s = 0;
  for (std::size_t j = 0; j < c.size(); ++j) s += (c[j] - p[j]) * (c[j] - p[j]);
  return s;
}

// Affine rank of a point list: rank of the difference vectors.
inline std::size_t affine_rank(const std::vector<LatticePoint>& pts) {
  if (pts.size() <= 1) return 0;
  Matrix<Integer> m(pts.size() - 1, pts.front().dim());
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.front().dim(); ++j) m(i - 1, j) = pts[i][j] - pts[0][j];
  return bareiss_rank(m);
}

// All (d+2)-index tuples of ps that are cospherical or cohyperplanar, by the
// (d+2) x (d+2) determinant with rows (1, p, |p|^2) expanded by Laplace.
inline std::vector<std::vector<std::size_t>> violating_tuples(const PointSet& ps) {
  const std::size_t d = ps.dim();
  std::vector<std::vector<std::size_t>> out;
  for_each_combination(ps.size(), d + 2, [&](const std::vector<std::size_t>& idx) {
    Matrix<Integer> m(d + 2, d + 2);
    for (std::size_t r = 0; r < d + 2; ++r) {
      const auto& p = ps[idx[r]];
      m(r, 0) = 1;
      for (std::size_t j = 0; j < d; ++j) m(r, 1 + j) = p[j];
      m(r, d + 1) = p.squared_norm();
    }
    if (laplace_det(m) == 0) out.push_back(idx);
  });
  return out;
}

inline std::uint64_t cohyperplanar_subsets(const PointSet& ps, std::size_t arity) {
  std::uint64_t count = 0;
  std::vector<LatticePoint> pts(arity);
  for_each_combination(ps.size(), arity, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < arity; ++i) pts[i] = ps[idx[i]];
    if (affine_rank(pts) + 1 <= ps.dim()) ++count;
  });
  return count;
}

// Up to m distinct uniform points of [n]^d.
inline PointSet random_points(std::size_t d, Coord n, std::size_t m, std::mt19937_64& gen) {
  std::uniform_int_distribution<Coord> coord(1, n);
  std::vector<LatticePoint> pts;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Coord> c(d);
    for (auto& x : c) x = coord(gen);
    pts.emplace_back(std::move(c));
  }
  return PointSet(d, n, std::move(pts));
}

// Rows (1, p, |p|^2) for the listed points.
inline Matrix<Integer> lifted(const PointSet& ps, const std::vector<std::size_t>& idx) {
  const std::size_t d = ps.dim();
  Matrix<Integer> m(idx.size(), d + 2);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    m(r, 0) = 1;
    for (std::size_t j = 0; j < d; ++j) m(r, 1 + j) = ps[idx[r]][j];
    m(r, d + 1) = ps[idx[r]].squared_norm();
  }
  return m;
}

// Member sets of the surfaces determined by (d+1)-subsets with affinely
// independent lifts: p is a member iff adding it keeps the lifted rank.
inline std::set<std::set<std::size_t>> surface_member_sets(const PointSet& ps) {
  const std::size_t d = ps.dim();
  std::set<std::set<std::size_t>> out;
  for_each_combination(ps.size(), d + 1, [&](const std::vector<std::size_t>& idx) {
    if (bareiss_rank(lifted(ps, idx)) != d + 1) return;
    std::set<std::size_t> members;
    for (std::size_t p = 0; p < ps.size(); ++p) {
      auto with = idx;
      with.push_back(p);
      if (bareiss_rank(lifted(ps, with)) == d + 1) members.insert(p);
    }
    out.insert(std::move(members));
  });
  return out;
}

// Largest number of distinct traces over all z-subsets, family = surfaces
// above plus the empty set, by explicit set intersection.
inline std::size_t max_traces(const PointSet& ps, std::size_t z) {
  const auto family = surface_member_sets(ps);
  std::size_t best = 0;
  for_each_combination(ps.size(), z, [&](const std::vector<std::size_t>& idx) {
    std::set<std::set<std::size_t>> traces{{}};
    for (const auto& s : family) {
      std::set<std::size_t> t;
      for (std::size_t i : idx)
        if (s.count(i)) t.insert(i);
      traces.insert(std::move(t));
    }
    best = std::max(best, traces.size());
  });
  return best;
}

}  // namespace lgp::oracle
