#pragma once

// Certificates that a set Q of d+2 points is not shattered by spheres: a
// subset B of Q that no sphere cuts out exactly.
//
// Lower levels of the recursion live inside a hyperplane. Their points are
// integer coordinates c in an affine frame x = o + E c / L, so Euclidean
// squared distances become c^T G c / L^2 with the integer Gram matrix
// G = E^T G_parent E. The uniform factor 1/L^2 does not change which point
// sets are cospherical, so every test below works with c^T G c.

#include "combinatorics.hpp"
#include "integer.hpp"
#include "linalg.hpp"
#include "point_set.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgp {

enum class VcReason { not_cospherical, unique_sphere_forces_extra_point, degenerate_recursed };

inline const char* to_string(VcReason r) {
  switch (r) {
    case VcReason::not_cospherical:
      return "not_cospherical";
    case VcReason::unique_sphere_forces_extra_point:
      return "unique_sphere_forces_extra_point";
    case VcReason::degenerate_recursed:
      return "degenerate_recursed";
  }
  return "unknown";
}

using FramePoint = std::vector<Integer>;

struct VcRefutation {
  std::size_t dim = 0;
  Matrix<Integer> gram{0, 0};
  std::vector<FramePoint> subset;   // Q: dim+2 points
  std::vector<std::size_t> target;  // B, as sorted indices into `subset`
  VcReason reason = VcReason::not_cospherical;

  // degenerate_recursed only: Q' = subset[hyperplane[i]] lies on the frame
  // o + E c / L, and `recursion` refutes the mapped Q' one dimension down.
  std::vector<std::size_t> hyperplane;
  FramePoint origin;
  Matrix<Integer> basis{0, 0};  // dim x (dim - 1), columns are the frame axes
  Integer scale = 1;
  std::shared_ptr<const VcRefutation> recursion;

  std::vector<FramePoint> target_points() const {
    std::vector<FramePoint> out;
    for (std::size_t i : target) out.push_back(subset[i]);
    return out;
  }

  std::size_t depth() const { return recursion ? 1 + recursion->depth() : 0; }
};

/// Thrown when a certificate fails one of its own invariants.
class InvalidCertificate : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace vc_detail {

inline Integer quadratic(const Matrix<Integer>& g, const FramePoint& c) {
  Integer q = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) q += c[i] * g(i, j) * c[j];
  return q;
}

// Rows (c - c_0) for the points after the first.
inline std::size_t affine_rank(std::span<const FramePoint> pts) {
  if (pts.size() <= 1) return 0;
  Matrix<Integer> m(pts.size() - 1, pts.front().size());
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i - 1, j) = pts[i][j] - pts[0][j];
  return rank_exact(m);
}

// Rows (q(c), c, 1).
inline Matrix<Integer> lifted_rows(const Matrix<Integer>& g, std::span<const FramePoint> pts) {
  const std::size_t k = g.rows();
  Matrix<Integer> m(pts.size(), k + 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m(i, 0) = quadratic(g, pts[i]);
    for (std::size_t j = 0; j < k; ++j) m(i, 1 + j) = pts[i][j];
    m(i, k + 1) = 1;
  }
  return m;
}

inline bool cospherical(const Matrix<Integer>& g, std::span<const FramePoint> pts) {
  return det_exact(lifted_rows(g, pts)) == 0;
}

// Coefficients (A, b, k) of A q(c) + <b, c> + k through k+1 affinely
// independent frame points.
inline std::vector<Integer> surface_through(const Matrix<Integer>& g, std::span<const FramePoint> pts) {
  return signed_maximal_minors(lifted_rows(g, pts));
}

inline Integer evaluate(const Matrix<Integer>& g, const std::vector<Integer>& s, const FramePoint& c) {
  Integer v = s.front() * quadratic(g, c) + s.back();
  for (std::size_t j = 0; j < c.size(); ++j) v += s[1 + j] * c[j];
  return v;
}

inline std::vector<FramePoint> pick(const std::vector<FramePoint>& pts, const std::vector<std::size_t>& idx) {
  std::vector<FramePoint> out;
  for (std::size_t i : idx) out.push_back(pts[i]);
  return out;
}

struct Frame {
  FramePoint origin;
  Matrix<Integer> basis{0, 0};
  Integer scale = 1;
  std::vector<FramePoint> coords;
};

// A (k-1)-dimensional integer frame containing `pts` (which span at most
// k-1 dimensions): origin pts[0], axes chosen greedily among the difference
// vectors and then the unit vectors, coordinates scaled to integers.
inline Frame hyperplane_frame(const std::vector<FramePoint>& pts) {
  const std::size_t k = pts.front().size();
  std::vector<FramePoint> axes;
  auto try_add = [&](const FramePoint& v) {
    if (axes.size() + 1 >= k) return;
    Matrix<Integer> m(axes.size() + 1, k);
    for (std::size_t r = 0; r < axes.size(); ++r)
      for (std::size_t j = 0; j < k; ++j) m(r, j) = axes[r][j];
    for (std::size_t j = 0; j < k; ++j) m(axes.size(), j) = v[j];
    if (rank_exact(m) == axes.size() + 1) axes.push_back(v);
  };
  for (std::size_t i = 1; i < pts.size(); ++i) {
    FramePoint diff(k);
    for (std::size_t j = 0; j < k; ++j) diff[j] = pts[i][j] - pts[0][j];
    try_add(diff);
  }
  for (std::size_t j = 0; j < k; ++j) {
    FramePoint unit(k, 0);
    unit[j] = 1;
    try_add(unit);
  }
  if (axes.size() + 1 != k) throw InvalidCertificate("vc_refute: could not complete a hyperplane frame");

  Frame f;
  f.origin = pts.front();
  f.basis = Matrix<Integer>(k, k - 1);
  for (std::size_t c = 0; c + 1 < k; ++c)
    for (std::size_t r = 0; r < k; ++r) f.basis(r, c) = axes[c][r];

  std::vector<std::vector<Rational>> solved;
  for (const auto& p : pts) {
    Matrix<Rational> a(k, k - 1);
    std::vector<Rational> rhs(k);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c + 1 < k; ++c) a(r, c) = Rational(f.basis(r, c));
      rhs[r] = Rational(p[r] - f.origin[r]);
    }
    auto y = solve_full_column_rank(std::move(a), std::move(rhs));
    if (!y) throw InvalidCertificate("vc_refute: point outside its hyperplane frame");
    for (const auto& v : *y) f.scale = lcm(f.scale, denominator(v));
    solved.push_back(std::move(*y));
  }
  for (const auto& y : solved) {
    FramePoint c;
    for (const auto& v : y) c.push_back(numerator(v) * (f.scale / denominator(v)));
    f.coords.push_back(std::move(c));
  }
  return f;
}

// E^T G E.
inline Matrix<Integer> pullback(const Matrix<Integer>& g, const Matrix<Integer>& e) {
  Matrix<Integer> out(e.cols(), e.cols());
  for (std::size_t a = 0; a < e.cols(); ++a)
    for (std::size_t b = 0; b < e.cols(); ++b) {
      Integer s = 0;
      for (std::size_t i = 0; i < e.rows(); ++i)
        for (std::size_t j = 0; j < e.rows(); ++j) s += e(i, a) * g(i, j) * e(j, b);
      out(a, b) = s;
    }
  return out;
}

inline Matrix<Integer> identity(std::size_t k) {
  Matrix<Integer> g(k, k);
  for (std::size_t i = 0; i < k; ++i) g(i, i) = 1;
  return g;
}

inline VcRefutation refute(const Matrix<Integer>& g, std::vector<FramePoint> q) {
  const std::size_t k = g.rows();
  VcRefutation out;
  out.dim = k;
  out.gram = g;
  out.subset = std::move(q);

  std::optional<std::vector<std::size_t>> flat;
  for_each_combination(k + 2, k + 1, [&](const std::vector<std::size_t>& idx) {
    if (affine_rank(pick(out.subset, idx)) < k) flat = idx;
    return !flat;
  });

  if (!flat) {
    if (!cospherical(g, out.subset)) {
      out.reason = VcReason::not_cospherical;
      for (std::size_t i = 0; i < k + 2; ++i) out.target.push_back(i);
    } else {
      out.reason = VcReason::unique_sphere_forces_extra_point;
      for (std::size_t i = 0; i < k + 1; ++i) out.target.push_back(i);
    }
    return out;
  }

  out.reason = VcReason::degenerate_recursed;
  out.hyperplane = *flat;
  Frame f = hyperplane_frame(pick(out.subset, *flat));
  out.origin = f.origin;
  out.basis = f.basis;
  out.scale = f.scale;
  auto nested = std::make_shared<VcRefutation>(refute(pullback(g, f.basis), std::move(f.coords)));
  for (std::size_t i : nested->target) out.target.push_back(out.hyperplane[i]);
  out.recursion = std::move(nested);
  return out;
}

inline void check(bool ok, const std::string& what) {
  if (!ok) throw InvalidCertificate("invalid VC certificate: " + what);
}

}  // namespace vc_detail

/// Re-checks every invariant of `r` and of its nested certificates; throws
/// InvalidCertificate on the first failure.
inline void validate(const VcRefutation& r) {
  using namespace vc_detail;
  const std::size_t k = r.dim;
  check(k >= 1, "dimension must be positive");
  check(r.gram.rows() == k && r.gram.cols() == k, "Gram matrix has the wrong shape");
  check(rank_exact(r.gram) == k, "Gram matrix is singular");
  check(r.subset.size() == k + 2, "subset must have dim+2 points");
  for (const auto& p : r.subset) check(p.size() == k, "point of the wrong dimension");
  for (std::size_t i = 0; i < r.subset.size(); ++i)
    for (std::size_t j = i + 1; j < r.subset.size(); ++j) check(r.subset[i] != r.subset[j], "duplicate points");
  check(std::is_sorted(r.target.begin(), r.target.end()) &&
            std::adjacent_find(r.target.begin(), r.target.end()) == r.target.end(),
        "target indices must be sorted and distinct");
  for (std::size_t i : r.target) check(i < r.subset.size(), "target index out of range");

  switch (r.reason) {
    case VcReason::not_cospherical:
      check(r.target.size() == k + 2, "not_cospherical needs B = Q");
      check(!cospherical(r.gram, r.subset), "subset is cospherical");
      break;
    case VcReason::unique_sphere_forces_extra_point: {
      check(r.target.size() == k + 1, "unique_sphere_forces_extra_point needs |B| = dim+1");
      const auto b = r.target_points();
      check(affine_rank(b) == k, "B is not in general position");
      const auto s = surface_through(r.gram, b);
      check(s.front() != 0, "surface through B is not a sphere");
      for (std::size_t i = 0; i < r.subset.size(); ++i)
        if (!std::binary_search(r.target.begin(), r.target.end(), i))
          check(evaluate(r.gram, s, r.subset[i]) == 0, "extra point is not on the sphere through B");
      break;
    }
    case VcReason::degenerate_recursed: {
      check(k >= 2, "cannot recurse below dimension 1");
      check(r.recursion != nullptr, "missing nested certificate");
      check(r.hyperplane.size() == k + 1 && std::is_sorted(r.hyperplane.begin(), r.hyperplane.end()),
            "hyperplane subset must list dim+1 sorted indices");
      for (std::size_t i : r.hyperplane) check(i < r.subset.size(), "hyperplane index out of range");
      const auto flat = pick(r.subset, r.hyperplane);
      check(affine_rank(flat) < k, "hyperplane subset is not cohyperplanar");
      check(r.basis.rows() == k && r.basis.cols() == k - 1 && rank_exact(r.basis) == k - 1,
            "frame axes must be independent");
      check(r.scale > 0 && r.origin.size() == k, "bad frame origin or scale");

      const VcRefutation& n = *r.recursion;
      validate(n);
      check(n.dim == k - 1, "nested certificate has the wrong dimension");
      check(n.gram == pullback(r.gram, r.basis), "nested Gram matrix does not match the frame");
      for (std::size_t i = 0; i < flat.size(); ++i)
        for (std::size_t row = 0; row < k; ++row) {
          Integer image = 0;
          for (std::size_t c = 0; c + 1 < k; ++c) image += r.basis(row, c) * n.subset[i][c];
          check(r.scale * (flat[i][row] - r.origin[row]) == image, "nested point does not map onto Q'");
        }
      std::vector<std::size_t> lifted;
      for (std::size_t i : n.target) lifted.push_back(r.hyperplane[i]);
      check(lifted == r.target, "B does not match the nested target");
      break;
    }
  }
}

/// Certificate that the d+2 distinct points `q` are not shattered by spheres.
inline VcRefutation vc_refute(std::span<const LatticePoint> q) {
  require(!q.empty(), "vc_refute: expected d+2 distinct points");
  const std::size_t d = q.front().dim();
  require(d >= 1 && q.size() == d + 2, "vc_refute: expected d+2 distinct points");
  require_same_dimension(q, d);
  require_distinct(q);
  std::vector<FramePoint> pts;
  for (const auto& p : q) {
    FramePoint c;
    for (Coord x : p.coords()) c.emplace_back(x);
    pts.push_back(std::move(c));
  }
  VcRefutation r = vc_detail::refute(vc_detail::identity(d), std::move(pts));
  validate(r);
  return r;
}

}  // namespace lgp
