#pragma once

// Exact predicates and constructors for spheres and hyperplanes through
// lattice points. Spheres and hyperplanes share one representation: the zero
// set of a_lift*|x|^2 + <a, x> + a_0, with a_lift = 0 for hyperplanes.

#include "combinatorics.hpp"
#include "integer.hpp"
#include "linalg.hpp"
#include "point_set.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lgp {

/// Paraboloid lift p -> (p_1, ..., p_d, |p|^2).
inline std::vector<Coord> lift(const LatticePoint& p) {
  std::vector<Coord> out(p.coords());
  out.push_back(p.squared_norm());
  return out;
}

class GeneralizedSphere {
 public:
  /// Builds the canonical form of a raw coefficient vector laid out as
  /// (a_lift, a_1, ..., a_d, a_0): divided by the gcd, first nonzero entry
  /// positive.
  static GeneralizedSphere canonical(std::vector<Integer> raw) {
    require(raw.size() >= 3, "GeneralizedSphere: need at least (a_lift, a_1, a_0)");
    Integer g = 0;
    for (const auto& c : raw) g = gcd(g, c);
    require(g != 0, "GeneralizedSphere: all coefficients are zero");
    auto first = std::find_if(raw.begin(), raw.end(), [](const Integer& c) { return c != 0; });
    if (*first < 0) g = -g;
    if (g != 1)
      for (auto& c : raw) c /= g;
    GeneralizedSphere s;
    s.coeffs_ = std::move(raw);
    return s;
  }

  std::size_t dim() const { return coeffs_.size() - 2; }
  const Integer& lift_coeff() const { return coeffs_.front(); }
  const Integer& linear(std::size_t i) const { return coeffs_[1 + i]; }
  const Integer& constant() const { return coeffs_.back(); }
  const std::vector<Integer>& coefficients() const { return coeffs_; }

  bool is_sphere() const { return lift_coeff() != 0; }
  bool is_hyperplane() const { return lift_coeff() == 0; }

  // Sphere case only: center -a / (2 a_lift).
  std::vector<Rational> center() const {
    require(is_sphere(), "center of a hyperplane");
    std::vector<Rational> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = Rational(-linear(i), 2 * lift_coeff());
    return c;
  }

  // Sphere case only: (|a|^2 - 4 a_lift a_0) / (4 a_lift^2).
  Rational squared_radius() const {
    require(is_sphere(), "radius of a hyperplane");
    return Rational(squared_radius_numerator(), 4 * lift_coeff() * lift_coeff());
  }

  Integer squared_radius_numerator() const {
    Integer s = 0;
    for (std::size_t i = 0; i < dim(); ++i) s += linear(i) * linear(i);
    return s - 4 * lift_coeff() * constant();
  }

  // a_lift*|x|^2 + <a, x> + a_0 at an integer point.
  Integer evaluate(std::span<const Coord> x) const {
    require(x.size() == dim(), "GeneralizedSphere::evaluate: dimension mismatch");
    Integer norm = 0;
    Integer v = constant();
    for (std::size_t i = 0; i < dim(); ++i) {
      norm += Integer(x[i]) * x[i];
      v += linear(i) * x[i];
    }
    return v + lift_coeff() * norm;
  }

  friend bool operator==(const GeneralizedSphere&, const GeneralizedSphere&) = default;
  friend auto operator<=>(const GeneralizedSphere& a, const GeneralizedSphere& b) { return a.coeffs_ <=> b.coeffs_; }

 private:
  GeneralizedSphere() = default;
  std::vector<Integer> coeffs_;
};

inline GeneralizedSphere canonicalize(std::vector<Integer> raw) { return GeneralizedSphere::canonical(std::move(raw)); }

inline bool on_surface(const GeneralizedSphere& s, const LatticePoint& p) {
  require(s.dim() == p.dim(), "on_surface: dimension mismatch");
  return s.evaluate(p.coords()) == 0;
}

// A surface together with the points of some set lying on it.
struct ViolationWitness {
  GeneralizedSphere surface;
  std::vector<LatticePoint> members;
};

namespace detail {

inline std::size_t checked_arity(std::span<const LatticePoint> pts, std::size_t extra, const char* what) {
  require(!pts.empty(), what);
  const std::size_t d = pts.front().dim();
  require(pts.size() == d + extra, what);
  require_same_dimension(pts, d);
  require_distinct(pts);
  return d;
}

// Rows (p_i - p_0) for i >= 1: a d x d matrix, singular iff cohyperplanar.
inline Matrix<Coord> affine_difference_matrix(std::span<const LatticePoint> pts) {
  const std::size_t d = pts.front().dim();
  Matrix<Coord> m(pts.size() - 1, d);
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) m(i - 1, j) = pts[i][j] - pts[0][j];
  return m;
}

// Rows (p_i - p_0, |p_i - p_0|^2). Its determinant equals that of the rows
// (1, p_i, |p_i|^2) up to column operations, with much smaller entries.
inline Matrix<Coord> translated_lift_matrix(std::span<const LatticePoint> pts) {
  const std::size_t d = pts.front().dim();
  Matrix<Coord> m(pts.size() - 1, d + 1);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Coord norm = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const Coord diff = pts[i][j] - pts[0][j];
      m(i - 1, j) = diff;
      norm += diff * diff;
    }
    m(i - 1, d) = norm;
  }
  return m;
}

}  // namespace detail

/// True iff the d+1 points lie on a common hyperplane.
inline bool is_cohyperplanar(std::span<const LatticePoint> pts) {
  detail::checked_arity(pts, 1, "is_cohyperplanar: expected d+1 distinct points of dimension d");
  return det_is_zero(detail::affine_difference_matrix(pts));
}

/// True iff the d+2 points lie on a common sphere or hyperplane, i.e. the
/// determinant with rows (1, p_i, |p_i|^2) vanishes.
inline bool is_cospherical_or_cohyperplanar(std::span<const LatticePoint> pts) {
  detail::checked_arity(pts, 2, "is_cospherical_or_cohyperplanar: expected d+2 distinct points of dimension d");
  return det_is_zero(detail::translated_lift_matrix(pts));
}

inline bool in_general_position(const PointSet& ps) {
  const std::size_t d = ps.dim();
  bool ok = true;
  std::vector<LatticePoint> tuple(d + 1);
  for_each_combination(ps.size(), d + 1, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i <= d; ++i) tuple[i] = ps[idx[i]];
    if (det_is_zero(detail::affine_difference_matrix(tuple))) ok = false;
    return ok;
  });
  return ok;
}

/// The unique sphere through d+1 points not on a common hyperplane, found by
/// solving |x|^2 + <b, x> + k = 0 over the rationals.
inline GeneralizedSphere sphere_through(std::span<const LatticePoint> pts) {
  const std::size_t d = detail::checked_arity(pts, 1, "sphere_through: expected d+1 distinct points of dimension d");
  Matrix<Rational> a(d + 1, d + 1);
  std::vector<Rational> rhs(d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i, j) = pts[i][j];
    a(i, d) = 1;
    rhs[i] = -pts[i].squared_norm();
  }
  auto sol = solve_full_column_rank(std::move(a), std::move(rhs));
  if (!sol) throw DegenerateInput("degenerate: points lie on a hyperplane");
  Integer den = 1;
  for (const auto& x : *sol) den = lcm(den, denominator(x));
  std::vector<Integer> raw;
  raw.reserve(d + 2);
  raw.push_back(den);
  for (const auto& x : *sol) raw.push_back(numerator(x) * (den / denominator(x)));
  return canonicalize(std::move(raw));
}

/// Coefficients (a_lift, a, a_0) of the surface through d+1 points when it is
/// unique, i.e. when the lifted points are affinely independent; the zero
/// vector otherwise.
inline std::vector<Integer> surface_coefficients(std::span<const LatticePoint> pts) {
  const std::size_t d = pts.front().dim();
  Matrix<Coord> m(pts.size(), d + 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m(i, 0) = pts[i].squared_norm();
    for (std::size_t j = 0; j < d; ++j) m(i, 1 + j) = pts[i][j];
    m(i, d + 1) = 1;
  }
  return signed_maximal_minors(m);
}

/// The generalized sphere through d+1 points, if unique.
inline std::optional<GeneralizedSphere> unique_surface_through(std::span<const LatticePoint> pts) {
  auto raw = surface_coefficients(pts);
  if (std::all_of(raw.begin(), raw.end(), [](const Integer& c) { return c == 0; })) return std::nullopt;
  return canonicalize(std::move(raw));
}

/// The hyperplane through d affinely independent points, as a generalized
/// sphere with a_lift = 0; nullopt when the points span less than a hyperplane.
inline std::optional<GeneralizedSphere> unique_hyperplane_through(std::span<const LatticePoint> pts) {
  const std::size_t d = pts.front().dim();
  require(pts.size() == d, "unique_hyperplane_through: expected d points");
  Matrix<Coord> m(d, d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = pts[i][j];
    m(i, d) = 1;
  }
  auto minors = signed_maximal_minors(m);
  if (std::all_of(minors.begin(), minors.end(), [](const Integer& c) { return c == 0; })) return std::nullopt;
  std::vector<Integer> raw;
  raw.reserve(d + 2);
  raw.push_back(0);
  raw.insert(raw.end(), minors.begin(), minors.end());
  return canonicalize(std::move(raw));
}

}  // namespace lgp

template <>
struct std::hash<lgp::GeneralizedSphere> {
  std::size_t operator()(const lgp::GeneralizedSphere& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& c : s.coefficients()) h ^= std::hash<lgp::Integer>{}(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};
