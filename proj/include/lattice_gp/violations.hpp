#pragma once

// Surface bucketing: every (d+1)-subset whose lifted points are affinely
// independent determines a unique sphere or hyperplane. Bucketing subsets by
// the canonical form of that surface and re-testing every point against each
// distinct surface yields all maximal surfaces with at least d+1 points in
// O(m^{d+1}) predicate evaluations.

#include "combinatorics.hpp"
#include "geometry.hpp"
#include "integer.hpp"
#include "linalg.hpp"
#include "point_set.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

namespace lgp {

enum class SurfaceKind { any, spheres, hyperplanes };

// A surface and the indices (into the owning PointSet) of all points on it.
struct SurfaceRecord {
  GeneralizedSphere surface;
  std::vector<std::size_t> members;
};

namespace detail {

using Wide = __int128;

inline unsigned __int128 uabs(Wide v) {
  return v < 0 ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
}

inline unsigned __int128 ugcd(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    const auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct WideKeyHash {
  std::size_t operator()(const std::vector<Wide>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Wide x : v) {
      const auto u = static_cast<unsigned __int128>(x);
      h ^= static_cast<std::size_t>(u) * 0x100000001b3ull + static_cast<std::size_t>(u >> 64) + (h << 7) + (h >> 3);
    }
    return h;
  }
};

// Canonical form in 128-bit; nullopt if the vector is zero.
inline std::optional<std::vector<Wide>> canonical_wide(std::vector<Wide> v) {
  unsigned __int128 g = 0;
  for (Wide x : v) g = ugcd(g, uabs(x));
  if (g == 0) return std::nullopt;
  const auto first = std::find_if(v.begin(), v.end(), [](Wide x) { return x != 0; });
  const bool flip = *first < 0;
  for (auto& x : v) {
    x = static_cast<Wide>(uabs(x) / g) * (x < 0 ? -1 : 1);
    if (flip) x = -x;
  }
  return v;
}

inline std::optional<std::vector<Wide>> narrow_wide(const std::vector<Integer>& v) {
  static const Integer kMax = (Integer(1) << 126);
  std::vector<Wide> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (abs(x) >= kMax) return std::nullopt;
    const bool neg = x < 0;
    const Integer mag = abs(x);
    const auto hi = static_cast<std::uint64_t>(mag >> 64);
    const auto lo = static_cast<std::uint64_t>(mag & Integer(std::numeric_limits<std::uint64_t>::max()));
    Wide w = (static_cast<Wide>(hi) << 64) | static_cast<Wide>(lo);
    out.push_back(neg ? -w : w);
  }
  return out;
}

inline std::vector<Integer> widen(const std::vector<Wide>& v) {
  std::vector<Integer> out;
  out.reserve(v.size());
  for (Wide x : v) out.push_back(to_integer(Checked128::from_raw(x)));
  return out;
}

// Signed maximal minors of an r x (r+1) matrix in checked 128-bit arithmetic.
inline std::vector<Wide> minors_wide(const Matrix<Coord>& m) {
  std::vector<Wide> out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Wide v = bareiss_determinant(m.without_column(j).cast<Checked128>()).raw();
    out[j] = (j % 2 == 0) ? v : -v;
  }
  return out;
}

// Buckets the null vectors of `subset_size x cols` row blocks. `row_of`
// writes the row for one point; `expand` maps a null vector to surface
// coefficients (a_lift, a, a_0).
template <class RowOf, class Expand>
std::vector<SurfaceRecord> bucket_surfaces(const PointSet& ps, std::size_t subset_size, std::size_t cols, RowOf row_of,
                                           Expand expand) {
  std::unordered_map<std::vector<Wide>, std::size_t, WideKeyHash> fast;
  std::unordered_map<GeneralizedSphere, std::size_t> slow;
  std::vector<SurfaceRecord> records;

  auto add_members = [&](const GeneralizedSphere& s) {
    SurfaceRecord rec{s, {}};
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (on_surface(s, ps[i])) rec.members.push_back(i);
    records.push_back(std::move(rec));
    return records.size() - 1;
  };

  Matrix<Coord> m(subset_size, cols);
  for_each_combination(ps.size(), subset_size, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t r = 0; r < subset_size; ++r) row_of(ps[idx[r]], m, r);
    std::optional<std::vector<Wide>> key;
    std::optional<std::vector<Integer>> big;
    try {
      auto canon = canonical_wide(minors_wide(m));
      if (!canon) return;
      key = expand(std::move(*canon));
    } catch (const Overflow&) {
      auto raw = signed_maximal_minors(m);
      if (std::all_of(raw.begin(), raw.end(), [](const Integer& c) { return c == 0; })) return;
      std::vector<Integer> coeffs = expand(std::move(raw));
      auto canon = canonicalize(coeffs).coefficients();
      key = narrow_wide(canon);
      if (!key) big = std::move(canon);
    }
    if (key) {
      if (fast.find(*key) == fast.end()) {
        const std::size_t at = add_members(canonicalize(widen(*key)));
        fast.emplace(std::move(*key), at);
      }
    } else {
      auto s = canonicalize(std::move(*big));
      if (slow.find(s) == slow.end()) {
        const std::size_t at = add_members(s);
        slow.emplace(std::move(s), at);
      }
    }
  });
  std::sort(records.begin(), records.end(),
            [](const SurfaceRecord& a, const SurfaceRecord& b) { return a.surface < b.surface; });
  return records;
}

template <class T>
std::vector<T> prepend_zero(std::vector<T> v) {
  v.insert(v.begin(), T(0));
  return v;
}

}  // namespace detail

/// Every sphere or hyperplane through a (d+1)-subset of `ps` whose lifted
/// points are affinely independent, with the full list of incident points.
/// If the whole set lifts into a lower-dimensional flat (so no such subset
/// exists) and has at least d+1 points, a single surface through all points is
/// returned instead.
inline std::vector<SurfaceRecord> spanned_surfaces(const PointSet& ps) {
  const std::size_t d = ps.dim();
  auto row = [d](const LatticePoint& p, Matrix<Coord>& m, std::size_t r) {
    m(r, 0) = p.squared_norm();
    for (std::size_t j = 0; j < d; ++j) m(r, 1 + j) = p[j];
    m(r, d + 1) = 1;
  };
  auto records = detail::bucket_surfaces(ps, d + 1, d + 2, row, [](auto v) { return v; });
  if (records.empty() && ps.size() >= d + 1) {
    Matrix<Integer> all(ps.size(), d + 2);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      all(i, 0) = ps[i].squared_norm();
      for (std::size_t j = 0; j < d; ++j) all(i, 1 + j) = ps[i][j];
      all(i, d + 1) = 1;
    }
    auto basis = nullspace_basis(all);
    SurfaceRecord rec{canonicalize(basis.front()), {}};
    for (std::size_t i = 0; i < ps.size(); ++i) rec.members.push_back(i);
    records.push_back(std::move(rec));
  }
  return records;
}

/// Every hyperplane spanned by d affinely independent points of `ps`, with all
/// incident points. If `ps` spans less than a hyperplane and has at least d
/// points, one hyperplane through all of them is returned.
inline std::vector<SurfaceRecord> spanned_hyperplanes(const PointSet& ps) {
  const std::size_t d = ps.dim();
  auto row = [d](const LatticePoint& p, Matrix<Coord>& m, std::size_t r) {
    for (std::size_t j = 0; j < d; ++j) m(r, j) = p[j];
    m(r, d) = 1;
  };
  auto records =
      detail::bucket_surfaces(ps, d, d + 1, row, [](auto v) { return detail::prepend_zero(std::move(v)); });
  if (records.empty() && ps.size() >= d) {
    Matrix<Integer> all(ps.size(), d + 1);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) all(i, j) = ps[i][j];
      all(i, d) = 1;
    }
    auto basis = nullspace_basis(all);
    SurfaceRecord rec{canonicalize(detail::prepend_zero(basis.front())), {}};
    for (std::size_t i = 0; i < ps.size(); ++i) rec.members.push_back(i);
    records.push_back(std::move(rec));
  }
  return records;
}

/// Every maximal sphere or hyperplane carrying at least `threshold` points of
/// `ps` (default d+2), with its full member list. Empty iff `ps` has no
/// `threshold` points on a common surface of the requested kind.
inline std::vector<ViolationWitness> find_violations(const PointSet& ps, std::optional<std::size_t> threshold = {},
                                                     SurfaceKind kind = SurfaceKind::any) {
  const std::size_t t = threshold.value_or(ps.dim() + 2);
  require(t >= 1, "find_violations: threshold must be positive");
  std::vector<ViolationWitness> out;
  if (ps.size() < t) return out;
  const auto records = kind == SurfaceKind::hyperplanes ? spanned_hyperplanes(ps) : spanned_surfaces(ps);
  for (const auto& rec : records) {
    if (rec.members.size() < t) continue;
    if (kind == SurfaceKind::spheres && !rec.surface.is_sphere()) continue;
    ViolationWitness w{rec.surface, {}};
    for (std::size_t i : rec.members) w.members.push_back(ps[i]);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace lgp
