#pragma once

// Counting and empirical bound checks built on the surface search:
// rich-surface statistics, cohyperplanar tuple counts, lattice points on a
// hyperplane or sphere, subcube crossings, and shatter-function traces.

#include "combinatorics.hpp"
#include "geometry.hpp"
#include "integer.hpp"
#include "linalg.hpp"
#include "partition.hpp"
#include "point_set.hpp"
#include "random.hpp"
#include "violations.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

namespace lgp {

// ---------------------------------------------------------------------------
// Rich surfaces

struct SurfaceIncidence {
  GeneralizedSphere surface;
  std::size_t incidences = 0;
};

struct RichSurfaceHistogram {
  std::size_t dim = 0;
  std::vector<SurfaceIncidence> surfaces;  // every surface with >= d+1 points
  // Dyadic buckets: i -> number of surfaces with 2^i <= k < 2^{i+1}.
  std::map<unsigned, std::size_t> dyadic_spheres;
  std::map<unsigned, std::size_t> dyadic_hyperplanes;
  std::size_t sphere_count = 0;
  std::size_t hyperplane_count = 0;

  // Number of surfaces with at least r points.
  std::size_t at_least(std::size_t r) const {
    return static_cast<std::size_t>(std::count_if(surfaces.begin(), surfaces.end(),
                                                  [r](const SurfaceIncidence& s) { return s.incidences >= r; }));
  }

  std::size_t max_incidence() const {
    std::size_t k = 0;
    for (const auto& s : surfaces) k = std::max(k, s.incidences);
    return k;
  }

  // Sum over surfaces of C(k, d+2): the per-surface count of (d+2)-tuples.
  Integer tuple_total() const {
    Integer t = 0;
    for (const auto& s : surfaces) t += binomial(s.incidences, dim + 2);
    return t;
  }

  std::map<unsigned, std::size_t> dyadic() const {
    auto all = dyadic_spheres;
    for (auto [i, c] : dyadic_hyperplanes) all[i] += c;
    return all;
  }
};

inline unsigned dyadic_index(std::size_t k) { return static_cast<unsigned>(std::bit_width(k) - 1); }

inline RichSurfaceHistogram rich_surface_histogram(const PointSet& ps) {
  RichSurfaceHistogram h;
  h.dim = ps.dim();
  for (const auto& rec : spanned_surfaces(ps)) {
    const std::size_t k = rec.members.size();
    if (k < ps.dim() + 1) continue;
    h.surfaces.push_back({rec.surface, k});
    if (rec.surface.is_sphere()) {
      ++h.sphere_count;
      ++h.dyadic_spheres[dyadic_index(k)];
    } else {
      ++h.hyperplane_count;
      ++h.dyadic_hyperplanes[dyadic_index(k)];
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Affine flats and cohyperplanar tuples

namespace detail {

inline Matrix<Coord> differences(const PointSet& ps, const std::vector<std::size_t>& idx, std::size_t extra_rows) {
  Matrix<Coord> m(idx.size() - 1 + extra_rows, ps.dim());
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = 0; j < ps.dim(); ++j) m(i - 1, j) = ps[idx[i]][j] - ps[idx[0]][j];
  return m;
}

}  // namespace detail

/// Member sets (sorted indices) of every affine flat of dimension `dim`
/// spanned by points of `ps`.
inline std::vector<std::vector<std::size_t>> spanned_flats(const PointSet& ps, std::size_t dim) {
  std::vector<std::vector<std::size_t>> flats;
  std::unordered_set<std::string> seen;
  for_each_combination(ps.size(), dim + 1, [&](const std::vector<std::size_t>& idx) {
    Matrix<Coord> m = detail::differences(ps, idx, 1);
    if (dim > 0) {
      Matrix<Coord> basis = detail::differences(ps, idx, 0);
      if (rank_exact(basis) != dim) return;
    }
    std::vector<std::size_t> members;
    for (std::size_t p = 0; p < ps.size(); ++p) {
      for (std::size_t j = 0; j < ps.dim(); ++j) m(dim, j) = ps[p][j] - ps[idx[0]][j];
      if (rank_exact(m) == dim) members.push_back(p);
    }
    std::string key(reinterpret_cast<const char*>(members.data()), members.size() * sizeof(std::size_t));
    if (seen.insert(std::move(key)).second) flats.push_back(std::move(members));
  });
  return flats;
}

/// Exact number of `arity`-subsets of `ps` lying on a common hyperplane
/// (default arity d+2). Subsets are attributed to their affine hull: for each
/// spanned flat F of dimension <= d-1, the subsets whose hull is exactly F
/// number C(|F|, arity) minus those attributed to flats strictly inside F.
inline Integer count_cohyperplanar_tuples(const PointSet& ps, std::optional<std::size_t> arity_opt = {}) {
  const std::size_t d = ps.dim();
  const std::size_t arity = arity_opt.value_or(d + 2);
  require(arity >= d + 1, "count_cohyperplanar_tuples: arity must be at least d+1");
  if (ps.size() < arity) return 0;

  struct Flat {
    std::vector<std::size_t> members;
    Integer exact;
  };
  std::vector<Flat> lower;
  Integer total = 0;
  for (std::size_t dim = 1; dim + 1 <= d; ++dim) {
    std::vector<Flat> current;
    for (auto& members : spanned_flats(ps, dim)) {
      if (members.size() < arity) continue;
      Integer exact = binomial(members.size(), arity);
      for (const auto& g : lower)
        if (std::includes(members.begin(), members.end(), g.members.begin(), g.members.end())) exact -= g.exact;
      current.push_back({std::move(members), exact});
    }
    for (auto& f : current) {
      total += f.exact;
      lower.push_back(std::move(f));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Lattice points on a hyperplane

struct HyperplaneCount {
  std::uint64_t count = 0;
  Rational bound;             // 3^d n^{d-1} / s, s = max |a_i|
  bool precondition = false;  // homogeneous, and the solutions span a (d-1)-dim subspace
  bool within_bound = false;
};

/// Points x of [1,n]^d with <a, x> + a_0 = 0, counted by enumerating the
/// other d-1 coordinates and solving for one with nonzero coefficient.
inline HyperplaneCount lattice_points_on_hyperplane(const std::vector<Coord>& a, Coord a0, Coord n) {
  const std::size_t d = a.size();
  require(d >= 1 && n >= 1, "lattice_points_on_hyperplane: need d >= 1, n >= 1");
  Integer g = 0;
  Coord s = 0;
  for (Coord c : a) {
    g = gcd(g, c);
    s = std::max(s, c < 0 ? -c : c);
  }
  require(g == 1, "lattice_points_on_hyperplane: coefficients must be primitive and not all zero");

  std::size_t solve_for = d;
  for (std::size_t j = 0; j < d; ++j)
    if (a[j] != 0 && (solve_for == d || std::abs(a[j]) < std::abs(a[solve_for]))) solve_for = j;

  HyperplaneCount out;
  Integer scale = 1;
  for (std::size_t i = 0; i + 1 < d; ++i) scale *= n;
  Integer three_d = 1;
  for (std::size_t i = 0; i < d; ++i) three_d *= 3;
  out.bound = Rational(three_d * scale, s);

  std::vector<std::vector<Coord>> basis;  // independent solutions found so far
  auto independent = [&](const std::vector<Coord>& v) {
    Matrix<Coord> m(basis.size() + 1, d);
    for (std::size_t r = 0; r < basis.size(); ++r)
      for (std::size_t c = 0; c < d; ++c) m(r, c) = basis[r][c];
    for (std::size_t c = 0; c < d; ++c) m(basis.size(), c) = v[c];
    return rank_exact(m) == basis.size() + 1;
  };

  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < d; ++j)
    if (j != solve_for) free.push_back(j);
  std::vector<Coord> x(d, 1);
  const Coord pivot = a[solve_for];
  while (true) {
    Integer rest = a0;
    for (std::size_t j = 0; j < d; ++j)
      if (j != solve_for) rest += Integer(a[j]) * x[j];
    if (rest % pivot == 0) {
      const Integer v = -rest / pivot;
      if (v >= 1 && v <= n) {
        ++out.count;
        x[solve_for] = static_cast<Coord>(v);
        if (a0 == 0 && basis.size() + 1 < d && independent(x)) basis.push_back(x);
        x[solve_for] = 1;
      }
    }
    std::size_t k = free.size();
    while (k > 0 && x[free[k - 1]] == n) x[free[--k]] = 1;
    if (k == 0) break;
    ++x[free[k - 1]];
  }
  out.precondition = a0 == 0 && basis.size() + 1 == d;
  out.within_bound = Rational(out.count) <= out.bound;
  return out;
}

// ---------------------------------------------------------------------------
// Lattice points on a sphere

struct SphereCount {
  std::uint64_t count = 0;
  // log(count) / log(n), compared against the reference exponent d-2; only
  // meaningful for count >= 1 and n >= 2.
  std::optional<double> exponent;
  double reference_exponent = 0.0;
};

inline Integer isqrt(const Integer& v) { return boost::multiprecision::sqrt(v); }

/// Points of [1,n]^d on a sphere: enumerate the first d-1 coordinates and
/// solve the quadratic in the last one exactly.
inline SphereCount lattice_points_on_sphere(const GeneralizedSphere& s, Coord n) {
  require(s.is_sphere(), "lattice_points_on_sphere: surface is a hyperplane");
  if (s.squared_radius_numerator() < 0) throw DegenerateInput("empty sphere: negative squared radius");
  const std::size_t d = s.dim();
  const Integer& A = s.lift_coeff();
  const Integer& B = s.linear(d - 1);

  SphereCount out;
  out.reference_exponent = static_cast<double>(d) - 2.0;
  std::vector<Coord> x(d - 1, 1);
  while (true) {
    Integer c = s.constant();
    for (std::size_t j = 0; j + 1 < d; ++j) c += A * x[j] * x[j] + s.linear(j) * x[j];
    const Integer disc = B * B - 4 * A * c;
    if (disc >= 0) {
      const Integer root = isqrt(disc);
      if (root * root == disc) {
        for (int sign : {-1, 1}) {
          if (sign == 1 && root == 0) break;
          const Integer num = -B + sign * root;
          if (num % (2 * A) != 0) continue;
          const Integer v = num / (2 * A);
          if (v >= 1 && v <= n) ++out.count;
        }
      }
    }
    std::size_t j = d - 1;
    while (j > 0 && x[j - 1] == n) x[--j] = 1;
    if (j == 0) break;
    ++x[j - 1];
  }
  if (out.count >= 1 && n >= 2)
    out.exponent = std::log(static_cast<double>(out.count)) / std::log(static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------
// Subcube crossings

/// Number of subcubes whose closed box [i*m, (i+1)*m]^d (m = n/D, the closure
/// of the cell holding the lattice points of that subcube) meets the sphere
/// surface: min distance^2 <= r^2 <= max distance^2, in coordinates scaled
/// by 2*a_lift so the center -a is integral.
inline std::uint64_t crossing_count(const GeneralizedSphere& s, const GridPartition& gp) {
  require(s.is_sphere() && s.dim() == gp.dim(), "crossing_count: need a sphere of the partition's dimension");
  const Integer r2 = s.squared_radius_numerator();
  require(r2 > 0, "crossing_count: squared radius must be positive");
  const Integer two_a = 2 * s.lift_coeff();
  const std::size_t d = s.dim();

  std::uint64_t crossed = 0;
  for (std::uint64_t cell_id = 0; cell_id < gp.cell_count(); ++cell_id) {
    const auto cell = gp.cell_at(cell_id);
    Integer lo2 = 0, hi2 = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const Integer center = -s.linear(j);
      const Integer lo = two_a * cell[j] * gp.cell_side();
      const Integer hi = two_a * (cell[j] + 1) * gp.cell_side();
      if (center < lo)
        lo2 += (lo - center) * (lo - center);
      else if (center > hi)
        lo2 += (center - hi) * (center - hi);
      const Integer far = std::max(abs(center - lo), abs(center - hi));
      hi2 += far * far;
    }
    if (lo2 <= r2 && r2 <= hi2) ++crossed;
  }
  return crossed;
}

// ---------------------------------------------------------------------------
// Shatter-function traces

struct TraceReport {
  std::size_t z = 0;
  std::size_t max_traces = 0;
  Integer sauer_shelah_bound;  // sum_{i <= d+1} C(z, i)
  std::uint64_t subsets_examined = 0;
  bool exhaustive = false;
};

inline Integer sauer_shelah_bound(std::size_t z, std::size_t vc_dim) {
  Integer b = 0;
  for (std::size_t i = 0; i <= vc_dim; ++i) b += binomial(z, i);
  return b;
}

/// Largest number of distinct traces {S ∩ P'} over z-subsets P' of `ps`, where
/// S ranges over the empty set and every maximal surface through at least d+1
/// points of `ps`. Exhaustive when C(|ps|, z) <= budget, otherwise `trials`
/// uniformly sampled subsets (a lower bound on the maximum).
inline TraceReport count_traces(const PointSet& ps, std::size_t z, std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t budget = 1'000'000) {
  require(z <= ps.size(), "count_traces: z exceeds the number of points");
  require(z <= 64, "count_traces: z must be at most 64");
  TraceReport out;
  out.z = z;
  out.sauer_shelah_bound = sauer_shelah_bound(z, ps.dim() + 1);

  // incident[i] = surfaces through point i.
  std::vector<std::vector<std::size_t>> incident(ps.size());
  const auto records = spanned_surfaces(ps);
  for (std::size_t s = 0; s < records.size(); ++s)
    for (std::size_t i : records[s].members) incident[i].push_back(s);

  std::vector<std::uint64_t> keys(records.size(), 0);
  std::vector<std::size_t> touched;
  // Distinct keys: a stamped table over all 2^z masks when small enough.
  constexpr std::size_t kTableBits = 20;
  std::vector<std::uint32_t> stamp(z <= kTableBits ? std::size_t{1} << z : 0, 0);
  std::uint32_t generation = 0;
  std::unordered_set<std::uint64_t> traces;
  auto examine = [&](const std::vector<std::size_t>& subset) {
    touched.clear();
    for (std::size_t t = 0; t < subset.size(); ++t)
      for (std::size_t s : incident[subset[t]]) {
        if (keys[s] == 0) touched.push_back(s);
        keys[s] |= std::uint64_t{1} << t;
      }
    std::size_t distinct = 1;  // the empty trace
    if (!stamp.empty()) {
      ++generation;
      stamp[0] = generation;
      for (std::size_t s : touched) {
        if (stamp[keys[s]] != generation) {
          stamp[keys[s]] = generation;
          ++distinct;
        }
        keys[s] = 0;
      }
    } else {
      traces.clear();
      traces.insert(0);
      for (std::size_t s : touched) {
        traces.insert(keys[s]);
        keys[s] = 0;
      }
      distinct = traces.size();
    }
    out.max_traces = std::max(out.max_traces, distinct);
    ++out.subsets_examined;
  };

  if (binomial(ps.size(), z) <= budget) {
    out.exhaustive = true;
    for_each_combination(ps.size(), z, examine);
  } else {
    Rng rng(seed, 0x7472616365ull);
    std::vector<std::size_t> pool(ps.size());
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
      for (std::size_t i = 0; i < z; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
      std::vector<std::size_t> subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(z));
      std::sort(subset.begin(), subset.end());
      examine(subset);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Codimension-two spheres

/// Largest number of points of `ps` on a common (d-2)-sphere or (d-2)-flat,
/// i.e. whose lifts share an affine (d-1)-flat. Considers flats spanned by d
/// points; returns 0 when fewer than d points are available.
inline std::size_t max_points_on_codim2_sphere(const PointSet& ps) {
  const std::size_t d = ps.dim();
  std::size_t best = 0;
  Matrix<Coord> m(d + 1, d + 2);
  auto row = [&](const LatticePoint& p, std::size_t r) {
    m(r, 0) = p.squared_norm();
    for (std::size_t j = 0; j < d; ++j) m(r, 1 + j) = p[j];
    m(r, d + 1) = 1;
  };
  for_each_combination(ps.size(), d, [&](const std::vector<std::size_t>& idx) {
    Matrix<Coord> base(d, d + 1);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t j = 0; j < d; ++j) base(r, j) = ps[idx[r]][j];
    for (std::size_t r = 0; r < d; ++r) base(r, d) = 1;
    if (rank_exact(base) != d) return;  // not affinely independent
    for (std::size_t r = 0; r < d; ++r) row(ps[idx[r]], r);
    std::size_t k = 0;
    for (const auto& p : ps) {
      row(p, d);
      if (rank_exact(m) == d) ++k;
    }
    best = std::max(best, k);
  });
  return best;
}

}  // namespace lgp
