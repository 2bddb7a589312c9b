#pragma once

// Point-set constructions: the modular moment curve, the sample / subsample /
// delete pipeline for d >= 3, and a greedy maximal baseline.

#include "analysis.hpp"
#include "combinatorics.hpp"
#include "geometry.hpp"
#include "integer.hpp"
#include "partition.hpp"
#include "point_set.hpp"
#include "primes.hpp"
#include "random.hpp"
#include "violations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lgp {

enum class Method { moment_curve, theorem1_pipeline, greedy };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::moment_curve:
      return "moment_curve";
    case Method::theorem1_pipeline:
      return "theorem1_pipeline";
    case Method::greedy:
      return "greedy";
  }
  return "unknown";
}

// Measurements taken on the first-stage sample.
struct PipelineDiagnostics {
  Coord n_used = 0;
  Probability stage1_probability;
  double stage2_probability = 0.0;
  double c_const = 0.0;
  std::size_t attempts = 0;
  std::size_t subsample_size = 0;
  std::optional<PartitionChoice> partition;

  // Size window n^3/2 <= |A| <= 2 n^3.
  bool size_window_ok = false;
  // Subcube balance n^3 D^-d / 2 <= |P_j| <= 2 n^3 D^-d.
  std::optional<bool> balance_ok;
  std::size_t min_population = 0;
  std::size_t max_population = 0;
  // Most points of A on one (d-2)-sphere or (d-2)-flat; skipped above budget.
  std::optional<std::size_t> max_codim2_sphere_points;
  // Number of cohyperplanar (d+2)-tuples of A; skipped above budget.
  std::optional<Integer> cohyperplanar_tuples;
};

struct ConstructionReport {
  Method method = Method::greedy;
  std::size_t d = 0;
  Coord n = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> prime_used;
  std::optional<Coord> D_used;
  std::optional<std::size_t> sample_size;
  std::size_t violations_found = 0;
  std::size_t deleted = 0;
  std::size_t final_size = 0;
  // The method's own guarantee holds on the output. For the moment curve this
  // is "no d+1 points on a hyperplane and no 2d on a surface"; for the other
  // methods it is general_position.
  bool verified = false;
  // No d+2 points of the output on a common sphere or hyperplane.
  bool general_position = false;
  std::vector<std::string> warnings;
  std::optional<PipelineDiagnostics> pipeline;
};

struct Construction {
  PointSet points;
  ConstructionReport report;
};

// ---------------------------------------------------------------------------
// Moment curve

inline bool moment_guarantee_holds(const PointSet& ps) {
  const std::size_t d = ps.dim();
  return find_violations(ps, d + 1, SurfaceKind::hyperplanes).empty() && find_violations(ps, 2 * d).empty();
}

/// {(x, x^2 mod p, ..., x^d mod p) : 1 <= x <= floor(p / 4d)} for the largest
/// prime p <= n, residue 0 written as p.
inline Construction moment_curve(Coord n, std::size_t d) {
  require(n >= 2, "moment_curve: n must be at least 2");
  require(d >= 2, "moment_curve: d must be at least 2");
  const auto p = static_cast<Coord>(largest_prime_leq(static_cast<std::uint64_t>(n)));
  const Coord size = p / static_cast<Coord>(4 * d);

  std::vector<LatticePoint> pts;
  for (Coord x = 1; x <= size; ++x) {
    std::vector<Coord> c(d);
    Coord power = 1;
    for (std::size_t k = 0; k < d; ++k) {
      power = static_cast<Coord>(static_cast<__int128>(power) * x % p);
      c[k] = power == 0 ? p : power;
    }
    pts.emplace_back(std::move(c));
  }
  Construction out{PointSet(d, n, std::move(pts)), {}};
  auto& r = out.report;
  r.method = Method::moment_curve;
  r.d = d;
  r.n = n;
  r.prime_used = static_cast<std::uint64_t>(p);
  r.final_size = out.points.size();
  if (size <= 1)
    r.warnings.push_back("n too small for dimension d: floor(p/(4d)) = " + std::to_string(size) +
                         ", construction is degenerate");
  r.general_position = find_violations(out.points).empty();
  r.verified = moment_guarantee_holds(out.points);
  return out;
}

// ---------------------------------------------------------------------------
// Random sampling

/// Each point of [n]^d independently with probability `prob`, scanning the
/// grid in lexicographic order with one Bernoulli draw per point.
inline PointSet random_sample(Coord n, std::size_t d, const Probability& prob, std::uint64_t seed,
                              std::uint64_t stream = 0) {
  validate(prob);
  Rng rng(seed, stream);
  std::vector<LatticePoint> pts;
  for (const auto& p : full_grid(d, n))
    if (rng.bernoulli(prob)) pts.push_back(p);
  return PointSet(d, n, std::move(pts));
}

/// Keeps each point of `ps` independently with probability `prob`.
inline PointSet subsample(const PointSet& ps, const Probability& prob, std::uint64_t seed, std::uint64_t stream) {
  validate(prob);
  Rng rng(seed, stream);
  std::vector<LatticePoint> pts;
  for (const auto& p : ps)
    if (rng.bernoulli(prob)) pts.push_back(p);
  return PointSet(ps.dim(), ps.side(), std::move(pts));
}

// ---------------------------------------------------------------------------
// Deletion

struct DeletionResult {
  PointSet points;
  std::size_t deleted = 0;
  std::size_t violations_found = 0;  // witness surfaces in the input
};

/// Removes points until no d+2 remaining points share a sphere or hyperplane.
/// Each step deletes a point lying in the most violating (d+2)-tuples, as
/// counted over the witness surfaces, breaking ties toward the
/// lexicographically smallest point.
inline DeletionResult deletion_refine(const PointSet& ps) {
  const std::size_t d = ps.dim();
  const auto witnesses = find_violations(ps);
  DeletionResult out{ps, 0, witnesses.size()};

  std::vector<std::vector<LatticePoint>> live;
  for (const auto& w : witnesses) live.push_back(w.members);

  while (!live.empty()) {
    std::map<LatticePoint, Integer> degree;
    for (const auto& members : live) {
      const Integer share = binomial(members.size() - 1, d + 1);
      for (const auto& p : members) degree[p] += share;
    }
    auto best = degree.begin();
    for (auto it = degree.begin(); it != degree.end(); ++it)
      if (it->second > best->second) best = it;
    const LatticePoint victim = best->first;

    out.points.erase(victim);
    ++out.deleted;
    std::vector<std::vector<LatticePoint>> next;
    for (auto& members : live) {
      std::erase(members, victim);
      if (members.size() >= d + 2) next.push_back(std::move(members));
    }
    live = std::move(next);
  }
  if (!find_violations(out.points).empty())
    throw std::logic_error("deletion_refine: violations remain after refinement");
  return out;
}

// ---------------------------------------------------------------------------
// Sample / subsample / delete pipeline

struct PipelineOptions {
  double c_const = 0.0;
  std::size_t retries = 3;
  // Upper limit on d-subsets examined by the (d-2)-sphere and cohyperplanar
  // diagnostics.
  std::uint64_t diagnostic_budget = 200'000;
};

inline Coord largest_power_of_two_leq(Coord n) {
  Coord p = 1;
  while (p <= n / 2) p *= 2;
  return p;
}

inline Probability stage1_probability(Coord n, std::size_t d) {
  std::uint64_t den = 1;
  for (std::size_t i = 3; i < d; ++i) {
    require(den <= std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n),
            "theorem1_pipeline: n^(d-3) does not fit in 64 bits");
    den *= static_cast<std::uint64_t>(n);
  }
  return {1, den};
}

/// n^{-3d/(d+1) - c / log2(log2 n)}, clamped to [0, 1].
inline double stage2_probability(Coord n, std::size_t d, double c) {
  const double ln = std::log2(static_cast<double>(n));
  double e = -3.0 * static_cast<double>(d) / static_cast<double>(d + 1);
  if (c != 0.0) {
    require(n >= 4, "theorem1_pipeline: c_const requires n >= 4 so that log log n > 0");
    e -= c / std::log2(ln);
  }
  return std::clamp(std::exp2(e * ln), 0.0, 1.0);
}

inline Construction theorem1_pipeline(Coord n, std::size_t d, std::uint64_t seed, const PipelineOptions& opt = {}) {
  require(d >= 3, "theorem1_pipeline: requires d >= 3");
  require(n >= 2, "theorem1_pipeline: n must be at least 2");
  require(opt.retries >= 1, "theorem1_pipeline: retries must be at least 1");

  PipelineDiagnostics diag;
  diag.n_used = largest_power_of_two_leq(n);
  diag.c_const = opt.c_const;
  const Coord m = diag.n_used;
  diag.stage1_probability = stage1_probability(m, d);
  diag.stage2_probability = stage2_probability(m, d, opt.c_const);

  const double cube = std::pow(static_cast<double>(m), 3.0);
  std::optional<PointSet> sample;
  for (std::size_t attempt = 0; attempt < opt.retries; ++attempt) {
    diag.attempts = attempt + 1;
    PointSet a = random_sample(m, d, diag.stage1_probability, seed, 2 * attempt);
    const auto size = static_cast<double>(a.size());
    diag.size_window_ok = cube / 2 <= size && size <= 2 * cube;

    diag.partition = a.empty() ? std::nullopt
                               : choose_D(m, d, std::pow(static_cast<double>(a.size()), static_cast<double>(d + 1)));
    diag.balance_ok.reset();
    if (diag.partition) {
      GridPartition gp(m, d, diag.partition->D);
      const auto pop = gp.populations(a);
      diag.min_population = *std::min_element(pop.begin(), pop.end());
      diag.max_population = *std::max_element(pop.begin(), pop.end());
      const double expected = cube / static_cast<double>(gp.cell_count());
      diag.balance_ok = expected / 2 <= static_cast<double>(diag.min_population) &&
                        static_cast<double>(diag.max_population) <= 2 * expected;
    }
    sample = std::move(a);
    if (diag.size_window_ok && diag.balance_ok.value_or(true)) break;
  }

  const PointSet& a = *sample;
  if (binomial(a.size(), d) * a.size() <= opt.diagnostic_budget) {
    diag.max_codim2_sphere_points = max_points_on_codim2_sphere(a);
    diag.cohyperplanar_tuples = count_cohyperplanar_tuples(a);
  }

  const PointSet b = subsample(a, Probability::from_double(diag.stage2_probability), seed, 2 * diag.attempts - 1);
  diag.subsample_size = b.size();
  DeletionResult refined = deletion_refine(b);

  Construction out{std::move(refined.points), {}};
  auto& r = out.report;
  r.method = Method::theorem1_pipeline;
  r.d = d;
  r.n = n;
  r.seed = seed;
  if (diag.partition) r.D_used = diag.partition->D;
  r.sample_size = a.size();
  r.violations_found = refined.violations_found;
  r.deleted = refined.deleted;
  r.final_size = out.points.size();
  if (m != n) r.warnings.push_back("n rounded down to the power of two " + std::to_string(m));
  if (!diag.size_window_ok) r.warnings.push_back("first-stage sample outside the size window after all retries");
  if (diag.balance_ok == false) r.warnings.push_back("subcube populations outside the balance window");
  if (!diag.partition) r.warnings.push_back("no admissible subcube count D for this n");
  r.general_position = find_violations(out.points).empty();
  r.verified = r.general_position;
  r.pipeline = std::move(diag);
  return out;
}

// ---------------------------------------------------------------------------
// Greedy

enum class CandidateOrder { lex, random };

namespace detail {

// Cofactor vector c_T of a (d+1)-subset T: c_T . (|q|^2, q, 1) is the lifted
// determinant of T + {q}.
class Cofactor {
 public:
  explicit Cofactor(const Matrix<Coord>& rows) {
    try {
      wide_ = minors_wide(rows);
    } catch (const Overflow&) {
      big_ = signed_maximal_minors(rows);
    }
  }

  bool vanishes_at(const std::vector<Coord>& lifted) const {
    if (big_.empty()) {
      try {
        Checked128 s(0);
        for (std::size_t j = 0; j < wide_.size(); ++j)
          s = s + Checked128::from_raw(wide_[j]) * Checked128(lifted[j]);
        return s.raw() == 0;
      } catch (const Overflow&) {
        Integer s = 0;
        for (std::size_t j = 0; j < wide_.size(); ++j)
          s += to_integer(Checked128::from_raw(wide_[j])) * lifted[j];
        return s == 0;
      }
    }
    Integer s = 0;
    for (std::size_t j = 0; j < big_.size(); ++j) s += big_[j] * lifted[j];
    return s == 0;
  }

 private:
  std::vector<Wide> wide_;
  std::vector<Integer> big_;
};

inline std::vector<Coord> lifted_row(const LatticePoint& p) {
  std::vector<Coord> r;
  r.reserve(p.dim() + 2);
  r.push_back(p.squared_norm());
  r.insert(r.end(), p.coords().begin(), p.coords().end());
  r.push_back(1);
  return r;
}

}  // namespace detail

/// Scans [n]^d in the given order and keeps each point whose addition leaves
/// no d+2 kept points on a common sphere or hyperplane. The result is
/// maximal.
inline Construction greedy_construct(Coord n, std::size_t d, std::uint64_t seed, CandidateOrder order) {
  require(n >= 2 && d >= 2, "greedy_construct: need n, d >= 2");
  std::vector<LatticePoint> candidates = full_grid(d, n).points();
  if (order == CandidateOrder::random) {
    Rng rng(seed, 0x6772656564ull);
    rng.shuffle(candidates);
  }

  std::vector<LatticePoint> kept;
  std::vector<std::vector<Coord>> kept_rows;
  std::vector<detail::Cofactor> cofactors;
  std::size_t rejected = 0;
  for (const auto& q : candidates) {
    const auto row = detail::lifted_row(q);
    const bool blocked =
        std::any_of(cofactors.begin(), cofactors.end(), [&](const detail::Cofactor& c) { return c.vanishes_at(row); });
    if (blocked) {
      ++rejected;
      continue;
    }
    Matrix<Coord> m(d + 1, d + 2);
    for (std::size_t j = 0; j < d + 2; ++j) m(d, j) = row[j];
    for_each_combination(kept.size(), d, [&](const std::vector<std::size_t>& idx) {
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t j = 0; j < d + 2; ++j) m(r, j) = kept_rows[idx[r]][j];
      cofactors.emplace_back(m);
    });
    kept.push_back(q);
    kept_rows.push_back(row);
  }

  Construction out{PointSet(d, n, std::move(kept)), {}};
  auto& r = out.report;
  r.method = Method::greedy;
  r.d = d;
  r.n = n;
  r.seed = seed;
  r.sample_size = candidates.size();
  r.violations_found = rejected;
  r.final_size = out.points.size();
  r.general_position = find_violations(out.points).empty();
  r.verified = r.general_position;
  return out;
}

}  // namespace lgp
