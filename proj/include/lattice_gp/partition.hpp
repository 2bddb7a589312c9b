#pragma once

#include "integer.hpp"
#include "point_set.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace lgp {

// Partition of [n]^d into D^d congruent subcubes of side n/D. Along each axis
// subcube i covers the coordinates {i*n/D + 1, ..., (i+1)*n/D}.
class GridPartition {
 public:
  GridPartition(Coord n, std::size_t d, Coord D) : n_(n), d_(d), D_(D) {
    require(d >= 1, "GridPartition: dimension must be positive");
    require(D >= 1 && D <= n, "GridPartition: need 1 <= D <= n");
    require(n % D == 0, "GridPartition: D must divide n");
  }

  Coord n() const { return n_; }
  std::size_t dim() const { return d_; }
  Coord parts() const { return D_; }
  Coord cell_side() const { return n_ / D_; }

  std::uint64_t cell_count() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < d_; ++i) c *= static_cast<std::uint64_t>(D_);
    return c;
  }

  std::uint64_t points_per_cell() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < d_; ++i) c *= static_cast<std::uint64_t>(cell_side());
    return c;
  }

  // i_j = ceil(p_j * D / n) - 1.
  std::vector<Coord> cell_of(const LatticePoint& p) const {
    require(p.dim() == d_ && p.in_cube(n_), "GridPartition::cell_of: point outside [1,n]^d");
    std::vector<Coord> idx(d_);
    for (std::size_t j = 0; j < d_; ++j) idx[j] = (p[j] * D_ + n_ - 1) / n_ - 1;
    return idx;
  }

  std::uint64_t linear_index(const std::vector<Coord>& cell) const {
    std::uint64_t k = 0;
    for (Coord c : cell) k = k * static_cast<std::uint64_t>(D_) + static_cast<std::uint64_t>(c);
    return k;
  }

  std::vector<Coord> cell_at(std::uint64_t linear) const {
    std::vector<Coord> cell(d_);
    for (std::size_t j = d_; j > 0; --j) {
      cell[j - 1] = static_cast<Coord>(linear % static_cast<std::uint64_t>(D_));
      linear /= static_cast<std::uint64_t>(D_);
    }
    return cell;
  }

  // Inclusive lattice bounds of a cell along axis j.
  Coord low(const std::vector<Coord>& cell, std::size_t j) const { return cell[j] * cell_side() + 1; }
  Coord high(const std::vector<Coord>& cell, std::size_t j) const { return (cell[j] + 1) * cell_side(); }

  // |Q_j ∩ A| for every cell, indexed by linear_index.
  std::vector<std::size_t> populations(const PointSet& ps) const {
    std::vector<std::size_t> pop(cell_count(), 0);
    for (const auto& p : ps) ++pop[linear_index(cell_of(p))];
    return pop;
  }

 private:
  Coord n_;
  std::size_t d_;
  Coord D_;
};

struct PartitionChoice {
  Coord D = 0;
  double target = 0.0;  // the unclamped lower expression
  bool clamped = false;
};

/// Smallest power of two at least n^{3(d+1)/(d^2+d-1)} * S^{-1/(d^2+d-1)},
/// clamped to power-of-two divisors of n in (1, n). nullopt when n has no such
/// divisor.
inline std::optional<PartitionChoice> choose_D(Coord n, std::size_t d, double sphere_count_estimate) {
  require(n >= 1 && d >= 1 && sphere_count_estimate > 0, "choose_D: inputs must be positive");
  const double e = static_cast<double>(d * d + d - 1);
  const double log_target =
      3.0 * static_cast<double>(d + 1) / e * std::log2(static_cast<double>(n)) - std::log2(sphere_count_estimate) / e;
  PartitionChoice out;
  out.target = std::exp2(log_target);

  // Power-of-two divisors of n strictly between 1 and n.
  std::vector<Coord> admissible;
  for (Coord p = 2; p < n && n % p == 0; p *= 2) admissible.push_back(p);
  if (admissible.empty()) return std::nullopt;

  for (Coord p : admissible)
    if (static_cast<double>(p) >= out.target) {
      out.D = p;
      // Lower clamp: the formula asked for D <= 1.
      out.clamped = out.target <= 1.0;
      return out;
    }
  out.D = admissible.back();
  out.clamped = true;
  return out;
}

}  // namespace lgp
