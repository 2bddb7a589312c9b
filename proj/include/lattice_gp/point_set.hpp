#pragma once

#include "integer.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lgp {

// A point of the lattice cube [n]^d. Coordinates are 1-based.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<Coord> coords) : coords_(std::move(coords)) {}
  LatticePoint(std::initializer_list<Coord> coords) : coords_(coords) {}

  std::size_t dim() const { return coords_.size(); }
  Coord operator[](std::size_t i) const { return coords_[i]; }
  Coord& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Coord>& coords() const { return coords_; }

  Coord squared_norm() const {
    Coord s = 0;
    for (Coord c : coords_) s += c * c;
    return s;
  }

  bool in_cube(Coord n) const {
    return std::all_of(coords_.begin(), coords_.end(), [n](Coord c) { return c >= 1 && c <= n; });
  }

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<Coord> coords_;
};

inline void require_same_dimension(std::span<const LatticePoint> pts, std::size_t d) {
  for (const auto& p : pts) require(p.dim() == d, "points of mixed dimension");
}

inline void require_distinct(std::span<const LatticePoint> pts) {
  std::vector<LatticePoint> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "duplicate points in predicate input");
}

// Canonical subset of [n]^d: sorted lexicographically, no duplicates.
class PointSet {
 public:
  PointSet(std::size_t d, Coord n) : d_(d), n_(n) {
    require(d >= 2, "PointSet: dimension must be at least 2");
    require(n >= 1, "PointSet: grid side must be at least 1");
  }

  PointSet(std::size_t d, Coord n, std::vector<LatticePoint> points) : PointSet(d, n) {
    for (const auto& p : points) {
      require(p.dim() == d, "PointSet: point has wrong dimension");
      require(p.in_cube(n), "PointSet: point outside [1,n]^d");
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    points_ = std::move(points);
  }

  std::size_t dim() const { return d_; }
  Coord side() const { return n_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const LatticePoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<LatticePoint>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool contains(const LatticePoint& p) const { return std::binary_search(points_.begin(), points_.end(), p); }

  bool insert(const LatticePoint& p) {
    require(p.dim() == d_ && p.in_cube(n_), "PointSet::insert: point outside [1,n]^d");
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it != points_.end() && *it == p) return false;
    points_.insert(it, p);
    return true;
  }

  bool erase(const LatticePoint& p) {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) return false;
    points_.erase(it);
    return true;
  }

  // Subset keeping the points whose index is listed.
  PointSet subset(std::span<const std::size_t> indices) const {
    std::vector<LatticePoint> pts;
    pts.reserve(indices.size());
    for (std::size_t i : indices) pts.push_back(points_[i]);
    return PointSet(d_, n_, std::move(pts));
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t d_;
  Coord n_;
  std::vector<LatticePoint> points_;
};

// All of [n]^d in lexicographic order.
inline PointSet full_grid(std::size_t d, Coord n) {
  std::vector<LatticePoint> pts;
  std::vector<Coord> cur(d, 1);
  while (true) {
    pts.emplace_back(cur);
    std::size_t i = d;
    while (i > 0 && cur[i - 1] == n) cur[--i] = 1;
    if (i == 0) break;
    ++cur[i - 1];
  }
  return PointSet(d, n, std::move(pts));
}

}  // namespace lgp
