#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace drc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double manhattan(Point a, Point b) noexcept {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

enum class TourMode { closed_cycle, open_path };

/// A visiting order over the input points and its Manhattan length.
/// Closed cycles start at index 0 and the return leg is implied.
struct Tour {
  double length = 0.0;
  std::vector<int> order;
};

inline constexpr int kMaxExactPoints = 20;
inline constexpr int kMaxBruteForcePoints = 9;

/// Exact minimum tour by bitmask dynamic programming over subsets.
/// open_path leaves both endpoints free. Throws CapacityError above
/// kMaxExactPoints points and PreconditionError below 2.
Tour exact_tour(std::span<const Point> points, TourMode mode);
double exact_tour_length(std::span<const Point> points, TourMode mode);

/// Enumerates every permutation. Test oracle; at most kMaxBruteForcePoints.
double brute_force_tour_length(std::span<const Point> points, TourMode mode);

/// Nearest neighbour from index 0 improved by 2-opt until no move helps.
/// Used only when a batch outgrows the exact solver.
Tour heuristic_tour(std::span<const Point> points, TourMode mode);

/// Length of a given visiting order.
double tour_length(std::span<const Point> points, std::span<const int> order, TourMode mode);

}  // namespace drc
