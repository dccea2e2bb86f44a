#include "drc/tsp.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "drc/error.hpp"

namespace drc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_size(std::size_t q, int cap) {
  if (q < 2) throw PreconditionError("a tour needs at least 2 points");
  if (q > static_cast<std::size_t>(cap)) {
    throw CapacityError("tour over " + std::to_string(q) + " points exceeds capacity " +
                        std::to_string(cap));
  }
}

std::vector<double> distance_matrix(std::span<const Point> pts) {
  const auto q = pts.size();
  std::vector<double> d(q * q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) d[i * q + j] = manhattan(pts[i], pts[j]);
  }
  return d;
}

// Cycle through point 0: states cover the other q-1 points.
Tour held_karp_cycle(std::span<const Point> pts) {
  // Bounded so the compiler can see every shift stays in range.
  const int q = std::min(static_cast<int>(pts.size()), kMaxExactPoints);
  const auto d = distance_matrix(pts);
  const int n = q - 1;
  const std::uint32_t full = (1u << n) - 1;
  std::vector<double> cost(static_cast<std::size_t>(full + 1) * n, kInf);
  std::vector<std::int8_t> parent(cost.size(), -1);
  auto at = [n](std::uint32_t mask, int j) { return static_cast<std::size_t>(mask) * n + j; };

  for (int j = 0; j < n; ++j) cost[at(1u << j, j)] = d[j + 1];
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < n; ++j) {
      if (!(mask >> j & 1u)) continue;
      const double base = cost[at(mask, j)];
      if (base == kInf) continue;
      const double* row = &d[static_cast<std::size_t>(j + 1) * q + 1];
      for (int k = 0; k < n; ++k) {
        if (mask >> k & 1u) continue;
        const std::uint32_t next = mask | (1u << k);
        const double c = base + row[k];
        if (c < cost[at(next, k)]) {
          cost[at(next, k)] = c;
          parent[at(next, k)] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  Tour tour;
  tour.length = kInf;
  int last = -1;
  for (int j = 0; j < n; ++j) {
    const double c = cost[at(full, j)] + d[static_cast<std::size_t>(j + 1) * q];
    if (c < tour.length) {
      tour.length = c;
      last = j;
    }
  }
  std::vector<int> rev;
  std::uint32_t mask = full;
  while (last >= 0) {
    rev.push_back(last + 1);
    const int prev = parent[at(mask, last)];
    mask &= ~(1u << last);
    last = prev;
  }
  tour.order.push_back(0);
  tour.order.insert(tour.order.end(), rev.rbegin(), rev.rend());
  return tour;
}

// Hamiltonian path with both endpoints free.
Tour held_karp_path(std::span<const Point> pts) {
  // Bounded so the compiler can see every shift stays in range.
  const int q = std::min(static_cast<int>(pts.size()), kMaxExactPoints);
  const auto d = distance_matrix(pts);
  const std::uint32_t full = (1u << q) - 1;
  std::vector<double> cost(static_cast<std::size_t>(full + 1) * q, kInf);
  std::vector<std::int8_t> parent(cost.size(), -1);
  auto at = [q](std::uint32_t mask, int j) { return static_cast<std::size_t>(mask) * q + j; };

  for (int j = 0; j < q; ++j) cost[at(1u << j, j)] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < q; ++j) {
      if (!(mask >> j & 1u)) continue;
      const double base = cost[at(mask, j)];
      if (base == kInf) continue;
      const double* row = &d[static_cast<std::size_t>(j) * q];
      for (int k = 0; k < q; ++k) {
        if (mask >> k & 1u) continue;
        const std::uint32_t next = mask | (1u << k);
        const double c = base + row[k];
        if (c < cost[at(next, k)]) {
          cost[at(next, k)] = c;
          parent[at(next, k)] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  Tour tour;
  tour.length = kInf;
  int last = -1;
  for (int j = 0; j < q; ++j) {
    if (cost[at(full, j)] < tour.length) {
      tour.length = cost[at(full, j)];
      last = j;
    }
  }
  std::uint32_t mask = full;
  while (last >= 0) {
    tour.order.push_back(last);
    const int prev = parent[at(mask, last)];
    mask &= ~(1u << last);
    last = prev;
  }
  std::reverse(tour.order.begin(), tour.order.end());
  return tour;
}

}  // namespace

double tour_length(std::span<const Point> pts, std::span<const int> order, TourMode mode) {
  double total = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) total += manhattan(pts[order[i - 1]], pts[order[i]]);
  if (mode == TourMode::closed_cycle && order.size() > 1) {
    total += manhattan(pts[order.back()], pts[order.front()]);
  }
  return total;
}

Tour exact_tour(std::span<const Point> points, TourMode mode) {
  check_size(points.size(), kMaxExactPoints);
  return mode == TourMode::closed_cycle ? held_karp_cycle(points) : held_karp_path(points);
}

double exact_tour_length(std::span<const Point> points, TourMode mode) {
  return exact_tour(points, mode).length;
}

double brute_force_tour_length(std::span<const Point> points, TourMode mode) {
  check_size(points.size(), kMaxBruteForcePoints);
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  double best = kInf;
  // Fixing the first point loses nothing for a cycle.
  const auto first = mode == TourMode::closed_cycle ? order.begin() + 1 : order.begin();
  do {
    best = std::min(best, tour_length(points, order, mode));
  } while (std::next_permutation(first, order.end()));
  return best;
}

Tour heuristic_tour(std::span<const Point> points, TourMode mode) {
  const int q = static_cast<int>(points.size());
  if (q < 2) throw PreconditionError("a tour needs at least 2 points");

  std::vector<int> order{0};
  std::vector<bool> used(q, false);
  used[0] = true;
  for (int step = 1; step < q; ++step) {
    const Point from = points[order.back()];
    int best = -1;
    double best_d = kInf;
    for (int k = 0; k < q; ++k) {
      if (used[k]) continue;
      const double dk = manhattan(from, points[k]);
      if (dk < best_d) {
        best_d = dk;
        best = k;
      }
    }
    used[best] = true;
    order.push_back(best);
  }

  // 2-opt: reverse order[i..j] when it shortens the tour.
  const bool closed = mode == TourMode::closed_cycle;
  auto pt = [&](int idx) { return points[order[idx]]; };
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 1; i < q - 1; ++i) {
      for (int j = i + 1; j < q; ++j) {
        const bool has_next = j + 1 < q || closed;
        const Point a = pt(i - 1), b = pt(i), c = pt(j);
        double before = manhattan(a, b);
        double after = manhattan(a, c);
        if (has_next) {
          const Point dpt = pt((j + 1) % q);
          before += manhattan(c, dpt);
          after += manhattan(b, dpt);
        }
        if (after < before - 1e-12) {
          std::reverse(order.begin() + i, order.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
  return Tour{tour_length(points, order, mode), std::move(order)};
}

}  // namespace drc
