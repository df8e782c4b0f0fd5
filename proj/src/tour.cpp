#include "gpcover/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gpcover/error.hpp"

namespace gpcover {
namespace {

double dist(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

}  // namespace

long long Tour::total_dwell() const {
  long long n = 0;
  for (const auto& w : waypoints) n += w.dwell;
  return n;
}

void TimeModel::validate() const {
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw Error(ErrorKind::invalid_argument, "speed must be positive");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorKind::invalid_argument, "eta must be >= 0");
  }
}

double tour_length(const Tour& tour) {
  double len = 0.0;
  Point prev = tour.depot;
  for (const auto& w : tour.waypoints) {
    len += dist(prev, w.location);
    prev = w.location;
  }
  if (tour.closed) len += dist(prev, tour.depot);
  return len;
}

std::vector<double> elapsed_times(const Tour& tour, const TimeModel& time) {
  time.validate();
  std::vector<double> out;
  out.reserve(tour.waypoints.size());
  double t = 0.0;
  Point prev = tour.depot;
  for (const auto& w : tour.waypoints) {
    t += dist(prev, w.location) / time.speed + time.eta * w.dwell;
    out.push_back(t);
    prev = w.location;
  }
  return out;
}

double tour_time(const Tour& tour, const TimeModel& time) {
  time.validate();
  return tour_length(tour) / time.speed + time.eta * static_cast<double>(tour.total_dwell());
}

double route_length(std::span<const Point> points, std::span<const std::size_t> order,
                    const Point& depot) {
  double len = 0.0;
  Point prev = depot;
  for (std::size_t i : order) {
    len += dist(prev, points[i]);
    prev = points[i];
  }
  return len + dist(prev, depot);
}

std::vector<std::size_t> tsp_heuristic(std::span<const Point> points, const Point& depot) {
  const std::size_t n = points.size();
  if (n == 0) return {};

  // Nearest neighbour from the depot.
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<bool> used(n, false);
  Point cur = depot;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double d = squared_distance(cur, points[i]);
      if (d < best_d || (d == best_d && points[i] < points[best])) {
        best = i;
        best_d = d;
      }
    }
    used[best] = true;
    order.push_back(best);
    cur = points[best];
  }

  // 2-opt over the closed route [depot, order..., depot]. Node 0 is the depot.
  std::vector<Point> route;
  route.reserve(n + 1);
  route.push_back(depot);
  for (std::size_t i : order) route.push_back(points[i]);
  std::vector<std::size_t> ids(n + 1);
  ids[0] = n;  // sentinel for the depot
  for (std::size_t i = 0; i < n; ++i) ids[i + 1] = order[i];

  const std::size_t m = route.size();
  double scale = 0.0;
  for (const auto& p : route) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double eps = 1e-12 * std::max(scale, 1.0);

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const Point& a = route[i - 1];
        const Point& b = route[i];
        const Point& c = route[j];
        const Point& d = route[(j + 1) % m];
        const double delta = dist(a, c) + dist(b, d) - dist(a, b) - dist(c, d);
        if (delta < -eps) {
          std::reverse(route.begin() + static_cast<std::ptrdiff_t>(i),
                       route.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          std::reverse(ids.begin() + static_cast<std::ptrdiff_t>(i),
                       ids.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return {ids.begin() + 1, ids.end()};
}

Tour tsp_tour(std::span<const Point> points, const Point& depot, int dwell) {
  Tour tour{depot, {}, true};
  for (std::size_t i : tsp_heuristic(points, depot)) {
    tour.waypoints.push_back({points[i], dwell, -1});
  }
  return tour;
}

DiskCoverTour disk_cover_tour(const MeasurementPlan& plan, const AccuracySpec& spec,
                              std::optional<Point> depot) {
  DiskCoverTour out;
  out.plan = plan;
  std::vector<Point> centers;
  for (const auto& d : plan.mis) centers.push_back(d.center);
  const Point home = depot.value_or(centers.empty() ? Point{} : centers.front());
  out.tour = Tour{home, {}, true};
  if (centers.empty()) return out;

  out.disk_order = tsp_heuristic(centers, home);
  out.center_route_length = route_length(centers, out.disk_order, home);
  out.center_route_lower_bound = mis_tour_lower_bound(plan.mis);

  std::vector<std::vector<const PlanEntry*>> by_disk(plan.mis.size());
  for (const auto& e : plan.entries) {
    if (e.source_disk < 0 || static_cast<std::size_t>(e.source_disk) >= plan.mis.size()) {
      throw Error(ErrorKind::invalid_argument, "plan entry refers to an unknown disk");
    }
    by_disk[static_cast<std::size_t>(e.source_disk)].push_back(&e);
  }

  for (std::size_t k = 0; k < out.disk_order.size(); ++k) {
    const std::size_t disk = out.disk_order[k];
    const Point next = k + 1 < out.disk_order.size() ? centers[out.disk_order[k + 1]] : home;
    auto sweep = by_disk[disk];
    if (sweep.size() > 1 &&
        squared_distance(sweep.front()->location, next) < squared_distance(sweep.back()->location, next)) {
      std::reverse(sweep.begin(), sweep.end());
    }
    const int group = static_cast<int>(disk);
    out.tour.waypoints.push_back({centers[disk], 0, group});
    double detour = 0.0;
    Point prev = centers[disk];
    for (const PlanEntry* e : sweep) {
      detour += dist(prev, e->location);
      prev = e->location;
      out.tour.waypoints.push_back({e->location, e->count, group});
    }
    out.max_detour_length = std::max(out.max_detour_length, detour);
  }
  if (plan.r_max > 0.0) {
    out.detour_constant = out.max_detour_length / (spec.alpha * spec.alpha * plan.r_max);
  }
  return out;
}

DiskCoverTour disk_cover_tour(const Environment& env, const Hyperparameters& h,
                              const AccuracySpec& spec, const TimeModel& time,
                              std::optional<Point> depot, const PlacementOptions& options) {
  time.validate();
  return disk_cover_tour(disk_cover_placement(env, h, spec, options), spec, depot);
}

}  // namespace gpcover
