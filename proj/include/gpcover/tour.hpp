#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gpcover/placement.hpp"

namespace gpcover {

struct Waypoint {
  Point location;
  int dwell = 0;   // measurements taken here; 0 for pure transit
  int group = -1;  // big-disk index for disk-cover tours, -1 otherwise

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// A depot-anchored route. A closed tour returns to the depot after the last
/// waypoint.
struct Tour {
  Point depot;
  std::vector<Waypoint> waypoints;
  bool closed = true;

  long long total_dwell() const;
  friend bool operator==(const Tour&, const Tour&) = default;
};

/// Unit-speed travel plus eta seconds per measurement.
struct TimeModel {
  double speed = 1.0;
  double eta = 0.0;

  void validate() const;
};

double tour_length(const Tour& tour);
double tour_time(const Tour& tour, const TimeModel& time);

/// Time at which the robot finishes the dwell at each waypoint (travel along
/// the tour plus every dwell up to and including that waypoint).
std::vector<double> elapsed_times(const Tour& tour, const TimeModel& time);

/// Closed route length depot -> points[order...] -> depot.
double route_length(std::span<const Point> points, std::span<const std::size_t> order,
                    const Point& depot);

/// Nearest-neighbour construction from the depot followed by 2-opt until no
/// exchange shortens the route. Ties go to the lexicographically smaller
/// point. Returns a visiting order over `points`.
std::vector<std::size_t> tsp_heuristic(std::span<const Point> points, const Point& depot);

/// Tour over `points` in TSP-heuristic order, `dwell` measurements each.
Tour tsp_tour(std::span<const Point> points, const Point& depot, int dwell);

struct DiskCoverTour {
  MeasurementPlan plan;
  Tour tour;
  std::vector<std::size_t> disk_order;   // MIS indices in visiting order
  double center_route_length = 0.0;      // closed route over MIS centers
  double center_route_lower_bound = 0.0; // 0.24 * |MIS| * r_max
  double max_detour_length = 0.0;        // longest intra-disk sweep incl. entry leg
  double detour_constant = 0.0;          // max_detour_length / (alpha^2 * r_max)
};

/// TSP over the big-disk centers, then within each disk a transit waypoint at
/// the center followed by its lawn-mower sites (n_alpha dwell each). The sweep
/// direction is the one that ends closer to the next center (or the depot).
/// Depot defaults to the first MIS center.
DiskCoverTour disk_cover_tour(const Environment& env, const Hyperparameters& h,
                              const AccuracySpec& spec, const TimeModel& time,
                              std::optional<Point> depot = std::nullopt,
                              const PlacementOptions& options = {});

/// Same construction over an already computed (possibly pruned) plan.
DiskCoverTour disk_cover_tour(const MeasurementPlan& plan, const AccuracySpec& spec,
                              std::optional<Point> depot = std::nullopt);

}  // namespace gpcover
