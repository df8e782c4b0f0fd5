#include "gpcover/fleet.hpp"

#include <algorithm>
#include <cmath>

#include "gpcover/error.hpp"

namespace gpcover {

double farthest_dwell_distance(const Tour& tour) {
  double l = 0.0;
  for (const auto& w : tour.waypoints) {
    if (w.dwell > 0) l = std::max(l, distance(tour.depot, w.location));
  }
  return l;
}

SplitParameters make_split_parameters(const Tour& tour, int k, int n2, double eta) {
  return {k, farthest_dwell_distance(tour), n2, eta};
}

SubtourSet split_tour(const Tour& tour, const SplitParameters& params) {
  if (params.k < 1) throw Error(ErrorKind::invalid_argument, "robot count k must be >= 1");
  if (!tour.closed) throw Error(ErrorKind::invalid_argument, "only closed tours can be split");
  if (params.n2 < 0) throw Error(ErrorKind::invalid_argument, "n2 must be >= 0");
  const TimeModel time{1.0, params.eta};
  time.validate();

  const double l_max = farthest_dwell_distance(tour);
  const double total = tour_time(tour, time);
  const double anchor = 2.0 * l_max + params.eta * params.n2;
  const auto elapsed = elapsed_times(tour, time);
  const int n = static_cast<int>(tour.waypoints.size());

  SubtourSet out;
  out.source = tour;
  int prev = -1;
  for (int j = 1; j < params.k; ++j) {
    const double threshold = (static_cast<double>(j) / params.k) * (total - anchor) +
                             (l_max + params.eta * params.n2);
    int p = prev;
    for (int i = prev + 1; i < n; ++i) {
      if (elapsed[static_cast<std::size_t>(i)] > threshold + 1e-9) break;
      if (tour.waypoints[static_cast<std::size_t>(i)].dwell > 0) p = i;
    }
    out.split_indices.push_back(p);
    prev = p;
  }

  int begin = 0;
  for (int j = 0; j < params.k; ++j) {
    const int end = j + 1 < params.k ? out.split_indices[static_cast<std::size_t>(j)] + 1 : n;
    Tour sub{tour.depot, {}, true};
    for (int i = begin; i < end; ++i) sub.waypoints.push_back(tour.waypoints[static_cast<std::size_t>(i)]);
    out.subtours.push_back(std::move(sub));
    begin = std::max(begin, end);
  }
  return out;
}

double makespan(const SubtourSet& set, const TimeModel& time) {
  double m = 0.0;
  for (const auto& t : set.subtours) m = std::max(m, tour_time(t, time));
  return m;
}

MakespanCertificate makespan_certificate(const SubtourSet& set, const SplitParameters& params,
                                         const TimeModel& time) {
  if (params.k < 1) throw Error(ErrorKind::invalid_argument, "robot count k must be >= 1");
  const double l_max = farthest_dwell_distance(set.source);
  const double total = tour_time(set.source, time);
  const double anchor = 2.0 * l_max + time.eta * params.n2;
  MakespanCertificate c;
  c.makespan = makespan(set, time);
  c.bound = (total - anchor) / params.k + 4.0 * l_max + 2.0 * time.eta * params.n2;
  c.satisfied = c.makespan <= c.bound + 1e-9;
  return c;
}

}  // namespace gpcover
