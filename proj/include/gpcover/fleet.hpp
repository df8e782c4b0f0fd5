#pragma once

#include <vector>

#include "gpcover/tour.hpp"

namespace gpcover {

struct SplitParameters {
  int k = 1;
  double l_max = 0.0;  // farthest dwell waypoint from the depot
  int n2 = 1;          // measurements per site used in the split thresholds
  double eta = 0.0;
};

/// Parameters with l_max measured from the tour.
SplitParameters make_split_parameters(const Tour& tour, int k, int n2, double eta);

/// Largest depot distance over waypoints with a non-zero dwell.
double farthest_dwell_distance(const Tour& tour);

struct SubtourSet {
  std::vector<Tour> subtours;
  Tour source;
  std::vector<int> split_indices;  // p(1..k-1) as waypoint indices, -1 for "none yet"
};

/// k-way split of a closed tour. Subtour j ends at the last measurement
/// waypoint whose elapsed time is within (j/k)(T - (2 l_max + eta n2)) +
/// (l_max + eta n2); every subtour starts and ends at the depot. l_max is
/// always recomputed from the tour.
SubtourSet split_tour(const Tour& tour, const SplitParameters& params);

double makespan(const SubtourSet& set, const TimeModel& time);

struct MakespanCertificate {
  double makespan = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

/// bound = (T - (2 l_max + eta n2)) / k + 4 l_max + 2 eta n2 with T the source
/// tour time; satisfied when makespan <= bound + 1e-9.
MakespanCertificate makespan_certificate(const SubtourSet& set, const SplitParameters& params,
                                         const TimeModel& time);

}  // namespace gpcover
