#pragma once

#include <vector>

#include "gpcover/geometry.hpp"
#include "gpcover/gp.hpp"

namespace gpcover {

/// Accuracy target: posterior variance <= delta everywhere; alpha > 1 is the
/// shrink factor for the small covering disks (radius r_max / alpha).
struct AccuracySpec {
  double delta = 1.0;
  double alpha = 2.0;

  /// Throws Error(delta_out_of_range) unless 0 < delta < signal variance, and
  /// Error(invalid_argument) unless alpha > 1.
  void validate(const Hyperparameters& h) const;
};

struct PlanEntry {
  Point location;
  int count = 1;
  int source_disk = -1;  // index into MeasurementPlan::mis
};

struct MeasurementPlan {
  std::vector<PlanEntry> entries;
  std::vector<Disk> mis;  // radius r_max; the big disks share centers, radius 3*r_max
  double r_max = 0.0;
  double small_radius = 0.0;
  int n_alpha = 1;

  std::size_t location_count() const { return entries.size(); }
  long long measurement_count() const;
  MeasurementMultiset multiset() const;
  std::vector<Disk> big_disks() const;
};

/// Distance beyond which no number of measurements at one site brings the
/// variance down to delta: l * sqrt(-log(1 - delta / s2)).
double compute_r_max(const Hyperparameters& h, double delta);

/// Largest distance at which n co-located measurements still guarantee
/// variance <= delta. Throws Error(insufficient_n) when no radius exists.
double sufficient_radius(const Hyperparameters& h, double delta, long long n);

/// Measurements per site that make a disk of radius r_max / alpha accurate,
/// clamped below at 1.
int compute_n_alpha(const Hyperparameters& h, const AccuracySpec& spec);

struct PlacementOptions {
  /// Move lawn-mower points that fall outside the environment to the nearest
  /// environment point.
  bool hard_boundary = false;
};

/// Cover env with r_max disks, take a greedy MIS, put a 3*r_max disk on every
/// MIS center and cover each with lawn-mower sites of radius r_max / alpha,
/// each receiving n_alpha measurements.
MeasurementPlan disk_cover_placement(const Environment& env, const Hyperparameters& h,
                                     const AccuracySpec& spec,
                                     const PlacementOptions& options = {});

/// Default spacing for coverage checks: r_max / 20.
double default_grid_spacing(const Hyperparameters& h, double delta);

/// Greedy removal of sites whose served environment grid points (those within
/// the sufficient radius) are all served by some other surviving site. Sites
/// are visited in lexicographic location order; survivors keep their input
/// order. `grid_spacing <= 0` selects default_grid_spacing.
MeasurementPlan prune_redundant(const MeasurementPlan& plan, const Environment& env,
                                const Hyperparameters& h, const AccuracySpec& spec,
                                double grid_spacing = 0.0);

struct VerificationReport {
  double max_variance = 0.0;
  Point argmax;
  double mean_variance = 0.0;
  std::size_t grid_points = 0;
  bool pass = false;
};

/// Absolute slack allowed on delta when judging a plan.
inline constexpr double kVerifyTolerance = 1e-9;

/// Posterior variance over an environment grid. `pass` is
/// max_variance <= delta + kVerifyTolerance.
VerificationReport verify_plan(const MeasurementMultiset& plan, const Environment& env,
                               const Hyperparameters& h, double delta, double grid_spacing);

VerificationReport verify_plan(const MeasurementPlan& plan, const Environment& env,
                               const Hyperparameters& h, double delta, double grid_spacing);

}  // namespace gpcover
