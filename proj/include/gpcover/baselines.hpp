#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpcover/gp.hpp"
#include "gpcover/placement.hpp"
#include "gpcover/tour.hpp"

namespace gpcover {

/// Ground-truth field on a regular grid; values are row-major with x fastest.
/// Between nodes the field is bilinear.
struct FieldGrid {
  Point origin;
  double spacing = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
                  static_cast<std::size_t>(ix)];
  }
  Point node(int ix, int iy) const { return {origin.x + ix * spacing, origin.y + iy * spacing}; }
  std::vector<Point> nodes() const;
  bool in_extent(const Point& p) const;
  /// Throws Error(out_of_extent) outside the grid.
  double value_at(const Point& p) const;
  void validate() const;
};

inline constexpr std::size_t kMaxExactSamplePoints = 10000;

/// Exact draw from the zero-mean GP on a grid spanning env's bounding box.
/// Throws Error(grid_too_large) above kMaxExactSamplePoints nodes.
FieldGrid sample_gp_field(const Environment& env, const Hyperparameters& h, double spacing,
                          std::uint64_t seed);

struct SensorModel {
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
};

struct PointResult {
  Point location;
  double truth = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double squared_error = 0.0;
};

struct TrialReport {
  std::vector<PointResult> points;
  double average_variance = 0.0;
  double average_empirical_mse = 0.0;
  double mean_percent_difference = 0.0;  // mean of 100 * |mse - var| / var
};

/// Recomputes the aggregates from `points` (squared_error read as the
/// empirical MSE at each point).
void summarize(TrialReport& report);

/// One noisy sensing pass over `plan`, evaluated at every node of `truth`.
/// Readings are the bilinear truth plus N(0, sensor.noise_variance) noise,
/// drawn from the stream (sensor.seed, trial).
TrialReport simulate_trial(const FieldGrid& truth, const MeasurementMultiset& plan,
                           const SensorModel& sensor, const Hyperparameters& h,
                           std::uint64_t trial = 0);

/// Averages `trials` independent passes (streams 0..trials-1): `mean` is the
/// average prediction and `squared_error` the empirical MSE at each node.
TrialReport run_trials(const FieldGrid& truth, const MeasurementMultiset& plan,
                       const SensorModel& sensor, const Hyperparameters& h, int trials);

struct ConvergencePoint {
  int trials = 0;
  double average_empirical_mse = 0.0;
  double average_variance = 0.0;
  double mean_percent_difference = 0.0;
};

/// For every entry of trial_counts, runs that many fresh trials (trial streams
/// never repeat across entries), averages squared errors per node, and
/// compares them with the posterior variance.
std::vector<ConvergencePoint> convergence_study(const FieldGrid& truth,
                                                const MeasurementMultiset& plan,
                                                const SensorModel& sensor,
                                                const Hyperparameters& h,
                                                std::span<const int> trial_counts);

/// Candidate grid for the greedy baselines: environment grid points sorted
/// lexicographically.
std::vector<Point> candidate_grid(const Environment& env, double spacing);

/// Greedy maximum-entropy picks: each step takes the remaining candidate with
/// the largest posterior variance given earlier picks (one noisy measurement
/// each). Ties go to the lexicographically smallest candidate.
std::vector<Point> entropy_greedy(std::span<const Point> candidates, const Hyperparameters& h,
                                  std::size_t budget);

/// Greedy mutual-information picks: score(y) = var(y | picked) /
/// var(y | unpicked without y). Same tie rule as entropy_greedy.
std::vector<Point> mi_greedy(std::span<const Point> candidates, const Hyperparameters& h,
                             std::size_t budget);

/// Boustrophedon sweep of a resolution-spaced lattice centered in env's
/// bounding box (points outside a polygon are skipped), one measurement per
/// point. Depot defaults to the first lattice point.
Tour lawnmower_plan(const Environment& env, double resolution,
                    std::optional<Point> depot = std::nullopt);

struct CurvePoint {
  double time = 0.0;
  double average_variance = 0.0;
  double average_empirical_mse = 0.0;  // filled by the empirical variant only
};

/// Measurements completed by time t (measurement m at a waypoint finishes
/// eta * m after arrival).
MeasurementMultiset collected_by(const Tour& tour, const TimeModel& time, double t);

/// Average posterior variance over eval_points using measurements collected
/// up to each checkpoint.
std::vector<CurvePoint> variance_over_time(const Tour& tour, const Hyperparameters& h,
                                           std::span<const Point> eval_points,
                                           const TimeModel& time,
                                           std::span<const double> checkpoints);

/// Same curve plus the average empirical MSE at the truth grid nodes over
/// `trials` noisy deployments.
std::vector<CurvePoint> error_over_time(const Tour& tour, const FieldGrid& truth,
                                        const SensorModel& sensor, const Hyperparameters& h,
                                        const TimeModel& time,
                                        std::span<const double> checkpoints, int trials);

/// `count` evenly spaced checkpoints from 0 to tour_time inclusive.
std::vector<double> uniform_checkpoints(const Tour& tour, const TimeModel& time, int count);

}  // namespace gpcover
