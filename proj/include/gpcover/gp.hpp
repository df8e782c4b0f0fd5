#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "gpcover/point.hpp"

namespace gpcover {

/// Squared-exponential kernel hyperparameters. All three must be strictly
/// positive; the noise variance is also what keeps the Gram matrix positive
/// definite, so there is no separate jitter anywhere in the GP code.
struct Hyperparameters {
  double length_scale = 1.0;     // meters
  double signal_variance = 1.0;  // field units squared
  double noise_variance = 0.1;   // field units squared

  /// Throws Error(invalid_argument) unless every field is finite and > 0.
  void validate() const;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

struct Observation {
  Point location;
  double value = 0.0;
};

/// Measurements taken at one location. `values`, when present, holds one
/// reading per measurement.
struct MeasurementEntry {
  Point location;
  int count = 1;
  std::optional<std::vector<double>> values;
};

using MeasurementMultiset = std::vector<MeasurementEntry>;

/// Throws Error(invalid_argument) on a non-positive count or a values list
/// whose length differs from count.
void validate(const MeasurementMultiset& m);

double kernel_eval(const Point& a, const Point& b, const Hyperparameters& h);

/// Prior covariance between every pair of `a` x `b`.
Eigen::MatrixXd kernel_matrix(std::span<const Point> a, std::span<const Point> b,
                              const Hyperparameters& h);

/// Posterior variance at `x`. When every entry shares a single location the
/// closed form of repeated_measurement_variance is used; otherwise the
/// multiset is expanded into one Gram-matrix row per measurement.
double posterior_variance(const Point& x, const MeasurementMultiset& m,
                          const Hyperparameters& h);

/// Same quantity, always through the expanded Gram matrix (no fast path).
double posterior_variance_expanded(const Point& x, const MeasurementMultiset& m,
                                   const Hyperparameters& h);

/// Posterior mean with a zero prior mean. Throws Error(missing_values) if any
/// entry has no values.
double posterior_mean(const Point& x, const MeasurementMultiset& m,
                      const Hyperparameters& h);

/// Variance at distance r from a site holding n co-located measurements.
double repeated_measurement_variance(double r, long long n, const Hyperparameters& h);

/// Negative log marginal likelihood of zero-mean data under h.
double nlml(std::span<const Observation> data, const Hyperparameters& h);

/// One axis of the hyperparameter search grid: `count` log-spaced values in
/// [min, max] (a single value when count == 1 or min == max).
struct LogAxis {
  double min = 1.0;
  double max = 1.0;
  int count = 1;

  std::vector<double> values() const;
};

struct SearchGrid {
  LogAxis length_scale;
  LogAxis signal_variance;
  LogAxis noise_variance;

  /// Bounds scaled to the data: length scales from 1% of the bounding-box
  /// diagonal up to the diagonal, variances around the sample variance.
  static SearchGrid defaults_for(std::span<const Observation> data);
};

struct FitResult {
  Hyperparameters hyperparameters;
  double nlml = 0.0;
};

/// Grid search for the nlml minimizer. Ties resolve to the first grid node
/// in (length scale, signal variance, noise variance) ascending order.
/// Throws Error(degenerate_data) with fewer than two distinct locations.
FitResult fit_hyperparameters(std::span<const Observation> data, const SearchGrid& grid);

/// A factored posterior for batch queries. Co-located measurements are merged
/// into one site whose noise variance is noise/count; for the posterior this is
/// an exact identity (the site mean is a sufficient statistic), and it keeps
/// the factorization at the number of distinct locations.
class Posterior {
 public:
  Posterior(const MeasurementMultiset& m, const Hyperparameters& h);

  std::size_t site_count() const noexcept { return sites_.size(); }
  const std::vector<Point>& sites() const noexcept { return sites_; }
  const std::vector<long long>& site_counts() const noexcept { return counts_; }
  const Hyperparameters& hyperparameters() const noexcept { return h_; }

  double variance(const Point& x) const;
  std::vector<double> variances(std::span<const Point> xs) const;

  /// W such that the posterior mean at xs equals W * site_means, where
  /// site_means[s] is the average reading at site s.
  Eigen::MatrixXd mean_weights(std::span<const Point> xs) const;

  /// Site means from an entry list whose locations match this posterior's.
  Eigen::VectorXd site_means(const MeasurementMultiset& m) const;

 private:
  std::size_t site_index(const Point& p) const;

  Hyperparameters h_;
  std::vector<Point> sites_;  // sorted lexicographically
  std::vector<long long> counts_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace gpcover
