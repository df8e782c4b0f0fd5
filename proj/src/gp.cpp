#include "gpcover/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "gpcover/error.hpp"

namespace gpcover {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::vector<Point> expand_locations(const MeasurementMultiset& m) {
  std::vector<Point> rows;
  for (const auto& e : m) {
    for (int i = 0; i < e.count; ++i) rows.push_back(e.location);
  }
  return rows;
}

Eigen::LLT<Eigen::MatrixXd> factor_noisy_gram(std::span<const Point> rows,
                                              const Hyperparameters& h) {
  Eigen::MatrixXd k = kernel_matrix(rows, rows, h);
  k.diagonal().array() += h.noise_variance;
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical_failure,
                "Cholesky factorization of the noise-regularized Gram matrix failed");
  }
  return llt;
}

double clamp_variance(double v, const Hyperparameters& h) {
  return std::clamp(v, 0.0, h.signal_variance);
}

}  // namespace

void Hyperparameters::validate() const {
  if (!positive_finite(length_scale) || !positive_finite(signal_variance) ||
      !positive_finite(noise_variance)) {
    throw Error(ErrorKind::invalid_argument,
                "hyperparameters must be finite and strictly positive (l=" +
                    std::to_string(length_scale) + ", s2=" + std::to_string(signal_variance) +
                    ", w2=" + std::to_string(noise_variance) + ")");
  }
}

void validate(const MeasurementMultiset& m) {
  for (const auto& e : m) {
    if (e.count < 1) {
      throw Error(ErrorKind::invalid_argument, "measurement count must be >= 1");
    }
    if (e.values && static_cast<int>(e.values->size()) != e.count) {
      throw Error(ErrorKind::invalid_argument,
                  "measurement values length must equal the measurement count");
    }
  }
}

double kernel_eval(const Point& a, const Point& b, const Hyperparameters& h) {
  const double l2 = h.length_scale * h.length_scale;
  return h.signal_variance * std::exp(-squared_distance(a, b) / (2.0 * l2));
}

Eigen::MatrixXd kernel_matrix(std::span<const Point> a, std::span<const Point> b,
                              const Hyperparameters& h) {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  const double inv = -1.0 / (2.0 * h.length_scale * h.length_scale);
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    const Point& bj = b[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      k(i, j) = h.signal_variance *
                std::exp(squared_distance(a[static_cast<std::size_t>(i)], bj) * inv);
    }
  }
  return k;
}

double repeated_measurement_variance(double r, long long n, const Hyperparameters& h) {
  h.validate();
  if (!(r >= 0.0) || n < 1) {
    throw Error(ErrorKind::invalid_argument, "repeated_measurement_variance needs r >= 0, n >= 1");
  }
  const double decay = std::exp(-(r * r) / (h.length_scale * h.length_scale));
  const double shrink =
      1.0 + h.noise_variance / (static_cast<double>(n) * h.signal_variance);
  return h.signal_variance * (1.0 - decay / shrink);
}

double posterior_variance_expanded(const Point& x, const MeasurementMultiset& m,
                                   const Hyperparameters& h) {
  h.validate();
  validate(m);
  const auto rows = expand_locations(m);
  if (rows.empty()) return h.signal_variance;
  const auto llt = factor_noisy_gram(rows, h);
  const Point xs[1] = {x};
  Eigen::VectorXd kx = kernel_matrix(rows, xs, h).col(0);
  llt.matrixL().solveInPlace(kx);
  return clamp_variance(h.signal_variance - kx.squaredNorm(), h);
}

double posterior_variance(const Point& x, const MeasurementMultiset& m,
                          const Hyperparameters& h) {
  h.validate();
  validate(m);
  if (m.empty()) return h.signal_variance;
  const bool single_site = std::all_of(m.begin(), m.end(), [&](const MeasurementEntry& e) {
    return e.location == m.front().location;
  });
  if (single_site) {
    long long n = 0;
    for (const auto& e : m) n += e.count;
    return repeated_measurement_variance(distance(x, m.front().location), n, h);
  }
  return posterior_variance_expanded(x, m, h);
}

double posterior_mean(const Point& x, const MeasurementMultiset& m, const Hyperparameters& h) {
  h.validate();
  validate(m);
  std::vector<double> y;
  for (const auto& e : m) {
    if (!e.values) throw Error(ErrorKind::missing_values, "posterior_mean needs values on every entry");
    y.insert(y.end(), e.values->begin(), e.values->end());
  }
  if (y.empty()) return 0.0;
  const auto rows = expand_locations(m);
  const auto llt = factor_noisy_gram(rows, h);
  const Eigen::VectorXd alpha = llt.solve(Eigen::Map<const Eigen::VectorXd>(
      y.data(), static_cast<Eigen::Index>(y.size())));
  const Point xs[1] = {x};
  return kernel_matrix(xs, rows, h).row(0).dot(alpha);
}

double nlml(std::span<const Observation> data, const Hyperparameters& h) {
  h.validate();
  if (data.empty()) throw Error(ErrorKind::degenerate_data, "nlml needs at least one observation");
  std::vector<Point> locs;
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    locs.push_back(data[i].location);
    y(static_cast<Eigen::Index>(i)) = data[i].value;
  }
  const auto llt = factor_noisy_gram(locs, h);
  const Eigen::VectorXd z = llt.matrixL().solve(y);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double n = static_cast<double>(data.size());
  return 0.5 * z.squaredNorm() + 0.5 * log_det + 0.5 * n * std::log(2.0 * std::numbers::pi);
}

std::vector<double> LogAxis::values() const {
  if (!positive_finite(min) || !positive_finite(max) || max < min || count < 1) {
    throw Error(ErrorKind::invalid_argument, "search axis needs 0 < min <= max and count >= 1");
  }
  if (count == 1 || min == max) return {min};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double lo = std::log(min);
  const double step = (std::log(max) - lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(lo + step * i);
  out.back() = max;
  return out;
}

SearchGrid SearchGrid::defaults_for(std::span<const Observation> data) {
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  double mean = 0.0;
  for (const auto& o : data) {
    min_x = std::min(min_x, o.location.x);
    max_x = std::max(max_x, o.location.x);
    min_y = std::min(min_y, o.location.y);
    max_y = std::max(max_y, o.location.y);
    mean += o.value;
  }
  const double n = static_cast<double>(std::max<std::size_t>(data.size(), 1));
  mean /= n;
  double var = 0.0;
  for (const auto& o : data) var += (o.value - mean) * (o.value - mean);
  var /= n;
  if (!(var > 0.0)) var = 1.0;
  double diag = std::hypot(max_x - min_x, max_y - min_y);
  if (!(diag > 0.0)) diag = 1.0;

  SearchGrid g;
  g.length_scale = {0.01 * diag, diag, 25};
  g.signal_variance = {0.1 * var, 10.0 * var, 15};
  g.noise_variance = {1e-4 * var, var, 13};
  return g;
}

FitResult fit_hyperparameters(std::span<const Observation> data, const SearchGrid& grid) {
  if (data.empty()) throw Error(ErrorKind::degenerate_data, "no observations to fit");
  std::vector<Point> locs;
  for (const auto& o : data) locs.push_back(o.location);
  {
    auto sorted = locs;
    std::sort(sorted.begin(), sorted.end());
    if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 2) {
      throw Error(ErrorKind::degenerate_data, "fitting needs at least two distinct locations");
    }
  }
  const auto ls = grid.length_scale.values();
  const auto s2s = grid.signal_variance.values();
  const auto w2s = grid.noise_variance.values();

  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) y(static_cast<Eigen::Index>(i)) = data[i].value;
  const double n = static_cast<double>(data.size());
  const double log_2pi_term = 0.5 * n * std::log(2.0 * std::numbers::pi);

  // For a fixed length scale K = s2*U diag(lambda) U^T + w2*I, so every
  // (s2, w2) pair reuses one eigendecomposition.
  FitResult best;
  best.nlml = std::numeric_limits<double>::infinity();
  bool found = false;
  for (double l : ls) {
    const Hyperparameters unit{l, 1.0, 1.0};
    const Eigen::MatrixXd k = kernel_matrix(locs, locs, unit);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    if (eig.info() != Eigen::Success) {
      throw Error(ErrorKind::numerical_failure, "eigendecomposition failed during fitting");
    }
    const Eigen::ArrayXd lambda = eig.eigenvalues().array().max(0.0);
    const Eigen::ArrayXd proj2 = (eig.eigenvectors().transpose() * y).array().square();
    for (double s2 : s2s) {
      for (double w2 : w2s) {
        const Eigen::ArrayXd d = s2 * lambda + w2;
        const double value = 0.5 * (proj2 / d).sum() + 0.5 * d.log().sum() + log_2pi_term;
        if (std::isfinite(value) && (!found || value < best.nlml)) {
          best = {Hyperparameters{l, s2, w2}, value};
          found = true;
        }
      }
    }
  }
  if (!found) throw Error(ErrorKind::numerical_failure, "no finite nlml on the search grid");
  return best;
}

Posterior::Posterior(const MeasurementMultiset& m, const Hyperparameters& h) : h_(h) {
  h_.validate();
  validate(m);
  std::vector<std::pair<Point, long long>> merged;
  merged.reserve(m.size());
  for (const auto& e : m) merged.emplace_back(e.location, e.count);
  std::sort(merged.begin(), merged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [p, c] : merged) {
    if (!sites_.empty() && sites_.back() == p) {
      counts_.back() += c;
    } else {
      sites_.push_back(p);
      counts_.push_back(c);
    }
  }
  if (sites_.empty()) return;
  Eigen::MatrixXd k = kernel_matrix(sites_, sites_, h_);
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    k(ii, ii) += h_.noise_variance / static_cast<double>(counts_[i]);
  }
  llt_.compute(k);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical_failure,
                "Cholesky factorization of the noise-regularized Gram matrix failed");
  }
}

double Posterior::variance(const Point& x) const {
  const Point xs[1] = {x};
  return variances(xs).front();
}

std::vector<double> Posterior::variances(std::span<const Point> xs) const {
  std::vector<double> out(xs.size(), h_.signal_variance);
  if (sites_.empty()) return out;
  constexpr std::size_t kBlock = 512;
  for (std::size_t start = 0; start < xs.size(); start += kBlock) {
    const auto block = xs.subspan(start, std::min(kBlock, xs.size() - start));
    Eigen::MatrixXd v = kernel_matrix(sites_, block, h_);
    llt_.matrixL().solveInPlace(v);
    const Eigen::VectorXd reduction = v.colwise().squaredNorm();
    for (std::size_t j = 0; j < block.size(); ++j) {
      out[start + j] =
          clamp_variance(h_.signal_variance - reduction(static_cast<Eigen::Index>(j)), h_);
    }
  }
  return out;
}

Eigen::MatrixXd Posterior::mean_weights(std::span<const Point> xs) const {
  if (sites_.empty()) return Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xs.size()), 0);
  // W^T = (K + N)^{-1} k(sites, xs)
  const Eigen::MatrixXd wt = llt_.solve(kernel_matrix(sites_, xs, h_));
  return wt.transpose();
}

std::size_t Posterior::site_index(const Point& p) const {
  const auto it = std::lower_bound(sites_.begin(), sites_.end(), p);
  if (it == sites_.end() || *it != p) {
    throw Error(ErrorKind::invalid_argument, "measurement location is not a site of this posterior");
  }
  return static_cast<std::size_t>(it - sites_.begin());
}

Eigen::VectorXd Posterior::site_means(const MeasurementMultiset& m) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sites_.size()));
  Eigen::VectorXd seen = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sites_.size()));
  for (const auto& e : m) {
    if (!e.values) throw Error(ErrorKind::missing_values, "site means need values on every entry");
    const auto idx = static_cast<Eigen::Index>(site_index(e.location));
    for (double v : *e.values) sum(idx) += v;
    seen(idx) += static_cast<double>(e.values->size());
  }
  for (Eigen::Index i = 0; i < sum.size(); ++i) {
    if (seen(i) != static_cast<double>(counts_[static_cast<std::size_t>(i)])) {
      throw Error(ErrorKind::invalid_argument, "site readings do not match the posterior's counts");
    }
    sum(i) /= seen(i);
  }
  return sum;
}

}  // namespace gpcover
