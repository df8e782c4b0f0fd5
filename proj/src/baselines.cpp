#include "gpcover/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "gpcover/error.hpp"
#include "gpcover/random.hpp"

namespace gpcover {
namespace {

int steps_to_cover(double extent, double spacing) {
  return std::max(0, static_cast<int>(std::ceil(extent / spacing - 1e-9)));
}

double percent_difference(double mse, double var) { return 100.0 * std::abs(mse - var) / var; }

std::vector<std::size_t> lexicographic_rank(std::span<const Point> pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  std::vector<std::size_t> rank(pts.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

// Shared state for repeated noisy trials over one plan: the posterior, its
// mean weights at the truth nodes, and the truth at every measurement site.
class TrialEngine {
 public:
  TrialEngine(const FieldGrid& truth, const MeasurementMultiset& plan, const Hyperparameters& h)
      : plan_(plan), posterior_(plan, h), nodes_(truth.nodes()) {
    truth.validate();
    for (const auto& e : plan_) {
      if (!truth.in_extent(e.location)) {
        throw Error(ErrorKind::out_of_extent, "measurement location outside the truth grid");
      }
      site_truth_.push_back(truth.value_at(e.location));
    }
    node_truth_ = Eigen::Map<const Eigen::VectorXd>(truth.values.data(),
                                                    static_cast<Eigen::Index>(truth.values.size()));
    variances_ = posterior_.variances(nodes_);
    weights_ = posterior_.mean_weights(nodes_);
  }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& variances() const { return variances_; }
  const Eigen::VectorXd& node_truth() const { return node_truth_; }

  /// Posterior mean at the nodes after one noisy pass.
  Eigen::VectorXd predict(const SensorModel& sensor, std::uint64_t trial) const {
    if (posterior_.site_count() == 0) return Eigen::VectorXd::Zero(node_truth_.size());
    auto rng = make_rng(sensor.seed, kTrialStreamBase + trial);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double sd = std::sqrt(sensor.noise_variance);
    MeasurementMultiset readings = plan_;
    for (std::size_t i = 0; i < readings.size(); ++i) {
      std::vector<double> v(static_cast<std::size_t>(readings[i].count));
      for (double& x : v) x = site_truth_[i] + sd * noise(rng);
      readings[i].values = std::move(v);
    }
    return weights_ * posterior_.site_means(readings);
  }

 private:
  MeasurementMultiset plan_;
  Posterior posterior_;
  std::vector<Point> nodes_;
  std::vector<double> site_truth_;
  Eigen::VectorXd node_truth_;
  std::vector<double> variances_;
  Eigen::MatrixXd weights_;
};

void check_sensor(const SensorModel& sensor) {
  if (!(sensor.noise_variance >= 0.0) || !std::isfinite(sensor.noise_variance)) {
    throw Error(ErrorKind::invalid_argument, "sensor noise variance must be >= 0");
  }
}

}  // namespace

std::vector<Point> FieldGrid::nodes() const {
  std::vector<Point> out;
  out.reserve(values.size());
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) out.push_back(node(ix, iy));
  }
  return out;
}

void FieldGrid::validate() const {
  if (!(spacing > 0.0) || nx < 1 || ny < 1 ||
      values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw Error(ErrorKind::invalid_argument, "field grid shape is inconsistent");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "field grid has non-finite values");
  }
}

bool FieldGrid::in_extent(const Point& p) const {
  const double tol = 1e-9 * spacing;
  return p.x >= origin.x - tol && p.y >= origin.y - tol &&
         p.x <= origin.x + (nx - 1) * spacing + tol && p.y <= origin.y + (ny - 1) * spacing + tol;
}

double FieldGrid::value_at(const Point& p) const {
  if (!in_extent(p)) throw Error(ErrorKind::out_of_extent, "point outside the field grid");
  auto locate = [&](double coord, double start, int n, int& i0, double& frac) {
    if (n == 1) {
      i0 = 0;
      frac = 0.0;
      return;
    }
    const double u = std::clamp((coord - start) / spacing, 0.0, static_cast<double>(n - 1));
    i0 = std::min(static_cast<int>(std::floor(u)), n - 2);
    frac = u - i0;
  };
  int ix = 0, iy = 0;
  double fx = 0.0, fy = 0.0;
  locate(p.x, origin.x, nx, ix, fx);
  locate(p.y, origin.y, ny, iy, fy);
  const int ix1 = std::min(ix + 1, nx - 1);
  const int iy1 = std::min(iy + 1, ny - 1);
  const double bottom = at(ix, iy) * (1.0 - fx) + at(ix1, iy) * fx;
  const double top = at(ix, iy1) * (1.0 - fx) + at(ix1, iy1) * fx;
  return bottom * (1.0 - fy) + top * fy;
}

FieldGrid sample_gp_field(const Environment& env, const Hyperparameters& h, double spacing,
                          std::uint64_t seed) {
  h.validate();
  if (!(spacing > 0.0)) throw Error(ErrorKind::invalid_argument, "field spacing must be positive");
  const Box b = env.bounds();
  FieldGrid f;
  f.origin = b.min;
  f.spacing = spacing;
  f.nx = steps_to_cover(b.width(), spacing) + 1;
  f.ny = steps_to_cover(b.height(), spacing) + 1;
  const std::size_t n = static_cast<std::size_t>(f.nx) * static_cast<std::size_t>(f.ny);
  if (n > kMaxExactSamplePoints) {
    throw Error(ErrorKind::grid_too_large,
                "exact sampling supports at most " + std::to_string(kMaxExactSamplePoints) +
                    " grid nodes, requested " + std::to_string(n));
  }
  const auto nodes = f.nodes();
  Eigen::MatrixXd k = kernel_matrix(nodes, nodes, h);
  // A dense squared-exponential Gram matrix is numerically rank deficient;
  // the smallest diagonal shift that factors is used for sampling only.
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool ok = false;
  for (double jitter = 1e-10; jitter <= 1e-4; jitter *= 10.0) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter * h.signal_variance;
    llt.compute(kj);
    if (llt.info() == Eigen::Success) {
      ok = true;
      break;
    }
  }
  if (!ok) throw Error(ErrorKind::numerical_failure, "could not factor the field covariance");

  auto rng = make_rng(seed, kFieldStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  const Eigen::VectorXd draw = llt.matrixL() * z;
  f.values.assign(draw.data(), draw.data() + draw.size());
  return f;
}

void summarize(TrialReport& report) {
  double var = 0.0, mse = 0.0, pct = 0.0;
  std::size_t pct_n = 0;
  for (const auto& p : report.points) {
    var += p.variance;
    mse += p.squared_error;
    if (p.variance > 0.0) {
      pct += percent_difference(p.squared_error, p.variance);
      ++pct_n;
    }
  }
  const double n = static_cast<double>(std::max<std::size_t>(report.points.size(), 1));
  report.average_variance = var / n;
  report.average_empirical_mse = mse / n;
  report.mean_percent_difference = pct_n ? pct / static_cast<double>(pct_n) : 0.0;
}

TrialReport simulate_trial(const FieldGrid& truth, const MeasurementMultiset& plan,
                           const SensorModel& sensor, const Hyperparameters& h,
                           std::uint64_t trial) {
  check_sensor(sensor);
  const TrialEngine engine(truth, plan, h);
  const Eigen::VectorXd mean = engine.predict(sensor, trial);
  TrialReport report;
  const auto& nodes = engine.nodes();
  report.points.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double err = mean(ii) - engine.node_truth()(ii);
    report.points.push_back({nodes[i], engine.node_truth()(ii), mean(ii), engine.variances()[i], err * err});
  }
  summarize(report);
  return report;
}

TrialReport run_trials(const FieldGrid& truth, const MeasurementMultiset& plan,
                       const SensorModel& sensor, const Hyperparameters& h, int trials) {
  check_sensor(sensor);
  if (trials < 1) throw Error(ErrorKind::invalid_argument, "need at least one trial");
  const TrialEngine engine(truth, plan, h);
  const auto n = engine.node_truth().size();
  Eigen::VectorXd mean_sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sq_sum = Eigen::VectorXd::Zero(n);
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd mean = engine.predict(sensor, static_cast<std::uint64_t>(t));
    mean_sum += mean;
    sq_sum += (mean - engine.node_truth()).array().square().matrix();
  }
  TrialReport report;
  const auto& nodes = engine.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    report.points.push_back({nodes[i], engine.node_truth()(ii), mean_sum(ii) / trials,
                             engine.variances()[i], sq_sum(ii) / trials});
  }
  summarize(report);
  return report;
}

std::vector<ConvergencePoint> convergence_study(const FieldGrid& truth,
                                                const MeasurementMultiset& plan,
                                                const SensorModel& sensor,
                                                const Hyperparameters& h,
                                                std::span<const int> trial_counts) {
  check_sensor(sensor);
  for (std::size_t i = 0; i < trial_counts.size(); ++i) {
    if (trial_counts[i] < 1 || (i > 0 && trial_counts[i] <= trial_counts[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "trial counts must be positive and increasing");
    }
  }
  const TrialEngine engine(truth, plan, h);
  const auto& var = engine.variances();
  std::vector<ConvergencePoint> out;
  std::uint64_t next_trial = 0;
  for (int count : trial_counts) {
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(engine.node_truth().size());
    for (int t = 0; t < count; ++t) {
      sq += (engine.predict(sensor, next_trial++) - engine.node_truth()).array().square().matrix();
    }
    sq /= static_cast<double>(count);
    TrialReport r;
    for (std::size_t i = 0; i < var.size(); ++i) {
      r.points.push_back({engine.nodes()[i], 0.0, 0.0, var[i], sq(static_cast<Eigen::Index>(i))});
    }
    summarize(r);
    out.push_back({count, r.average_empirical_mse, r.average_variance, r.mean_percent_difference});
  }
  return out;
}

std::vector<Point> candidate_grid(const Environment& env, double spacing) {
  auto pts = environment_grid(env, spacing);
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<Point> entropy_greedy(std::span<const Point> candidates, const Hyperparameters& h,
                                  std::size_t budget) {
  h.validate();
  budget = std::min(budget, candidates.size());
  const auto rank = lexicographic_rank(candidates);
  const auto c = static_cast<Eigen::Index>(candidates.size());
  // Incremental (pivoted) Cholesky: var_i = s2 - sum_t v_t(i)^2.
  Eigen::VectorXd var = Eigen::VectorXd::Constant(c, h.signal_variance);
  Eigen::MatrixXd v(c, static_cast<Eigen::Index>(budget));
  std::vector<bool> picked(candidates.size(), false);
  std::vector<Point> out;
  for (std::size_t step = 0; step < budget; ++step) {
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (picked[i]) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      if (best == candidates.size() || var(ii) > var(static_cast<Eigen::Index>(best)) ||
          (var(ii) == var(static_cast<Eigen::Index>(best)) && rank[i] < rank[best])) {
        best = i;
      }
    }
    picked[best] = true;
    out.push_back(candidates[best]);
    const auto b = static_cast<Eigen::Index>(best);
    const auto s = static_cast<Eigen::Index>(step);
    const Point pb[1] = {candidates[best]};
    Eigen::VectorXd col = kernel_matrix(candidates, pb, h).col(0);
    if (s > 0) col.noalias() -= v.leftCols(s) * v.row(b).head(s).transpose();
    col /= std::sqrt(var(b) + h.noise_variance);
    v.col(s) = col;
    var.array() -= col.array().square();
    var = var.cwiseMax(0.0);
  }
  return out;
}

std::vector<Point> mi_greedy(std::span<const Point> candidates, const Hyperparameters& h,
                             std::size_t budget) {
  h.validate();
  budget = std::min(budget, candidates.size());
  if (budget == 0) return {};
  const auto rank = lexicographic_rank(candidates);
  const auto c = static_cast<Eigen::Index>(candidates.size());

  // Numerator: var(y | picked), tracked as in entropy_greedy.
  Eigen::VectorXd var = Eigen::VectorXd::Constant(c, h.signal_variance);
  Eigen::MatrixXd v(c, static_cast<Eigen::Index>(budget));
  // Denominator: precision of the noisy unpicked set; var(f_y | rest) =
  // 1 / P_yy - noise.
  Eigen::MatrixXd gram = kernel_matrix(candidates, candidates, h);
  gram.diagonal().array() += h.noise_variance;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical_failure, "candidate Gram matrix factorization failed");
  }
  Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(c, c));
  const double floor = 1e-12 * h.signal_variance;

  std::vector<bool> picked(candidates.size(), false);
  std::vector<Point> out;
  for (std::size_t step = 0; step < budget; ++step) {
    std::size_t best = candidates.size();
    double best_score = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (picked[i]) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      const double denom = std::max(1.0 / precision(ii, ii) - h.noise_variance, floor);
      const double score = var(ii) / denom;
      if (best == candidates.size() || score > best_score ||
          (score == best_score && rank[i] < rank[best])) {
        best = i;
        best_score = score;
      }
    }
    picked[best] = true;
    out.push_back(candidates[best]);
    const auto b = static_cast<Eigen::Index>(best);
    const auto s = static_cast<Eigen::Index>(step);

    const Point pb[1] = {candidates[best]};
    Eigen::VectorXd col = kernel_matrix(candidates, pb, h).col(0);
    if (s > 0) col.noalias() -= v.leftCols(s) * v.row(b).head(s).transpose();
    col /= std::sqrt(var(b) + h.noise_variance);
    v.col(s) = col;
    var.array() -= col.array().square();
    var = var.cwiseMax(0.0);

    // Drop `best` from the unpicked set: inverse of the remaining block.
    const Eigen::VectorXd pcol = precision.col(b);
    const double pbb = precision(b, b);
    precision.noalias() -= (pcol * pcol.transpose()) / pbb;
    precision.row(b).setZero();
    precision.col(b).setZero();
    precision(b, b) = 1.0;
  }
  return out;
}

Tour lawnmower_plan(const Environment& env, double resolution, std::optional<Point> depot) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorKind::invalid_argument, "lawn-mower resolution must be positive");
  }
  const Box b = env.bounds();
  const int nx = static_cast<int>(std::floor(b.width() / resolution + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor(b.height() / resolution + 1e-9)) + 1;
  const double ox = b.min.x + 0.5 * (b.width() - (nx - 1) * resolution);
  const double oy = b.min.y + 0.5 * (b.height() - (ny - 1) * resolution);
  Tour tour;
  int parity = 0;
  for (int iy = 0; iy < ny; ++iy) {
    std::vector<Point> row;
    for (int ix = 0; ix < nx; ++ix) {
      const Point p{ox + ix * resolution, oy + iy * resolution};
      if (env.contains(p)) row.push_back(p);
    }
    if (row.empty()) continue;
    if (parity++ % 2 == 1) std::reverse(row.begin(), row.end());
    for (const auto& p : row) tour.waypoints.push_back({p, 1, -1});
  }
  tour.depot = depot.value_or(tour.waypoints.empty() ? b.min : tour.waypoints.front().location);
  return tour;
}

namespace {

// Measurements finished at each waypoint by time t.
std::vector<int> collected_counts(const Tour& tour, const TimeModel& time, double t) {
  time.validate();
  std::vector<int> counts;
  double clock = 0.0;
  Point prev = tour.depot;
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  for (const auto& w : tour.waypoints) {
    clock += distance(prev, w.location) / time.speed;
    prev = w.location;
    int done = 0;
    if (clock <= t + tol) {
      if (time.eta == 0.0) {
        done = w.dwell;
      } else {
        const double fit = std::floor((t - clock) / time.eta + 1e-9);
        done = static_cast<int>(std::clamp(fit, 0.0, static_cast<double>(w.dwell)));
      }
    }
    counts.push_back(done);
    clock += time.eta * w.dwell;
  }
  return counts;
}

}  // namespace

MeasurementMultiset collected_by(const Tour& tour, const TimeModel& time, double t) {
  const auto counts = collected_counts(tour, time, t);
  MeasurementMultiset m;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) m.push_back({tour.waypoints[i].location, counts[i], std::nullopt});
  }
  return m;
}

std::vector<CurvePoint> variance_over_time(const Tour& tour, const Hyperparameters& h,
                                           std::span<const Point> eval_points,
                                           const TimeModel& time,
                                           std::span<const double> checkpoints) {
  h.validate();
  std::vector<CurvePoint> out;
  for (double t : checkpoints) {
    const Posterior post(collected_by(tour, time, t), h);
    const auto var = post.variances(eval_points);
    const double sum = std::accumulate(var.begin(), var.end(), 0.0);
    out.push_back({t, eval_points.empty() ? 0.0 : sum / static_cast<double>(var.size()), 0.0});
  }
  return out;
}

std::vector<CurvePoint> error_over_time(const Tour& tour, const FieldGrid& truth,
                                        const SensorModel& sensor, const Hyperparameters& h,
                                        const TimeModel& time,
                                        std::span<const double> checkpoints, int trials) {
  check_sensor(sensor);
  truth.validate();
  if (trials < 1) throw Error(ErrorKind::invalid_argument, "need at least one trial");
  const auto nodes = truth.nodes();
  const Eigen::VectorXd node_truth = Eigen::Map<const Eigen::VectorXd>(
      truth.values.data(), static_cast<Eigen::Index>(truth.values.size()));

  // Readings per trial are drawn once for the whole tour so every checkpoint
  // sees a prefix of the same deployment.
  std::vector<std::vector<std::vector<double>>> readings(static_cast<std::size_t>(trials));
  std::vector<double> site_truth;
  for (const auto& w : tour.waypoints) {
    if (w.dwell > 0 && !truth.in_extent(w.location)) {
      throw Error(ErrorKind::out_of_extent, "tour waypoint outside the truth grid");
    }
    site_truth.push_back(w.dwell > 0 ? truth.value_at(w.location) : 0.0);
  }
  const double sd = std::sqrt(sensor.noise_variance);
  for (int t = 0; t < trials; ++t) {
    auto rng = make_rng(sensor.seed, kTrialStreamBase + static_cast<std::uint64_t>(t));
    std::normal_distribution<double> noise(0.0, 1.0);
    auto& r = readings[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < tour.waypoints.size(); ++i) {
      std::vector<double> v(static_cast<std::size_t>(tour.waypoints[i].dwell));
      for (double& x : v) x = site_truth[i] + sd * noise(rng);
      r.push_back(std::move(v));
    }
  }

  std::vector<CurvePoint> out;
  for (double cp : checkpoints) {
    const auto counts = collected_counts(tour, time, cp);
    MeasurementMultiset collected;
    std::vector<std::size_t> source;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] > 0) {
        collected.push_back({tour.waypoints[i].location, counts[i], std::nullopt});
        source.push_back(i);
      }
    }
    const Posterior post(collected, h);
    const auto var = post.variances(nodes);
    const Eigen::MatrixXd w = post.mean_weights(nodes);
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));
    for (int t = 0; t < trials; ++t) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(sq.size());
      if (!collected.empty()) {
        MeasurementMultiset with_values = collected;
        for (std::size_t s = 0; s < collected.size(); ++s) {
          const auto& all = readings[static_cast<std::size_t>(t)][source[s]];
          with_values[s].values = std::vector<double>(all.begin(), all.begin() + collected[s].count);
        }
        mean = w * post.site_means(with_values);
      }
      sq += (mean - node_truth).array().square().matrix();
    }
    sq /= static_cast<double>(trials);
    const double avg_var = std::accumulate(var.begin(), var.end(), 0.0) / static_cast<double>(var.size());
    out.push_back({cp, avg_var, sq.mean()});
  }
  return out;
}

std::vector<double> uniform_checkpoints(const Tour& tour, const TimeModel& time, int count) {
  if (count < 2) throw Error(ErrorKind::invalid_argument, "need at least two checkpoints");
  const double total = tour_time(tour, time);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = total * i / (count - 1);
  out.back() = total;
  return out;
}

}  // namespace gpcover
