#include "gpcover/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "gpcover/error.hpp"

namespace gpcover {

void AccuracySpec::validate(const Hyperparameters& h) const {
  h.validate();
  if (!(delta > 0.0) || !(delta < h.signal_variance)) {
    throw Error(ErrorKind::delta_out_of_range, "delta must satisfy 0 < delta < signal variance");
  }
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::invalid_argument, "alpha must be > 1");
  }
}

long long MeasurementPlan::measurement_count() const {
  long long n = 0;
  for (const auto& e : entries) n += e.count;
  return n;
}

MeasurementMultiset MeasurementPlan::multiset() const {
  MeasurementMultiset m;
  m.reserve(entries.size());
  for (const auto& e : entries) m.push_back({e.location, e.count, std::nullopt});
  return m;
}

std::vector<Disk> MeasurementPlan::big_disks() const {
  std::vector<Disk> out;
  for (const auto& d : mis) out.push_back({d.center, 3.0 * d.radius});
  return out;
}

double compute_r_max(const Hyperparameters& h, double delta) {
  h.validate();
  if (!(delta > 0.0) || !(delta < h.signal_variance)) {
    throw Error(ErrorKind::delta_out_of_range, "delta must satisfy 0 < delta < signal variance");
  }
  return h.length_scale * std::sqrt(-std::log1p(-delta / h.signal_variance));
}

double sufficient_radius(const Hyperparameters& h, double delta, long long n) {
  h.validate();
  if (!(delta > 0.0) || !(delta < h.signal_variance)) {
    throw Error(ErrorKind::delta_out_of_range, "delta must satisfy 0 < delta < signal variance");
  }
  if (n < 1) throw Error(ErrorKind::invalid_argument, "measurement count must be >= 1");
  const double arg = (1.0 + h.noise_variance / (static_cast<double>(n) * h.signal_variance)) *
                     (1.0 - delta / h.signal_variance);
  if (!(arg < 1.0)) {
    throw Error(ErrorKind::insufficient_n,
                std::to_string(n) + " measurements cannot reach the target variance at any distance");
  }
  return h.length_scale * std::sqrt(-std::log(arg));
}

int compute_n_alpha(const Hyperparameters& h, const AccuracySpec& spec) {
  spec.validate(h);
  const double keep = 1.0 - spec.delta / h.signal_variance;
  const double denom = std::pow(keep, 1.0 / (spec.alpha * spec.alpha) - 1.0) - 1.0;
  const double raw = (h.noise_variance / h.signal_variance) / denom;
  long long n = std::max<long long>(1, static_cast<long long>(std::ceil(raw)));
  // Guard the ceiling against round-off in the closed form.
  const double target = compute_r_max(h, spec.delta) / spec.alpha;
  while (true) {
    const double factor = (1.0 + h.noise_variance / (static_cast<double>(n) * h.signal_variance)) * keep;
    if (factor < 1.0 && sufficient_radius(h, spec.delta, n) >= target * (1.0 - 1e-12)) break;
    ++n;
  }
  return static_cast<int>(n);
}

MeasurementPlan disk_cover_placement(const Environment& env, const Hyperparameters& h,
                                     const AccuracySpec& spec, const PlacementOptions& options) {
  spec.validate(h);
  MeasurementPlan plan;
  plan.r_max = compute_r_max(h, spec.delta);
  plan.small_radius = plan.r_max / spec.alpha;
  plan.n_alpha = compute_n_alpha(h, spec);
  plan.mis = greedy_mis(cover_environment(env, plan.r_max));

  for (std::size_t d = 0; d < plan.mis.size(); ++d) {
    const Disk big{plan.mis[d].center, 3.0 * plan.r_max};
    for (Point p : cover_disk_lawnmower(big, plan.small_radius)) {
      if (options.hard_boundary) p = env.nearest_point(p);
      plan.entries.push_back({p, plan.n_alpha, static_cast<int>(d)});
    }
  }
  return plan;
}

double default_grid_spacing(const Hyperparameters& h, double delta) {
  return compute_r_max(h, delta) / 20.0;
}

MeasurementPlan prune_redundant(const MeasurementPlan& plan, const Environment& env,
                                const Hyperparameters& h, const AccuracySpec& spec,
                                double grid_spacing) {
  spec.validate(h);
  if (plan.entries.empty()) return plan;
  if (!(grid_spacing > 0.0)) grid_spacing = default_grid_spacing(h, spec.delta);
  const auto grid = environment_grid(env, grid_spacing);

  std::vector<double> radius(plan.entries.size());
  double bucket = 0.0;
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    radius[i] = sufficient_radius(h, spec.delta, plan.entries[i].count);
    bucket = std::max(bucket, radius[i]);
  }

  // Bucket the grid so each site only scans its neighbourhood.
  const Box b = env.bounds();
  auto key = [&](long long ix, long long iy) { return (ix << 32) ^ (iy & 0xffffffffLL); };
  auto cell_of = [&](const Point& p) {
    return std::pair<long long, long long>{static_cast<long long>(std::floor((p.x - b.min.x) / bucket)),
                                           static_cast<long long>(std::floor((p.y - b.min.y) / bucket))};
  };
  std::unordered_map<long long, std::vector<std::size_t>> buckets;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto [ix, iy] = cell_of(grid[g]);
    buckets[key(ix, iy)].push_back(g);
  }

  std::vector<std::vector<std::size_t>> served(plan.entries.size());
  std::vector<int> cover(grid.size(), 0);
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const Point& c = plan.entries[i].location;
    const double r2 = radius[i] * radius[i];
    const auto [cx, cy] = cell_of(c);
    for (long long ix = cx - 1; ix <= cx + 1; ++ix) {
      for (long long iy = cy - 1; iy <= cy + 1; ++iy) {
        const auto it = buckets.find(key(ix, iy));
        if (it == buckets.end()) continue;
        for (std::size_t g : it->second) {
          if (squared_distance(grid[g], c) <= r2) {
            served[i].push_back(g);
            ++cover[g];
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(plan.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
    return plan.entries[a].location < plan.entries[c].location;
  });
  std::vector<bool> keep(plan.entries.size(), true);
  for (std::size_t i : order) {
    const bool redundant =
        std::all_of(served[i].begin(), served[i].end(), [&](std::size_t g) { return cover[g] >= 2; });
    if (!redundant) continue;
    keep[i] = false;
    for (std::size_t g : served[i]) --cover[g];
  }

  MeasurementPlan out = plan;
  out.entries.clear();
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    if (keep[i]) out.entries.push_back(plan.entries[i]);
  }
  return out;
}

VerificationReport verify_plan(const MeasurementMultiset& plan, const Environment& env,
                               const Hyperparameters& h, double delta, double grid_spacing) {
  h.validate();
  const auto grid = environment_grid(env, grid_spacing);
  const Posterior posterior(plan, h);
  const auto var = posterior.variances(grid);

  VerificationReport report;
  report.grid_points = grid.size();
  if (grid.empty()) {
    report.pass = true;
    return report;
  }
  double sum = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < var.size(); ++i) {
    sum += var[i];
    if (var[i] > var[arg]) arg = i;
  }
  report.max_variance = var[arg];
  report.argmax = grid[arg];
  report.mean_variance = sum / static_cast<double>(var.size());
  report.pass = report.max_variance <= delta + kVerifyTolerance;
  return report;
}

VerificationReport verify_plan(const MeasurementPlan& plan, const Environment& env,
                               const Hyperparameters& h, double delta, double grid_spacing) {
  return verify_plan(plan.multiset(), env, h, delta, grid_spacing);
}

}  // namespace gpcover
