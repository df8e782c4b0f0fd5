// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "gpcover/baselines.hpp"
#include "gpcover/error.hpp"
#include "gpcover/fleet.hpp"
#include "gpcover/io.hpp"
#include "gpcover/random.hpp"

using namespace gpcover;
namespace fs = std::filesystem;

namespace {

const Hyperparameters kField{8.33, 12.87, 0.0361};
constexpr double kDelta = 4.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Random rectangles and star-shaped polygons.
std::vector<Environment> random_environments(int count, std::uint64_t seed) {
  auto rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Environment> out;
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      const Point lo{-50 + 100 * u(rng), -50 + 100 * u(rng)};
      out.push_back(Environment::rectangle(lo, {lo.x + 15 + 60 * u(rng), lo.y + 15 + 60 * u(rng)}));
    } else {
      const int n = 5 + static_cast<int>(8 * u(rng));
      std::vector<double> angles(static_cast<std::size_t>(n));
      for (auto& a : angles) a = 2 * std::numbers::pi * u(rng);
      std::sort(angles.begin(), angles.end());
      std::vector<Point> v;
      for (double a : angles) {
        const double r = 12 + 28 * u(rng);
        v.push_back({r * std::cos(a), r * std::sin(a)});
      }
      try {
        out.push_back(Environment::polygon(v));
      } catch (const Error&) {
        --i;  // coincident angles; draw again
      }
    }
  }
  return out;
}

Outcome sufficiency() {
  const auto env = Environment::rectangle({0, 0}, {100, 100});
  const auto plan = disk_cover_placement(env, kField, {kDelta, 2.0});
  const auto report = verify_plan(plan, env, kField, kDelta, 1.0);
  return {report.max_variance <= 4.000000001,
          fmt("max variance %.9f over %zu grid points, %zu sites, |MIS|=%zu", report.max_variance,
              report.grid_points, plan.location_count(), plan.mis.size())};
}

Outcome necessity() {
  const double r = compute_r_max(kField, kDelta);
  const double v = repeated_measurement_variance(1.05 * r, 1000000, kField);
  return {v > kDelta, fmt("r_max=%.6f, variance at 1.05 r_max with 1e6 readings = %.6f", r, v)};
}

Outcome closed_form() {
  auto rng = make_rng(303, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const Hyperparameters h{0.5 + 20 * u(rng), 0.5 + 20 * u(rng), 0.001 + 5 * u(rng)};
    const double r = 3 * h.length_scale * u(rng);
    for (int n = 1; n <= 50; ++n) {
      const double closed = repeated_measurement_variance(r, n, h);
      const double generic = posterior_variance_expanded({r, 0}, {{{0, 0}, n, {}}}, h);
      worst = std::max(worst, std::abs(closed - generic) / std::abs(generic));
    }
  }
  return {worst <= 1e-9, fmt("worst relative difference %.3g over 5000 cases", worst)};
}

Outcome count_bound() {
  auto envs = random_environments(20, 404);
  const double alphas[] = {1.5, 2.0, 2.5, 3.0};
  bool ok = true;
  double per_disk_max = 0.0, per_disk_sum = 0.0;
  std::size_t disks = 0;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    const double alpha = alphas[i % 4];
    const auto plan = disk_cover_placement(envs[i], kField, {kDelta, alpha});
    const double m = std::ceil(6 * alpha / std::numbers::sqrt2);
    ok = ok && static_cast<double>(plan.location_count()) <= m * m * static_cast<double>(plan.mis.size());
    std::vector<int> per(plan.mis.size(), 0);
    for (const auto& e : plan.entries) ++per[static_cast<std::size_t>(e.source_disk)];
    for (int c : per) {
      per_disk_max = std::max(per_disk_max, c / (alpha * alpha));
      per_disk_sum += c / (alpha * alpha);
      ++disks;
    }
  }
  return {ok, fmt("per-disk sites / alpha^2: mean %.2f, max %.2f (reference 18)",
                  per_disk_sum / static_cast<double>(disks), per_disk_max)};
}

Outcome tour_lower_bound() {
  auto envs = random_environments(20, 505);
  envs.push_back(Environment::rectangle({0, 0}, {100, 100}));
  bool ok = true;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& env : envs) {
    const auto dct = disk_cover_tour(env, kField, {kDelta, 2.0}, {1, 1});
    const double bound = 0.24 * static_cast<double>(dct.plan.mis.size()) * dct.plan.r_max;
    ok = ok && dct.center_route_length >= bound;
    worst_ratio = std::min(worst_ratio, dct.center_route_length / bound);
  }
  return {ok, fmt("%zu planning runs, smallest route / bound = %.2f", envs.size(), worst_ratio)};
}

Outcome tsp_quality() {
  int good = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto rng = make_rng(seed, 606);
    std::uniform_real_distribution<double> u(0, 100);
    const int n = 5 + static_cast<int>(seed % 5);  // 5..9 points plus the depot
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    const Point depot{u(rng), u(rng)};
    const double heuristic = route_length(pts, tsp_heuristic(pts, depot), depot);
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    double best = route_length(pts, order, depot);
    while (std::next_permutation(order.begin(), order.end())) best = std::min(best, route_length(pts, order, depot));
    if (heuristic <= 1.15 * best) ++good;
    worst = std::max(worst, heuristic / best);
  }
  return {good >= 95, fmt("%d/100 within 1.15x of optimum, worst ratio %.4f", good, worst)};
}

Outcome makespan_bound() {
  const auto envs = random_environments(20, 707);
  const TimeModel time{1, 1.0};
  bool ok = true;
  double worst = 0.0;
  for (const auto& env : envs) {
    const auto dct = disk_cover_tour(env, kField, {kDelta, 2.0}, time);
    const auto one = split_tour(dct.tour, make_split_parameters(dct.tour, 1, dct.plan.n_alpha, time.eta));
    ok = ok && one.subtours.size() == 1 && one.subtours[0] == dct.tour;
    for (int k : {2, 3, 5}) {
      const auto params = make_split_parameters(dct.tour, k, dct.plan.n_alpha, time.eta);
      const auto cert = makespan_certificate(split_tour(dct.tour, params), params, time);
      ok = ok && cert.satisfied;
      worst = std::max(worst, cert.makespan / cert.bound);
    }
  }
  return {ok, fmt("20 tours x k in {2,3,5}, largest makespan / bound = %.3f; k=1 identity", worst)};
}

Outcome convergence() {
  const auto env = Environment::rectangle({0, 0}, {40, 40});
  const auto plan = disk_cover_placement(env, kField, {kDelta, 2.0}, PlacementOptions{true}).multiset();
  const std::vector<int> counts{10, 100, 1000};
  int decreasing = 0;
  bool first_seed_ok = false;
  std::string trace;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto truth = sample_gp_field(env, kField, 1.0, seed);
    const auto c = convergence_study(truth, plan, {kField.noise_variance, seed}, kField, counts);
    const bool dec = c[1].mean_percent_difference < c[0].mean_percent_difference &&
                     c[2].mean_percent_difference < c[1].mean_percent_difference;
    if (dec) ++decreasing;
    if (seed == 0) {
      first_seed_ok = c[2].mean_percent_difference < c[0].mean_percent_difference;
      trace = fmt("seed 0: %.1f%% -> %.1f%% -> %.1f%%", c[0].mean_percent_difference,
                  c[1].mean_percent_difference, c[2].mean_percent_difference);
    }
  }
  return {first_seed_ok && decreasing >= 9, fmt("%s; decreasing for %d/10 seeds", trace.c_str(), decreasing)};
}

Outcome monotone_information() {
  const auto env = Environment::rectangle({0, 0}, {100, 100});
  const TimeModel time{1, 1.0};
  const auto dct = disk_cover_tour(env, kField, {kDelta, 2.0}, time);
  const auto eval = environment_grid(env, 1.0);
  const auto candidates = candidate_grid(env, dct.plan.r_max / 2);
  const std::size_t budget = std::min(dct.plan.location_count(), candidates.size());
  const Point depot = dct.tour.depot;
  const double side = std::numbers::sqrt2 * dct.plan.small_radius;

  const std::vector<std::pair<const char*, Tour>> tours{
      {"disk-cover", dct.tour},
      {"entropy", tsp_tour(entropy_greedy(candidates, kField, budget), depot, 1)},
      {"mutual-info", tsp_tour(mi_greedy(candidates, kField, budget), depot, 1)},
      {"lawn-mower", lawnmower_plan(env, side, depot)}};
  bool monotone = true;
  double dct_terminal = 0.0;
  for (const auto& [name, tour] : tours) {
    const auto curve = variance_over_time(tour, kField, eval, time, uniform_checkpoints(tour, time, 12));
    for (std::size_t i = 1; i < curve.size(); ++i)
      monotone = monotone && curve[i].average_variance <= curve[i - 1].average_variance + 1e-12;
    if (std::string(name) == "disk-cover") dct_terminal = curve.back().average_variance;
  }
  const auto coarse = lawnmower_plan(env, 4 * side, depot);
  const auto report = verify_plan(collected_by(coarse, time, std::numeric_limits<double>::infinity()), env,
                                  kField, kDelta, 1.0);
  return {monotone && dct_terminal <= kDelta && report.max_variance > kDelta,
          fmt("curves non-increasing: %s; disk-cover terminal average %.4f; lawn-mower at %.2f m: max %.3f, "
              "average %.3f",
              monotone ? "yes" : "no", dct_terminal, 4 * side, report.max_variance, report.mean_variance)};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "gpcover_acceptance";
  fs::remove_all(dir);
  io::write_text_file(dir / "env.json", R"({"type":"polygon","vertices":[[0,0],[40,0],[40,14],[14,14],[14,30],[0,30]]})");
  std::string csv = "x,y,value\n";
  auto rng = make_rng(1, 0);
  std::uniform_real_distribution<double> u(0, 30);
  for (int i = 0; i < 80; ++i) {
    const double x = u(rng), y = u(rng);
    csv += io::format_double(x) + "," + io::format_double(y) + "," + io::format_double(std::sin(x / 5) + y / 30) + "\n";
  }
  io::write_text_file(dir / "data.csv", csv);
  const std::string common = " --env " + (dir / "env.json").string() + " --hyper 8.33,12.87,0.0361 --delta 4 --seed 11";
  const std::vector<std::string> commands{
      "fit --data " + (dir / "data.csv").string(), "plan" + common, "tour" + common, "split --k 3" + common,
      "simulate --trials 50" + common, "compare --checkpoints 6" + common};
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    for (const char* run : {"a", "b"}) {
      const fs::path out = dir / std::to_string(i) / run;
      const std::string cmd = std::string(GPCOVER_CLI_PATH) + " " + commands[i] + " --out " + out.string() + " > " +
                              (dir / "log").string() + " 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + commands[i]};
    }
    for (const auto& entry : fs::directory_iterator(dir / std::to_string(i) / "a")) {
      const fs::path twin = dir / std::to_string(i) / "b" / entry.path().filename();
      if (!fs::exists(twin) || io::read_text_file(entry.path()) != io::read_text_file(twin)) {
        return {false, "differs: " + entry.path().string()};
      }
      ++files;
    }
  }
  return {true, fmt("%zu files byte-identical across repeated runs of 6 commands", files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 sufficiency on 100x100 m", sufficiency},
      {"2 necessity beyond r_max", necessity},
      {"3 closed form equals generic posterior", closed_form},
      {"4 site count bound", count_bound},
      {"5 tour lower bound", tour_lower_bound},
      {"6 TSP heuristic quality", tsp_quality},
      {"7 makespan certificate", makespan_bound},
      {"8 empirical MSE convergence", convergence},
      {"9 monotone information", monotone_information},
      {"10 determinism", determinism}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-40s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
