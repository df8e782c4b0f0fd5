#include <cmath>
#include <limits>

#include "doctest.h"
#include "gpcover/baselines.hpp"
#include "gpcover/error.hpp"

using namespace gpcover;

namespace {

const Hyperparameters kSmall{2.0, 1.5, 0.05};

bool non_increasing(const std::vector<CurvePoint>& c) {
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].average_variance > c[i - 1].average_variance + 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("field moments") {
  const auto env = Environment::rectangle({0, 0}, {6, 6});
  const Hyperparameters h{2.0, 3.0, 0.1};
  const int draws = 500;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int s = 0; s < draws; ++s) {
    const auto f = sample_gp_field(env, h, 1.0, static_cast<std::uint64_t>(s));
    const double a = f.at(2, 3), b = f.at(4, 3);  // distance 2 = l
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }
  const double n = draws;
  const double va = saa / n - (sa / n) * (sa / n);
  const double vb = sbb / n - (sb / n) * (sb / n);
  const double cov = sab / n - (sa / n) * (sb / n);
  CHECK(std::abs(va - 3.0) < 0.3);
  CHECK(std::abs(cov / std::sqrt(va * vb) - std::exp(-0.5)) < 0.1);
}

TEST_CASE("field sampling contract") {
  const auto env = Environment::rectangle({0, 0}, {10, 10});
  const auto a = sample_gp_field(env, kSmall, 1.0, 9);
  const auto b = sample_gp_field(env, kSmall, 1.0, 9);
  CHECK(a.values == b.values);
  CHECK(a.nx == 11);
  CHECK(a.value_at({3, 4}) == a.at(3, 4));
  CHECK(a.value_at({3.5, 4}) == doctest::Approx(0.5 * (a.at(3, 4) + a.at(4, 4))));
  CHECK_THROWS_AS(a.value_at({10.5, 1}), Error);
  const auto tiny = sample_gp_field(env, {1, 1e-12, 0.1}, 1.0, 1);
  for (double v : tiny.values) CHECK(std::abs(v) < 1e-4);
  try {
    sample_gp_field(Environment::rectangle({0, 0}, {200, 200}), kSmall, 1.0, 1);
    FAIL("expected grid_too_large");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::grid_too_large);
  }
}

TEST_CASE("trials") {
  const auto env = Environment::rectangle({0, 0}, {10, 10});
  const auto truth = sample_gp_field(env, kSmall, 1.0, 4);

  const auto empty = simulate_trial(truth, {}, {0.05, 1}, kSmall);
  for (const auto& p : empty.points) {
    CHECK(p.mean == 0.0);
    CHECK(p.variance == doctest::Approx(1.5));
  }

  MeasurementMultiset dense;
  for (const auto& p : truth.nodes()) dense.push_back({p, 1, {}});
  const auto exact = simulate_trial(truth, dense, {0.0, 1}, {2.0, 1.5, 1e-8});
  CHECK(exact.average_empirical_mse < 1e-6);

  const auto plan = disk_cover_placement(env, kSmall, {0.5, 2.0}, PlacementOptions{true}).multiset();
  const auto r1 = run_trials(truth, plan, {0.05, 3}, kSmall, 5);
  const auto r2 = run_trials(truth, plan, {0.05, 3}, kSmall, 5);
  CHECK(r1.average_empirical_mse == r2.average_empirical_mse);
  for (std::size_t i = 0; i < r1.points.size(); ++i) CHECK(r1.points[i].mean == r2.points[i].mean);
  const auto single = run_trials(truth, plan, {0.05, 3}, kSmall, 1);
  CHECK(single.mean_percent_difference > 30.0);

  const std::vector<int> counts{10, 100};
  const auto curve = convergence_study(truth, plan, {0.05, 3}, kSmall, counts);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].trials == 10);
  CHECK(curve[1].average_variance == doctest::Approx(r1.average_variance));
  const std::vector<int> bad{10, 5};
  CHECK_THROWS_AS(convergence_study(truth, plan, {0.05, 3}, kSmall, bad), Error);
}

TEST_CASE("entropy greedy picks the highest variance") {
  const auto cand = candidate_grid(Environment::rectangle({0, 0}, {10, 10}), 1.0);
  const auto picks = entropy_greedy(cand, kSmall, 12);
  REQUIRE(picks.size() == 12);
  CHECK(picks[0] == Point{0, 0});
  MeasurementMultiset m;
  for (const auto& p : picks) {
    double best = -1;
    for (const auto& c : cand) {
      bool taken = false;
      for (const auto& e : m) taken = taken || e.location == c;
      if (!taken) best = std::max(best, posterior_variance(c, m, kSmall));
    }
    CHECK(posterior_variance(p, m, kSmall) == doctest::Approx(best).epsilon(1e-9));
    m.push_back({p, 1, {}});
  }
  CHECK(entropy_greedy(cand, kSmall, 1000).size() == cand.size());
}

TEST_CASE("mutual information greedy") {
  const auto cand = candidate_grid(Environment::rectangle({0, 0}, {8, 8}), 1.0);
  const auto picks = mi_greedy(cand, kSmall, 10);
  REQUIRE(picks.size() == 10);
  for (std::size_t i = 0; i < picks.size(); ++i)
    for (std::size_t j = i + 1; j < picks.size(); ++j) CHECK_FALSE(picks[i] == picks[j]);

  // Brute-force first pick: var(y) / var(y | all others).
  double best = -1;
  Point arg;
  for (const auto& c : cand) {
    MeasurementMultiset rest;
    for (const auto& o : cand)
      if (!(o == c)) rest.push_back({o, 1, {}});
    const double score = kSmall.signal_variance / posterior_variance(c, rest, kSmall);
    if (score > best * (1 + 1e-9)) {
      best = score;
      arg = c;
    }
  }
  CHECK(picks[0] == arg);
  // Interior points are picked before corners.
  CHECK(picks[0].x > 0);
  CHECK(picks[0].x < 8);
}

TEST_CASE("lawn-mower baseline") {
  const auto env = Environment::rectangle({0, 0}, {10, 10});
  const auto tour = lawnmower_plan(env, 2.5);
  CHECK(tour.waypoints.size() == 25);
  CHECK(tour.depot == tour.waypoints.front().location);
  for (const auto& w : tour.waypoints) CHECK(w.dwell == 1);
  CHECK(tour.waypoints[0].location == Point{0, 0});
  CHECK(tour.waypoints[5].location == Point{10, 2.5});
  const auto poly = Environment::polygon({{0, 0}, {10, 0}, {0, 10}});
  for (const auto& w : lawnmower_plan(poly, 1.0).waypoints) CHECK(poly.contains(w.location));
}

TEST_CASE("variance curves are non-increasing") {
  const auto env = Environment::rectangle({0, 0}, {12, 12});
  const auto eval = environment_grid(env, 1.0);
  const TimeModel time{1, 1.0};
  const auto dct = disk_cover_tour(env, kSmall, {0.5, 2.0}, time);
  const auto cand = candidate_grid(env, 1.0);
  const std::vector<Tour> tours{dct.tour, tsp_tour(entropy_greedy(cand, kSmall, 30), {0, 0}, 1),
                                tsp_tour(mi_greedy(cand, kSmall, 30), {0, 0}, 1), lawnmower_plan(env, 2.0)};
  for (const auto& t : tours) {
    const auto cps = uniform_checkpoints(t, time, 15);
    const auto curve = variance_over_time(t, kSmall, eval, time, cps);
    CHECK(curve.front().average_variance == doctest::Approx(kSmall.signal_variance));
    CHECK(non_increasing(curve));
  }
  CHECK(collected_by(dct.tour, time, std::numeric_limits<double>::infinity()).size() ==
        dct.plan.location_count());
  CHECK(collected_by(dct.tour, time, 0.0).empty());
}

TEST_CASE("error curves") {
  const auto env = Environment::rectangle({0, 0}, {10, 10});
  const auto truth = sample_gp_field(env, kSmall, 1.0, 2);
  const TimeModel time{1, 1.0};
  const auto tour = lawnmower_plan(env, 2.0);
  const auto cps = uniform_checkpoints(tour, time, 6);
  const auto a = error_over_time(tour, truth, {0.05, 8}, kSmall, time, cps, 20);
  const auto b = error_over_time(tour, truth, {0.05, 8}, kSmall, time, cps, 20);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].average_empirical_mse == b[i].average_empirical_mse);
  CHECK(a.back().average_empirical_mse < a.front().average_empirical_mse);
}
