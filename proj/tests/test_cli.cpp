#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gpcover/io.hpp"
#include "gpcover/random.hpp"

using namespace gpcover;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gpcover_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(GPCOVER_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path write_env(const fs::path& dir, const std::string& json) {
  const fs::path p = dir / "env.json";
  io::write_text_file(p, json);
  return p;
}

std::string synthetic_csv(int rows) {
  auto rng = make_rng(99, 0);
  std::uniform_real_distribution<double> u(0, 40);
  std::normal_distribution<double> z;
  std::ostringstream s;
  s << "x,y,value\n";
  for (int i = 0; i < rows; ++i) {
    const double x = u(rng), y = u(rng);
    s << x << "," << y << "," << 20 + 3 * std::sin(x / 6) * std::cos(y / 7) + 0.2 * z(rng) << "\n";
  }
  return s.str();
}

const std::string kRect = R"({"type":"rectangle","min":[0,0],"max":[30,24]})";
const std::string kPlanArgs = " --hyper 8.33,12.87,0.0361 --delta 4 --alpha 2 --eta 1 --seed 5";

}  // namespace

TEST_CASE("fit") {
  const auto dir = scratch("fit");
  io::write_text_file(dir / "data.csv", synthetic_csv(200));
  REQUIRE(run("fit --data " + (dir / "data.csv").string() + " --out " + (dir / "out").string(), dir / "log") == 0);
  const auto h = io::parse_hyperparameters_json(io::read_text_file(dir / "out" / "hyperparameters.json"));
  CHECK(std::isfinite(h.length_scale));
  CHECK(std::isfinite(h.signal_variance));
  CHECK(std::isfinite(h.noise_variance));

  io::write_text_file(dir / "bad.csv", "0,0,1\n1,1,2\n");
  CHECK(run("fit --data " + (dir / "bad.csv").string() + " --out " + (dir / "out2").string(), dir / "log2") == 2);
  CHECK(io::read_text_file(dir / "log2").find("line 1") != std::string::npos);

  io::write_text_file(dir / "one.csv", "x,y,value\n1,1,2\n");
  CHECK(run("fit --data " + (dir / "one.csv").string() + " --out " + (dir / "out3").string(), dir / "log3") == 3);
}

TEST_CASE("plan and tour") {
  const auto dir = scratch("plan");
  const auto env = write_env(dir, kRect);
  REQUIRE(run("tour --env " + env.string() + kPlanArgs + " --out " + (dir / "out").string(), dir / "log") == 0);
  const auto report = io::read_text_file(dir / "out" / "verification.json");
  CHECK(report.find("\"pass\": true") != std::string::npos);
  for (const char* f : {"locations.csv", "plan.svg", "tour.json", "tour.svg"}) CHECK(fs::exists(dir / "out" / f));
  const auto plan = io::parse_plan_csv(io::read_text_file(dir / "out" / "locations.csv"));
  const auto tour = io::parse_tour_json(io::read_text_file(dir / "out" / "tour.json"));
  long long dwell = 0;
  for (const auto& e : plan) dwell += e.count;
  CHECK(tour.total_dwell() == dwell);
}

TEST_CASE("hyperparameters from a fit file") {
  const auto dir = scratch("hyperfile");
  const auto env = write_env(dir, kRect);
  io::write_text_file(dir / "h.json", io::hyperparameters_to_json({8.33, 12.87, 0.0361}, 0, 0));
  CHECK(run("plan --env " + env.string() + " --hyper " + (dir / "h.json").string() +
                " --delta 4 --out " + (dir / "out").string(),
            dir / "log") == 0);
}

TEST_CASE("split with one robot reproduces the tour") {
  const auto dir = scratch("split1");
  const auto env = write_env(dir, kRect);
  REQUIRE(run("split --k 1 --env " + env.string() + kPlanArgs + " --out " + (dir / "out").string(), dir / "log") == 0);
  CHECK(io::read_text_file(dir / "out" / "subtour_1.json") == io::read_text_file(dir / "out" / "tour.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "subtour_2.json"));
}

TEST_CASE("split with three robots") {
  const auto dir = scratch("split3");
  const auto env = write_env(dir, R"({"type":"polygon","vertices":[[0,0],[50,0],[50,15],[15,15],[15,40],[0,40]]})");
  REQUIRE(run("split --k 3 --env " + env.string() + kPlanArgs + " --out " + (dir / "out").string(), dir / "log") == 0);
  const auto source = io::parse_tour_json(io::read_text_file(dir / "out" / "tour.json"));
  std::size_t total = 0;
  for (int j = 1; j <= 3; ++j) {
    total += io::parse_tour_json(io::read_text_file(dir / "out" / ("subtour_" + std::to_string(j) + ".json")))
                 .waypoints.size();
  }
  CHECK(total == source.waypoints.size());
  CHECK(io::read_text_file(dir / "out" / "makespan.json").find("\"satisfied\": true") != std::string::npos);
}

TEST_CASE("input errors") {
  const auto dir = scratch("errors");
  const auto env = write_env(dir, kRect);
  CHECK(run("plan --env " + env.string() + " --hyper 8.33,12.87,0.0361 --delta 13 --out " + dir.string(),
            dir / "log") == 2);
  CHECK(run("plan --env " + (dir / "missing.json").string() + kPlanArgs, dir / "log") == 2);
  CHECK(run("plan --env " + env.string() + " --hyper 1,2 --delta 1", dir / "log") == 2);
  CHECK(run("plan --env " + env.string() + kPlanArgs + " --alpha 0.5", dir / "log") == 2);
  CHECK(run("bogus", dir / "log") == 2);
  io::write_text_file(dir / "broken.json", "{\"type\":");
  CHECK(run("plan --env " + (dir / "broken.json").string() + kPlanArgs, dir / "log") == 2);
}

TEST_CASE("compare curves") {
  const auto dir = scratch("compare");
  const auto env = write_env(dir, R"({"type":"rectangle","min":[0,0],"max":[20,16]})");
  REQUIRE(run("compare --env " + env.string() + kPlanArgs + " --checkpoints 8 --out " + (dir / "out").string(),
              dir / "log") == 0);
  const auto curves = io::read_text_file(dir / "out" / "curves.csv");
  std::istringstream in(curves);
  std::string line, last_name;
  double last = 1e300;
  int planners = 0;
  std::getline(in, line);
  CHECK(line == "planner,time,average_variance");
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const std::string name = line.substr(0, c1);
    const double v = std::stod(line.substr(c2 + 1));
    if (name != last_name) {
      ++planners;
      last_name = name;
      last = 1e300;
    }
    CHECK(v <= last + 1e-12);
    last = v;
  }
  CHECK(planners == 5);  // disk cover, entropy, MI and two lawn-mower spacings
  CHECK(fs::exists(dir / "out" / "lawnmower_sweep.csv"));
}

TEST_CASE("simulate") {
  const auto dir = scratch("simulate");
  const auto env = write_env(dir, R"({"type":"rectangle","min":[0,0],"max":[20,20]})");
  REQUIRE(run("simulate --trials 20 --env " + env.string() + kPlanArgs + " --out " + (dir / "out").string(),
              dir / "log") == 0);
  for (const char* f : {"field.csv", "trial_report.csv", "convergence.csv", "summary.json"})
    CHECK(fs::exists(dir / "out" / f));
  const auto truth = io::parse_field_csv(io::read_text_file(dir / "out" / "field.csv"));
  CHECK(truth.nx == 21);
  // A supplied truth file gives the same outputs as the sampled one.
  REQUIRE(run("simulate --trials 20 --env " + env.string() + kPlanArgs + " --truth " +
                  (dir / "out" / "field.csv").string() + " --out " + (dir / "out2").string(),
              dir / "log2") == 0);
  CHECK(io::read_text_file(dir / "out" / "trial_report.csv") ==
        io::read_text_file(dir / "out2" / "trial_report.csv"));
}

TEST_CASE("identical runs give identical files") {
  const auto dir = scratch("determinism");
  const auto env = write_env(dir, R"({"type":"rectangle","min":[0,0],"max":[20,16]})");
  for (const std::string sub : {"split --k 2", "simulate --trials 10", "compare --checkpoints 5"}) {
    REQUIRE(run(sub + " --env " + env.string() + kPlanArgs + " --out " + (dir / "a").string(), dir / "log") == 0);
    REQUIRE(run(sub + " --env " + env.string() + kPlanArgs + " --out " + (dir / "b").string(), dir / "log") == 0);
  }
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    CHECK(io::read_text_file(entry.path()) == io::read_text_file(dir / "b" / entry.path().filename()));
  }
}
