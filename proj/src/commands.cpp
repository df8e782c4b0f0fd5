#include "gpcover/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gpcover/baselines.hpp"
#include "gpcover/fleet.hpp"
#include "gpcover/io.hpp"
#include "gpcover/placement.hpp"
#include "gpcover/tour.hpp"

namespace gpcover {
namespace {

using nlohmann::json;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < cell.size() && cell[used] == ' ') ++used;
    if (used == 0 || used != cell.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_argument, std::string(what) + ": cannot parse '" + cell + "'");
    }
    out.push_back(v);
  }
  return out;
}

Hyperparameters parse_hyper_option(const std::string& text) {
  if (text.find(',') == std::string::npos) {
    return io::parse_hyperparameters_json(io::read_text_file(text));
  }
  const auto v = parse_list(text, "--hyper");
  if (v.size() != 3) throw Error(ErrorKind::invalid_argument, "--hyper expects l,s2,w2");
  Hyperparameters h{v[0], v[1], v[2]};
  h.validate();
  return h;
}

Point parse_depot_option(const std::string& text) {
  const auto v = parse_list(text, "--depot");
  if (v.size() != 2) throw Error(ErrorKind::invalid_argument, "--depot expects x,y");
  return {v[0], v[1]};
}

const Hyperparameters& need_hyper(const RunConfig& cfg) {
  if (!cfg.hyper) throw Error(ErrorKind::invalid_argument, "--hyper is required");
  return *cfg.hyper;
}

AccuracySpec need_spec(const RunConfig& cfg) {
  if (!cfg.delta) throw Error(ErrorKind::invalid_argument, "--delta is required");
  AccuracySpec spec{*cfg.delta, cfg.alpha};
  spec.validate(need_hyper(cfg));
  return spec;
}

Environment need_env(const RunConfig& cfg) {
  if (cfg.env_path.empty()) throw Error(ErrorKind::invalid_argument, "--env is required");
  return io::read_environment(cfg.env_path);
}

TimeModel time_model(const RunConfig& cfg) {
  TimeModel t{1.0, cfg.eta};
  t.validate();
  return t;
}

struct Planned {
  Environment env;
  Hyperparameters h;
  AccuracySpec spec;
  MeasurementPlan plan;
  VerificationReport report;
};

// Plans, writes locations.csv / verification.json / plan.svg, and returns the
// plan. A failed verification is reported after the files are written.
Planned plan_step(const RunConfig& cfg) {
  Planned p{need_env(cfg), need_hyper(cfg), need_spec(cfg), {}, {}};
  p.plan = disk_cover_placement(p.env, p.h, p.spec, PlacementOptions{cfg.hard_boundary});
  if (cfg.prune) p.plan = prune_redundant(p.plan, p.env, p.h, p.spec);
  p.report = verify_plan(p.plan, p.env, p.h, p.spec.delta, cfg.grid_res);
  io::write_text_file(cfg.out_dir / "locations.csv", io::plan_to_csv(p.plan));
  io::write_text_file(cfg.out_dir / "verification.json",
                      io::verification_to_json(p.report, p.plan, p.spec.delta, cfg.grid_res));
  if (cfg.svg) io::write_text_file(cfg.out_dir / "plan.svg", io::plan_to_svg(p.env, p.plan));
  return p;
}

void check_verified(const Planned& p) {
  if (!p.report.pass) {
    throw Error(ErrorKind::invariant_breach,
                "plan verification failed: max variance " + io::format_double(p.report.max_variance) +
                    " > delta " + io::format_double(p.spec.delta));
  }
}

DiskCoverTour tour_step(const RunConfig& cfg, const Planned& p) {
  DiskCoverTour dct = disk_cover_tour(p.plan, p.spec, cfg.depot);
  const TimeModel time = time_model(cfg);
  io::write_text_file(cfg.out_dir / "tour.json", io::tour_to_json(dct.tour, time));
  if (cfg.svg) io::write_text_file(cfg.out_dir / "tour.svg", io::tour_to_svg(p.env, dct.tour));
  return dct;
}

std::vector<int> convergence_counts(int trials) {
  std::vector<int> counts;
  for (int c = 10; c < trials; c *= 10) counts.push_back(c);
  counts.push_back(trials);
  return counts;
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 1.0)) throw Error(ErrorKind::invalid_argument, "--alpha must be > 1");
  if (!(eta >= 0.0)) throw Error(ErrorKind::invalid_argument, "--eta must be >= 0");
  if (k < 1) throw Error(ErrorKind::invalid_argument, "--k must be >= 1");
  if (!(grid_res > 0.0)) throw Error(ErrorKind::invalid_argument, "--grid-res must be > 0");
  if (trials < 1) throw Error(ErrorKind::invalid_argument, "--trials must be >= 1");
  if (checkpoints < 2) throw Error(ErrorKind::invalid_argument, "--checkpoints must be >= 2");
  for (double r : resolutions) {
    if (!(r > 0.0)) throw Error(ErrorKind::invalid_argument, "--resolutions must be positive");
  }
  if (hyper) {
    hyper->validate();
    if (delta) AccuracySpec{*delta, alpha}.validate(*hyper);
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_data:
      return 3;
    case ErrorKind::numerical_failure:
    case ErrorKind::violated_independence:
    case ErrorKind::invariant_breach:
      return 4;
    default:
      return 2;
  }
}

void cmd_fit(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw Error(ErrorKind::invalid_argument, "--data is required");
  const io::Dataset d = io::read_dataset_csv(cfg.data_path);
  const FitResult fit = fit_hyperparameters(d.observations, SearchGrid::defaults_for(d.observations));
  io::write_text_file(cfg.out_dir / "hyperparameters.json",
                      io::hyperparameters_to_json(fit.hyperparameters, fit.nlml, d.mean));
}

void cmd_plan(const RunConfig& cfg) {
  check_verified(plan_step(cfg));
}

void cmd_tour(const RunConfig& cfg) {
  const Planned p = plan_step(cfg);
  tour_step(cfg, p);
  check_verified(p);
}

void cmd_split(const RunConfig& cfg) {
  const Planned p = plan_step(cfg);
  const DiskCoverTour dct = tour_step(cfg, p);
  const TimeModel time = time_model(cfg);
  const SplitParameters params = make_split_parameters(dct.tour, cfg.k, p.plan.n_alpha, cfg.eta);
  const SubtourSet set = split_tour(dct.tour, params);
  for (std::size_t j = 0; j < set.subtours.size(); ++j) {
    io::write_text_file(cfg.out_dir / ("subtour_" + std::to_string(j + 1) + ".json"),
                        io::tour_to_json(set.subtours[j], time));
  }
  const MakespanCertificate cert = makespan_certificate(set, params, time);
  io::write_text_file(cfg.out_dir / "makespan.json", io::certificate_to_json(cert, params, set, time));
  check_verified(p);
  if (!cert.satisfied) {
    throw Error(ErrorKind::invariant_breach,
                "makespan " + io::format_double(cert.makespan) + " exceeds bound " +
                    io::format_double(cert.bound));
  }
}

void cmd_simulate(const RunConfig& cfg) {
  // Readings come from the truth grid, so every site must lie inside it.
  RunConfig inside = cfg;
  inside.hard_boundary = true;
  const Planned p = plan_step(inside);
  const FieldGrid truth = cfg.truth_path.empty()
                              ? sample_gp_field(p.env, p.h, cfg.grid_res, cfg.seed)
                              : io::parse_field_csv(io::read_text_file(cfg.truth_path));
  io::write_text_file(cfg.out_dir / "field.csv", io::field_to_csv(truth));

  const SensorModel sensor{p.h.noise_variance, cfg.seed};
  const MeasurementMultiset m = p.plan.multiset();
  const TrialReport report = run_trials(truth, m, sensor, p.h, cfg.trials);
  io::write_text_file(cfg.out_dir / "trial_report.csv", io::trial_report_to_csv(report));

  const auto counts = convergence_counts(cfg.trials);
  const auto curve = convergence_study(truth, m, sensor, p.h, counts);
  io::write_text_file(cfg.out_dir / "convergence.csv", io::convergence_to_csv(curve));

  json j;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["locations"] = p.plan.location_count();
  j["measurements"] = p.plan.measurement_count();
  j["field_points"] = truth.values.size();
  j["average_variance"] = report.average_variance;
  j["average_empirical_mse"] = report.average_empirical_mse;
  j["mean_percent_difference"] = report.mean_percent_difference;
  io::write_text_file(cfg.out_dir / "summary.json", j.dump(2) + "\n");
  check_verified(p);
}

void cmd_compare(const RunConfig& cfg) {
  const Planned p = plan_step(cfg);
  const DiskCoverTour dct = tour_step(cfg, p);
  const TimeModel time = time_model(cfg);
  const auto eval = environment_grid(p.env, cfg.grid_res);
  const Point depot = dct.tour.depot;

  const auto candidates = candidate_grid(p.env, p.plan.r_max / 2.0);
  const std::size_t budget = std::min(p.plan.location_count(), candidates.size());

  std::vector<std::pair<std::string, Tour>> planners;
  planners.emplace_back("disk_cover_tour", dct.tour);
  const auto entropy = entropy_greedy(candidates, p.h, budget);
  planners.emplace_back("entropy", tsp_tour(entropy, depot, 1));
  const auto mi = mi_greedy(candidates, p.h, budget);
  planners.emplace_back("mutual_information", tsp_tour(mi, depot, 1));

  std::vector<double> resolutions = cfg.resolutions;
  if (resolutions.empty()) {
    const double side = std::sqrt(2.0) * p.plan.small_radius;
    resolutions = {side, 4.0 * side};
  }

  std::string sweep = "resolution,locations,total_time,terminal_average_variance,terminal_max_variance\n";
  for (double res : resolutions) {
    const Tour lm = lawnmower_plan(p.env, res, depot);
    const VerificationReport r = verify_plan(
        collected_by(lm, time, std::numeric_limits<double>::infinity()), p.env, p.h, p.spec.delta,
        cfg.grid_res);
    sweep += io::format_double(res) + "," + std::to_string(lm.waypoints.size()) + "," +
             io::format_double(tour_time(lm, time)) + "," + io::format_double(r.mean_variance) +
             "," + io::format_double(r.max_variance) + "\n";
    planners.emplace_back("lawnmower_" + io::format_double(res), lm);
  }
  io::write_text_file(cfg.out_dir / "lawnmower_sweep.csv", sweep);

  std::string curves = "planner,time,average_variance\n";
  for (const auto& [name, tour] : planners) {
    const auto checkpoints = uniform_checkpoints(tour, time, cfg.checkpoints);
    for (const auto& c : variance_over_time(tour, p.h, eval, time, checkpoints)) {
      curves += name + "," + io::format_double(c.time) + "," + io::format_double(c.average_variance) + "\n";
    }
  }
  io::write_text_file(cfg.out_dir / "curves.csv", curves);
  check_verified(p);
}

void run_command(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.subcommand == "fit") return cmd_fit(cfg);
  if (cfg.subcommand == "plan") return cmd_plan(cfg);
  if (cfg.subcommand == "tour") return cmd_tour(cfg);
  if (cfg.subcommand == "split") return cmd_split(cfg);
  if (cfg.subcommand == "simulate") return cmd_simulate(cfg);
  if (cfg.subcommand == "compare") return cmd_compare(cfg);
  throw Error(ErrorKind::invalid_argument, "unknown subcommand '" + cfg.subcommand + "'");
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Variance-guaranteed sampling plans for Gaussian-process fields"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string env, data, truth, hyper, depot, out = ".", resolutions;
  double delta = std::numeric_limits<double>::quiet_NaN();

  auto common = [&](CLI::App* sub, bool planning) {
    sub->add_option("--out", out, "Output directory");
    if (!planning) return;
    sub->add_option("--env", env, "Environment json")->required();
    sub->add_option("--hyper", hyper, "l,s2,w2 or a hyperparameters json")->required();
    sub->add_option("--delta", delta, "Variance target")->required();
    sub->add_option("--alpha", cfg.alpha, "Small disk shrink factor");
    sub->add_option("--eta", cfg.eta, "Seconds per measurement");
    sub->add_option("--depot", depot, "Depot x,y");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--grid-res", cfg.grid_res, "Evaluation grid spacing (m)");
    sub->add_flag("--hard-boundary", cfg.hard_boundary, "Keep every site inside the environment");
    sub->add_flag("--prune", cfg.prune, "Drop redundant sites");
    sub->add_flag("!--no-svg", cfg.svg, "Skip svg output");
  };

  auto* fit = app.add_subcommand("fit", "Fit hyperparameters to x,y,value data");
  common(fit, false);
  fit->add_option("--data", data, "Dataset csv")->required();
  common(app.add_subcommand("plan", "Measurement locations with verification"), true);
  common(app.add_subcommand("tour", "Plan plus a single-robot tour"), true);
  auto* split = app.add_subcommand("split", "Tour split across k robots");
  common(split, true);
  split->add_option("--k", cfg.k, "Number of robots");
  auto* simulate = app.add_subcommand("simulate", "Noisy sensing trials on a field");
  common(simulate, true);
  simulate->add_option("--trials", cfg.trials, "Number of trials");
  simulate->add_option("--truth", truth, "Field csv (sampled from the GP when omitted)");
  auto* compare = app.add_subcommand("compare", "Variance-over-time curves for all planners");
  common(compare, true);
  compare->add_option("--resolutions", resolutions, "Lawn-mower spacings, comma separated");
  compare->add_option("--checkpoints", cfg.checkpoints, "Curve samples per planner");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.env_path = env;
    cfg.data_path = data;
    cfg.truth_path = truth;
    cfg.out_dir = out;
    if (!hyper.empty()) cfg.hyper = parse_hyper_option(hyper);
    if (!std::isnan(delta)) cfg.delta = delta;
    if (!depot.empty()) cfg.depot = parse_depot_option(depot);
    if (!resolutions.empty()) cfg.resolutions = parse_list(resolutions, "--resolutions");
    run_command(cfg);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace gpcover
