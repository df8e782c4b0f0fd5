#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gpcover/baselines.hpp"
#include "gpcover/fleet.hpp"
#include "gpcover/geometry.hpp"
#include "gpcover/gp.hpp"
#include "gpcover/placement.hpp"
#include "gpcover/tour.hpp"

namespace gpcover::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Environment files: {"type":"rectangle","min":[x,y],"max":[x,y]} or
// {"type":"polygon","vertices":[[x,y],...]}.
Environment parse_environment(std::string_view json_text);
std::string environment_to_json(const Environment& env);
Environment read_environment(const std::filesystem::path& path);

/// x,y,value dataset with the value mean removed.
struct Dataset {
  std::vector<Observation> observations;  // centered
  double mean = 0.0;
};

/// Header must be exactly "x,y,value"; lines starting with '#' and blank lines
/// are skipped. Throws Error(malformed_input) naming the first bad line.
Dataset parse_dataset_csv(std::string_view text);
Dataset read_dataset_csv(const std::filesystem::path& path);

std::string hyperparameters_to_json(const Hyperparameters& h, double nlml_value, double data_mean);
Hyperparameters parse_hyperparameters_json(std::string_view json_text);

/// x,y,n_measurements,disk
std::string plan_to_csv(const MeasurementPlan& plan);
std::vector<PlanEntry> parse_plan_csv(std::string_view text);

std::string verification_to_json(const VerificationReport& report, const MeasurementPlan& plan,
                                  double delta, double grid_spacing);

/// Ordered waypoints with dwell counts, group, and cumulative elapsed time,
/// plus total_time.
std::string tour_to_json(const Tour& tour, const TimeModel& time);
Tour parse_tour_json(std::string_view json_text);

std::string certificate_to_json(const MakespanCertificate& cert, const SplitParameters& params,
                                const SubtourSet& set, const TimeModel& time);

/// Field grid as x,y,value rows (x fastest).
std::string field_to_csv(const FieldGrid& field);
/// Inverse of field_to_csv; rows must form a complete regular grid.
FieldGrid parse_field_csv(std::string_view text);

std::string trial_report_to_csv(const TrialReport& report);
std::string convergence_to_csv(const std::vector<ConvergencePoint>& curve);

/// Environment outline, MIS disks, big disks, and measurement sites, one
/// element each.
std::string plan_to_svg(const Environment& env, const MeasurementPlan& plan);
/// Environment outline, one <line> per tour leg, one marker per waypoint.
std::string tour_to_svg(const Environment& env, const Tour& tour);

}  // namespace gpcover::io
