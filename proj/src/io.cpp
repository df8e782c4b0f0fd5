#include "gpcover/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "gpcover/error.hpp"

namespace gpcover::io {
namespace {

using nlohmann::json;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::malformed_input, "line " + std::to_string(line) + ": " + why);
}

// Rows of a CSV with a fixed header. Comment and blank lines are skipped.
std::vector<std::pair<std::size_t, std::vector<double>>> parse_numeric_csv(
    std::string_view text, std::string_view header) {
  const auto lines = split(text, '\n');
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  bool seen_header = false;
  const std::size_t columns = split(header, ',').size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != header) bad_line(line_no, "expected header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != columns) {
      bad_line(line_no, "expected " + std::to_string(columns) + " columns, got " +
                            std::to_string(cells.size()));
    }
    std::vector<double> values(columns);
    for (std::size_t c = 0; c < columns; ++c) {
      if (!parse_number(cells[c], values[c])) {
        bad_line(line_no, "cannot parse '" + std::string(trim(cells[c])) + "' as a number");
      }
    }
    rows.emplace_back(line_no, std::move(values));
  }
  if (!seen_header) bad_line(1, "expected header '" + std::string(header) + "'");
  return rows;
}

json point_json(const Point& p) { return json::array({p.x, p.y}); }

Point json_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::malformed_input, std::string(what) + " must be a [x, y] array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::malformed_input, std::string(what) + ": " + e.what());
  }
}

template <typename T>
T require(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) {
    throw Error(ErrorKind::malformed_input, std::string(what) + " is missing '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::malformed_input, std::string(what) + " has a malformed '" + key + "'");
  }
}

// SVG coordinates flip y so north is up.
struct SvgFrame {
  Box box;
  double pad = 0.0;

  std::string x(double v) const { return format_double(v - box.min.x + pad); }
  std::string y(double v) const { return format_double(box.max.y - v + pad); }
  std::string header() const {
    const double w = box.width() + 2 * pad;
    const double h = box.height() + 2 * pad;
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + format_double(w) + " " +
           format_double(h) + "\" width=\"" + format_double(std::ceil(w * 8)) + "\" height=\"" +
           format_double(std::ceil(h * 8)) + "\">\n";
  }
};

std::string outline_svg(const SvgFrame& f, const Environment& env) {
  std::string s = "  <polygon class=\"environment\" fill=\"#eef5e9\" stroke=\"#333\" "
                  "stroke-width=\"0.3\" points=\"";
  bool first = true;
  for (const auto& v : env.outline()) {
    if (!first) s += ' ';
    first = false;
    s += f.x(v.x) + "," + f.y(v.y);
  }
  return s + "\"/>\n";
}

void expand(Box& b, const Point& p, double r) {
  b.min.x = std::min(b.min.x, p.x - r);
  b.min.y = std::min(b.min.y, p.y - r);
  b.max.x = std::max(b.max.x, p.x + r);
  b.max.y = std::max(b.max.y, p.y + r);
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorKind::invalid_argument, "cannot format number");
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::malformed_input, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Environment parse_environment(std::string_view json_text) {
  const json j = parse_json(json_text, "environment");
  const auto type = require<std::string>(j, "type", "environment");
  if (type == "rectangle") {
    return Environment::rectangle(json_point(require<json>(j, "min", "environment"), "min"),
                                  json_point(require<json>(j, "max", "environment"), "max"));
  }
  if (type == "polygon") {
    const auto verts = require<json>(j, "vertices", "environment");
    if (!verts.is_array()) throw Error(ErrorKind::malformed_input, "vertices must be an array");
    std::vector<Point> pts;
    for (const auto& v : verts) pts.push_back(json_point(v, "vertex"));
    return Environment::polygon(std::move(pts));
  }
  throw Error(ErrorKind::malformed_input, "environment type must be 'rectangle' or 'polygon'");
}

std::string environment_to_json(const Environment& env) {
  json j;
  if (env.is_rectangle()) {
    j["type"] = "rectangle";
    j["min"] = point_json(env.as_rectangle().min);
    j["max"] = point_json(env.as_rectangle().max);
  } else {
    j["type"] = "polygon";
    j["vertices"] = json::array();
    for (const auto& v : env.as_polygon().vertices) j["vertices"].push_back(point_json(v));
  }
  return j.dump(2) + "\n";
}

Environment read_environment(const std::filesystem::path& path) {
  return parse_environment(read_text_file(path));
}

Dataset parse_dataset_csv(std::string_view text) {
  const auto rows = parse_numeric_csv(text, "x,y,value");
  Dataset d;
  for (const auto& [line, v] : rows) d.observations.push_back({{v[0], v[1]}, v[2]});
  if (d.observations.empty()) return d;
  double sum = 0.0;
  for (const auto& o : d.observations) sum += o.value;
  d.mean = sum / static_cast<double>(d.observations.size());
  for (auto& o : d.observations) o.value -= d.mean;
  return d;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  return parse_dataset_csv(read_text_file(path));
}

std::string hyperparameters_to_json(const Hyperparameters& h, double nlml_value, double data_mean) {
  json j;
  j["length_scale"] = h.length_scale;
  j["signal_variance"] = h.signal_variance;
  j["noise_variance"] = h.noise_variance;
  j["nlml"] = nlml_value;
  j["data_mean"] = data_mean;
  return j.dump(2) + "\n";
}

Hyperparameters parse_hyperparameters_json(std::string_view json_text) {
  const json j = parse_json(json_text, "hyperparameters");
  Hyperparameters h{require<double>(j, "length_scale", "hyperparameters"),
                    require<double>(j, "signal_variance", "hyperparameters"),
                    require<double>(j, "noise_variance", "hyperparameters")};
  h.validate();
  return h;
}

std::string plan_to_csv(const MeasurementPlan& plan) {
  std::string s = "x,y,n_measurements,disk\n";
  for (const auto& e : plan.entries) {
    s += format_double(e.location.x) + "," + format_double(e.location.y) + "," +
         std::to_string(e.count) + "," + std::to_string(e.source_disk) + "\n";
  }
  return s;
}

std::vector<PlanEntry> parse_plan_csv(std::string_view text) {
  std::vector<PlanEntry> out;
  for (const auto& [line, v] : parse_numeric_csv(text, "x,y,n_measurements,disk")) {
    if (v[2] < 1 || v[2] != std::floor(v[2])) bad_line(line, "n_measurements must be a positive integer");
    out.push_back({{v[0], v[1]}, static_cast<int>(v[2]), static_cast<int>(v[3])});
  }
  return out;
}

std::string verification_to_json(const VerificationReport& report, const MeasurementPlan& plan,
                                  double delta, double grid_spacing) {
  json j;
  j["pass"] = report.pass;
  j["delta"] = delta;
  j["max_variance"] = report.max_variance;
  j["argmax"] = point_json(report.argmax);
  j["mean_variance"] = report.mean_variance;
  j["grid_points"] = report.grid_points;
  j["grid_spacing"] = grid_spacing;
  j["r_max"] = plan.r_max;
  j["small_radius"] = plan.small_radius;
  j["n_alpha"] = plan.n_alpha;
  j["mis_size"] = plan.mis.size();
  j["locations"] = plan.location_count();
  j["measurements"] = plan.measurement_count();
  return j.dump(2) + "\n";
}

std::string tour_to_json(const Tour& tour, const TimeModel& time) {
  const auto elapsed = elapsed_times(tour, time);
  json j;
  j["depot"] = point_json(tour.depot);
  j["closed"] = tour.closed;
  j["speed"] = time.speed;
  j["eta"] = time.eta;
  j["total_length"] = tour_length(tour);
  j["total_time"] = tour_time(tour, time);
  j["total_measurements"] = tour.total_dwell();
  j["waypoints"] = json::array();
  for (std::size_t i = 0; i < tour.waypoints.size(); ++i) {
    const auto& w = tour.waypoints[i];
    j["waypoints"].push_back(
        {{"x", w.location.x}, {"y", w.location.y}, {"dwell", w.dwell}, {"group", w.group},
         {"elapsed", elapsed[i]}});
  }
  return j.dump(2) + "\n";
}

Tour parse_tour_json(std::string_view json_text) {
  const json j = parse_json(json_text, "tour");
  Tour t;
  t.depot = json_point(require<json>(j, "depot", "tour"), "depot");
  t.closed = require<bool>(j, "closed", "tour");
  const auto wps = require<json>(j, "waypoints", "tour");
  if (!wps.is_array()) throw Error(ErrorKind::malformed_input, "waypoints must be an array");
  for (const auto& w : wps) {
    t.waypoints.push_back({{require<double>(w, "x", "waypoint"), require<double>(w, "y", "waypoint")},
                           require<int>(w, "dwell", "waypoint"),
                           require<int>(w, "group", "waypoint")});
  }
  return t;
}

std::string certificate_to_json(const MakespanCertificate& cert, const SplitParameters& params,
                                const SubtourSet& set, const TimeModel& time) {
  json j;
  j["k"] = params.k;
  j["l_max"] = farthest_dwell_distance(set.source);
  j["n2"] = params.n2;
  j["eta"] = time.eta;
  j["source_time"] = tour_time(set.source, time);
  j["makespan"] = cert.makespan;
  j["bound"] = cert.bound;
  j["satisfied"] = cert.satisfied;
  j["split_indices"] = set.split_indices;
  j["subtour_times"] = json::array();
  for (const auto& s : set.subtours) j["subtour_times"].push_back(tour_time(s, time));
  return j.dump(2) + "\n";
}

std::string field_to_csv(const FieldGrid& field) {
  std::string s = "x,y,value\n";
  for (int iy = 0; iy < field.ny; ++iy) {
    for (int ix = 0; ix < field.nx; ++ix) {
      const Point p = field.node(ix, iy);
      s += format_double(p.x) + "," + format_double(p.y) + "," + format_double(field.at(ix, iy)) + "\n";
    }
  }
  return s;
}

FieldGrid parse_field_csv(std::string_view text) {
  const auto rows = parse_numeric_csv(text, "x,y,value");
  if (rows.empty()) throw Error(ErrorKind::malformed_input, "field grid has no rows");
  std::vector<double> xs, ys;
  for (const auto& [line, v] : rows) {
    xs.push_back(v[0]);
    ys.push_back(v[1]);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  FieldGrid f;
  f.origin = {xs.front(), ys.front()};
  f.nx = static_cast<int>(xs.size());
  f.ny = static_cast<int>(ys.size());
  if (f.nx > 1) {
    f.spacing = xs[1] - xs[0];
  } else if (f.ny > 1) {
    f.spacing = ys[1] - ys[0];
  }
  if (rows.size() != xs.size() * ys.size()) {
    throw Error(ErrorKind::malformed_input, "field rows do not form a complete grid");
  }
  f.values.assign(rows.size(), 0.0);
  std::vector<bool> filled(rows.size(), false);
  const double tol = 1e-6 * f.spacing;
  for (const auto& [line, v] : rows) {
    const double ux = (v[0] - f.origin.x) / f.spacing;
    const double uy = (v[1] - f.origin.y) / f.spacing;
    const long ix = std::lround(ux);
    const long iy = std::lround(uy);
    if (std::abs(ux - ix) * f.spacing > tol || std::abs(uy - iy) * f.spacing > tol) {
      bad_line(line, "point is not on a regular grid");
    }
    const std::size_t idx = static_cast<std::size_t>(iy) * static_cast<std::size_t>(f.nx) +
                            static_cast<std::size_t>(ix);
    if (idx >= filled.size() || filled[idx]) bad_line(line, "duplicate or off-grid point");
    filled[idx] = true;
    f.values[idx] = v[2];
  }
  f.validate();
  return f;
}

std::string trial_report_to_csv(const TrialReport& report) {
  std::string s = "x,y,truth,mean,variance,empirical_mse\n";
  for (const auto& p : report.points) {
    s += format_double(p.location.x) + "," + format_double(p.location.y) + "," +
         format_double(p.truth) + "," + format_double(p.mean) + "," + format_double(p.variance) +
         "," + format_double(p.squared_error) + "\n";
  }
  return s;
}

std::string convergence_to_csv(const std::vector<ConvergencePoint>& curve) {
  std::string s = "trials,average_empirical_mse,average_variance,mean_percent_difference\n";
  for (const auto& c : curve) {
    s += std::to_string(c.trials) + "," + format_double(c.average_empirical_mse) + "," +
         format_double(c.average_variance) + "," + format_double(c.mean_percent_difference) + "\n";
  }
  return s;
}

std::string plan_to_svg(const Environment& env, const MeasurementPlan& plan) {
  Box box = env.bounds();
  for (const auto& d : plan.big_disks()) expand(box, d.center, d.radius);
  for (const auto& e : plan.entries) expand(box, e.location, plan.small_radius);
  const SvgFrame f{box, 1.0};
  std::string s = f.header();
  s += outline_svg(f, env);
  for (const auto& d : plan.big_disks()) {
    s += "  <circle class=\"big-disk\" cx=\"" + f.x(d.center.x) + "\" cy=\"" + f.y(d.center.y) +
         "\" r=\"" + format_double(d.radius) +
         "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.2\"/>\n";
  }
  for (const auto& d : plan.mis) {
    s += "  <circle class=\"mis-disk\" cx=\"" + f.x(d.center.x) + "\" cy=\"" + f.y(d.center.y) +
         "\" r=\"" + format_double(d.radius) +
         "\" fill=\"#2980b9\" fill-opacity=\"0.15\" stroke=\"#2980b9\" stroke-width=\"0.2\"/>\n";
  }
  for (const auto& e : plan.entries) {
    s += "  <circle class=\"site\" cx=\"" + f.x(e.location.x) + "\" cy=\"" + f.y(e.location.y) +
         "\" r=\"0.3\" fill=\"#111\"/>\n";
  }
  return s + "</svg>\n";
}

std::string tour_to_svg(const Environment& env, const Tour& tour) {
  Box box = env.bounds();
  expand(box, tour.depot, 1.0);
  for (const auto& w : tour.waypoints) expand(box, w.location, 1.0);
  const SvgFrame f{box, 1.0};
  std::string s = f.header();
  s += outline_svg(f, env);
  Point prev = tour.depot;
  auto leg = [&](const Point& a, const Point& b) {
    s += "  <line class=\"leg\" x1=\"" + f.x(a.x) + "\" y1=\"" + f.y(a.y) + "\" x2=\"" + f.x(b.x) +
         "\" y2=\"" + f.y(b.y) + "\" stroke=\"#8e44ad\" stroke-width=\"0.2\"/>\n";
  };
  for (const auto& w : tour.waypoints) {
    leg(prev, w.location);
    prev = w.location;
  }
  if (tour.closed && !tour.waypoints.empty()) leg(prev, tour.depot);
  for (const auto& w : tour.waypoints) {
    s += std::string("  <circle class=\"") + (w.dwell > 0 ? "site" : "transit") + "\" cx=\"" +
         f.x(w.location.x) + "\" cy=\"" + f.y(w.location.y) + "\" r=\"" +
         (w.dwell > 0 ? "0.3" : "0.5") + "\" fill=\"" + (w.dwell > 0 ? "#111" : "#e67e22") + "\"/>\n";
  }
  s += "  <rect class=\"depot\" x=\"" + format_double(std::stod(f.x(tour.depot.x)) - 0.8) + "\" y=\"" +
       format_double(std::stod(f.y(tour.depot.y)) - 0.8) +
       "\" width=\"1.6\" height=\"1.6\" fill=\"#27ae60\"/>\n";
  return s + "</svg>\n";
}

}  // namespace gpcover::io
