#include "gpcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gpcover/error.hpp"

namespace gpcover {
namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double signed_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

Point closest_on_segment(const Point& a, const Point& b, const Point& p) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return a;
  const double t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return a + ab * t;
}

bool box_contains(const Box& b, const Point& p) {
  return b.min.x <= p.x && p.x <= b.max.x && b.min.y <= p.y && p.y <= b.max.y;
}

// Number of lattice steps needed to span `extent`, tolerant to round-off so
// that an exact multiple does not gain a spurious extra step.
int steps_to_cover(double extent, double spacing) {
  return std::max(0, static_cast<int>(std::ceil(extent / spacing - 1e-9)));
}

}  // namespace

Environment Environment::rectangle(Point min, Point max) {
  if (!(max.x > min.x) || !(max.y > min.y) || !std::isfinite(min.x) || !std::isfinite(min.y) ||
      !std::isfinite(max.x) || !std::isfinite(max.y)) {
    throw Error(ErrorKind::invalid_argument, "rectangle needs finite min < max on both axes");
  }
  return Environment(Rectangle{min, max});
}

Environment Environment::polygon(std::vector<Point> vertices) {
  if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
  if (vertices.size() < 3) {
    throw Error(ErrorKind::invalid_argument, "polygon needs at least three vertices");
  }
  for (const auto& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw Error(ErrorKind::invalid_argument, "polygon vertices must be finite");
    }
  }
  const double area = signed_area(vertices);
  if (area == 0.0) throw Error(ErrorKind::invalid_argument, "polygon has zero area");
  if (area < 0.0) std::reverse(vertices.begin(), vertices.end());

  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                             vertices[(j + 1) % n])) {
        throw Error(ErrorKind::invalid_argument, "polygon is not simple (edges intersect)");
      }
    }
  }
  return Environment(Polygon{std::move(vertices)});
}

std::vector<Point> Environment::outline() const {
  if (is_rectangle()) {
    const auto& r = as_rectangle();
    return {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  }
  return as_polygon().vertices;
}

Box Environment::bounds() const {
  if (is_rectangle()) return {as_rectangle().min, as_rectangle().max};
  Box b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
        {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const auto& v : as_polygon().vertices) {
    b.min.x = std::min(b.min.x, v.x);
    b.min.y = std::min(b.min.y, v.y);
    b.max.x = std::max(b.max.x, v.x);
    b.max.y = std::max(b.max.y, v.y);
  }
  return b;
}

double Environment::area() const {
  if (is_rectangle()) {
    const auto& r = as_rectangle();
    return (r.max.x - r.min.x) * (r.max.y - r.min.y);
  }
  return signed_area(as_polygon().vertices);
}

bool Environment::contains(const Point& p) const {
  if (is_rectangle()) return box_contains(bounds(), p);
  const auto& v = as_polygon().vertices;
  const std::size_t n = v.size();
  // Points within a rounding distance of an edge count as boundary points, so
  // projections onto sloped edges stay inside.
  const Box box = bounds();
  const double tol = 1e-9 * (1.0 + std::max({std::abs(box.min.x), std::abs(box.min.y),
                                              std::abs(box.max.x), std::abs(box.max.y)}));
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = v[i];
    const Point& b = v[j];
    if (squared_distance(closest_on_segment(a, b, p), p) <= tol * tol) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

Point Environment::nearest_point(const Point& p) const {
  if (contains(p)) return p;
  if (is_rectangle()) {
    const auto& r = as_rectangle();
    return {std::clamp(p.x, r.min.x, r.max.x), std::clamp(p.y, r.min.y, r.max.y)};
  }
  const auto& v = as_polygon().vertices;
  Point best = v.front();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point c = closest_on_segment(v[i], v[(i + 1) % v.size()], p);
    const double d2 = squared_distance(c, p);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

bool Environment::intersects(const Box& box) const {
  const Box b = bounds();
  if (box.max.x < b.min.x || box.min.x > b.max.x || box.max.y < b.min.y || box.min.y > b.max.y) {
    return false;
  }
  if (is_rectangle()) return true;
  const auto& v = as_polygon().vertices;
  for (const auto& p : v) {
    if (box_contains(box, p)) return true;
  }
  const Point corners[4] = {box.min, {box.max.x, box.min.y}, box.max, {box.min.x, box.max.y}};
  for (const auto& c : corners) {
    if (contains(c)) return true;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (int k = 0; k < 4; ++k) {
      if (segments_intersect(v[i], v[(i + 1) % v.size()], corners[k], corners[(k + 1) % 4])) {
        return true;
      }
    }
  }
  return false;
}

std::vector<Disk> cover_environment(const Environment& env, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::invalid_argument, "cover radius must be positive");
  }
  const double side = radius * std::numbers::sqrt2;
  const Box b = env.bounds();
  const int nx = std::max(1, steps_to_cover(b.width(), side));
  const int ny = std::max(1, steps_to_cover(b.height(), side));
  std::vector<Disk> out;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Box cell{{b.min.x + ix * side, b.min.y + iy * side},
                     {b.min.x + (ix + 1) * side, b.min.y + (iy + 1) * side}};
      if (!env.intersects(cell)) continue;
      out.push_back({{cell.min.x + 0.5 * side, cell.min.y + 0.5 * side}, radius});
    }
  }
  return out;
}

std::vector<Disk> greedy_mis(const std::vector<Disk>& disks) {
  if (disks.empty()) return {};
  const double r = disks.front().radius;
  for (const auto& d : disks) {
    if (d.radius != r) throw Error(ErrorKind::mixed_radii, "greedy_mis needs equal radii");
  }
  std::vector<Disk> order = disks;
  std::stable_sort(order.begin(), order.end(), [](const Disk& a, const Disk& b) {
    if (a.center != b.center) return a.center < b.center;
    return a.radius < b.radius;
  });
  const double min_gap2 = 4.0 * r * r;
  std::vector<Disk> chosen;
  for (const auto& d : order) {
    const bool free = std::none_of(chosen.begin(), chosen.end(), [&](const Disk& c) {
      return squared_distance(c.center, d.center) <= min_gap2;
    });
    if (free) chosen.push_back(d);
  }
  return chosen;
}

int lawnmower_tiles_per_side(double big_radius, double small_radius) {
  if (small_radius >= big_radius) return 1;
  return std::max(1, steps_to_cover(2.0 * big_radius, small_radius * std::numbers::sqrt2));
}

std::vector<Point> cover_disk_lawnmower(const Disk& big, double small_radius) {
  if (!(small_radius > 0.0) || !(big.radius > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "lawn-mower cover needs positive radii");
  }
  if (small_radius >= big.radius) return {big.center};

  const double side = small_radius * std::numbers::sqrt2;
  const int m = lawnmower_tiles_per_side(big.radius, small_radius);
  const double half = 0.5 * side;
  const double reach2 = big.radius * big.radius * (1.0 + 1e-12);

  std::vector<Point> out;
  int row_parity = 0;
  for (int iy = 0; iy < m; ++iy) {
    const double dy = (iy - 0.5 * (m - 1)) * side;
    std::vector<Point> row;
    for (int ix = 0; ix < m; ++ix) {
      const double dx = (ix - 0.5 * (m - 1)) * side;
      // Closest point of the tile to the big disk's center.
      const double cx = std::max(0.0, std::abs(dx) - half);
      const double cy = std::max(0.0, std::abs(dy) - half);
      if (cx * cx + cy * cy > reach2) continue;
      row.push_back({big.center.x + dx, big.center.y + dy});
    }
    if (row.empty()) continue;
    if (row_parity++ % 2 == 1) std::reverse(row.begin(), row.end());
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

double mis_tour_lower_bound(const std::vector<Disk>& mis) {
  if (mis.empty()) return 0.0;
  const double r = mis.front().radius;
  for (const auto& d : mis) {
    if (d.radius != r) throw Error(ErrorKind::mixed_radii, "tour lower bound needs equal radii");
  }
  for (std::size_t i = 0; i < mis.size(); ++i) {
    for (std::size_t j = i + 1; j < mis.size(); ++j) {
      if (squared_distance(mis[i].center, mis[j].center) <= 4.0 * r * r) {
        throw Error(ErrorKind::violated_independence, "tour lower bound needs disjoint disks");
      }
    }
  }
  return 0.24 * static_cast<double>(mis.size()) * r;
}

std::vector<Point> environment_grid(const Environment& env, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorKind::invalid_argument, "grid spacing must be positive");
  }
  const Box b = env.bounds();
  const int nx = steps_to_cover(b.width(), spacing) + 1;
  const int ny = steps_to_cover(b.height(), spacing) + 1;
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int iy = 0; iy < ny; ++iy) {
    const double y = iy == ny - 1 ? b.max.y : b.min.y + iy * spacing;
    for (int ix = 0; ix < nx; ++ix) {
      const double x = ix == nx - 1 ? b.max.x : b.min.x + ix * spacing;
      const Point p{x, y};
      if (env.is_rectangle() || env.contains(p)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace gpcover
