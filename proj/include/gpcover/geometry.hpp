#pragma once

#include <variant>
#include <vector>

#include "gpcover/point.hpp"

namespace gpcover {

struct Box {
  Point min;
  Point max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double diagonal() const { return std::hypot(width(), height()); }
};

struct Rectangle {
  Point min;
  Point max;
};

/// Simple polygon, vertices counter-clockwise, no repeated closing vertex.
struct Polygon {
  std::vector<Point> vertices;
};

/// The planning domain: an axis-aligned rectangle or a simple polygon.
/// Membership is closed (boundary points are inside).
class Environment {
 public:
  static Environment rectangle(Point min, Point max);
  /// Accepts either orientation and stores counter-clockwise. Throws on fewer
  /// than three vertices, zero area, or self-intersection.
  static Environment polygon(std::vector<Point> vertices);

  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
  const Rectangle& as_rectangle() const { return std::get<Rectangle>(shape_); }
  const Polygon& as_polygon() const { return std::get<Polygon>(shape_); }

  /// Boundary vertices (four corners for a rectangle), counter-clockwise.
  std::vector<Point> outline() const;
  Box bounds() const;
  double area() const;
  bool contains(const Point& p) const;
  /// Closest point of the (closed) environment to p; p itself if inside.
  Point nearest_point(const Point& p) const;
  /// True if the closed box and the environment share at least one point.
  bool intersects(const Box& box) const;

 private:
  explicit Environment(std::variant<Rectangle, Polygon> shape) : shape_(std::move(shape)) {}

  std::variant<Rectangle, Polygon> shape_;
};

struct Disk {
  Point center;
  double radius = 1.0;

  friend bool operator==(const Disk&, const Disk&) = default;
};

/// Square grid of disk centers with spacing radius*sqrt(2), anchored at the
/// environment's bounding-box minimum; a disk is kept when its inscribed grid
/// square touches the environment. The union of the result covers env.
std::vector<Disk> cover_environment(const Environment& env, double radius);

/// Greedy maximal independent set over equal-radius disks, scanning in
/// lexicographic (x, y) order of centers. Two disks are independent when their
/// centers are more than 2*radius apart. Throws Error(mixed_radii).
std::vector<Disk> greedy_mis(const std::vector<Disk>& disks);

/// Centers of small disks covering `big`: the square circumscribing `big` is
/// tiled with squares of side sqrt(2)*small_radius (centered on big.center),
/// tiles missing the big disk are dropped, and survivors are returned row by
/// row in boustrophedon order. If small_radius >= big.radius the center alone
/// is returned.
std::vector<Point> cover_disk_lawnmower(const Disk& big, double small_radius);

/// Tiles per side used by cover_disk_lawnmower; the point count never exceeds
/// its square.
int lawnmower_tiles_per_side(double big_radius, double small_radius);

/// 0.24 * count * radius, the length any closed tour touching every disk of an
/// independent set must exceed. Throws Error(violated_independence) on
/// overlapping disks and Error(mixed_radii) on unequal radii.
double mis_tour_lower_bound(const std::vector<Disk>& mis);

/// Lattice points with the given spacing over the bounding box (the far edges
/// are always included), filtered to the environment.
std::vector<Point> environment_grid(const Environment& env, double spacing);

}  // namespace gpcover
