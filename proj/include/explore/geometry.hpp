#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace explore {

constexpr double kPi = std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/* Grid coordinates are x right / y down; poses store heading in radians
 * measured from +x toward +y. */
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  Point position() const { return {x, y}; }
};

/* Maps any angle into [-pi, pi). */
double normalize_angle(double a);

/* Distance between two undirected line angles (mod pi), in [0, pi/2]. */
double line_angle_distance(double a, double b);

/* Infinite line in normal form  n(angle) . p == offset  with
 * n(angle) = (-sin angle, cos angle) and angle kept in [0, pi).
 * direction() = (cos angle, sin angle) spans the line. */
struct Line {
  double angle = 0.0;
  double offset = 0.0;

  Point normal() const { return {-std::sin(angle), std::cos(angle)}; }
  Point direction() const { return {std::cos(angle), std::sin(angle)}; }
  double signed_distance(Point p) const { return dot(normal(), p) - offset; }
  double coordinate_along(Point p) const { return dot(direction(), p); }
  Point point_at(double u) const {
    Point n = normal();
    Point d = direction();
    return {offset * n.x + u * d.x, offset * n.y + u * d.y};
  }
};

/* Vertices in order, implicitly closed.  Area is the shoelace sum; polygons
 * produced by this library are normalized to positive signed area. */
double polygon_area(const std::vector<Point>& poly);
double polygon_perimeter(const std::vector<Point>& poly);
Point polygon_centroid(const std::vector<Point>& poly);

/* Even-odd rule; points very close to the boundary may land on either side. */
bool point_in_polygon(const std::vector<Point>& poly, Point p);

/* Splits a convex polygon with a line.  negative/positive hold the parts on
 * each side of the line (by signed distance); a part is empty when the
 * polygon does not extend to that side.  edge_lines carries one tag per
 * polygon edge (edge i runs from vertex i to i+1) and is split alongside;
 * the chord introduced by the cut is tagged with `cut_tag`. */
struct TaggedPolygon {
  std::vector<Point> vertices;
  std::vector<int> edge_lines;
};
struct ConvexSplit {
  TaggedPolygon negative;
  TaggedPolygon positive;
};
ConvexSplit split_convex(const TaggedPolygon& poly, const Line& line,
                         int cut_tag, double eps);

}  // namespace explore
