#include "explore/geometry.hpp"

#include <cmath>

namespace explore {

double normalize_angle(double a) {
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  return r - kPi;
}

double line_angle_distance(double a, double b) {
  double d = std::fmod(std::fabs(a - b), kPi);
  return std::min(d, kPi - d);
}

double polygon_area(const std::vector<Point>& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

double polygon_perimeter(const std::vector<Point>& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) s += distance(poly[i], poly[(i + 1) % n]);
  return s;
}

Point polygon_centroid(const std::vector<Point>& poly) {
  /* Area-weighted centroid; falls back to the vertex mean for degenerate
   * (near-zero-area) input. */
  double a = 0.0, cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    double w = p.x * q.y - q.x * p.y;
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  if (std::fabs(a) < 1e-12) {
    Point m{0, 0};
    for (const Point& p : poly) m = m + p;
    return {m.x / static_cast<double>(n), m.y / static_cast<double>(n)};
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

bool point_in_polygon(const std::vector<Point>& poly, Point p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

ConvexSplit split_convex(const TaggedPolygon& poly, const Line& line,
                         int cut_tag, double eps) {
  ConvexSplit out;
  const std::size_t n = poly.vertices.size();
  if (n < 3) return out;

  std::vector<double> d(n);
  bool any_neg = false, any_pos = false;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = line.signed_distance(poly.vertices[i]);
    if (d[i] < -eps) any_neg = true;
    if (d[i] > eps) any_pos = true;
  }
  if (!any_neg) {
    out.positive = poly;
    return out;
  }
  if (!any_pos) {
    out.negative = poly;
    return out;
  }

  /* Walk the boundary, emitting each vertex to its side and an interpolated
   * crossing point to both sides whenever the edge changes sign.  Vertices
   * within eps of the line are shared by both parts. */
  auto push = [](TaggedPolygon& tp, Point v, int tag) {
    tp.vertices.push_back(v);
    tp.edge_lines.push_back(tag);
  };
  TaggedPolygon neg, pos;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    const Point a = poly.vertices[i];
    const Point b = poly.vertices[j];
    const int tag = poly.edge_lines[i];
    const double da = d[i], db = d[j];
    const bool a_neg = da < -eps, a_pos = da > eps;

    if (!a_neg && !a_pos) {  // on the line: belongs to both chains
      push(neg, a, tag);
      push(pos, a, tag);
    } else if (a_neg) {
      push(neg, a, tag);
    } else {
      push(pos, a, tag);
    }

    const bool crosses = (da < -eps && db > eps) || (da > eps && db < -eps);
    if (crosses) {
      double t = da / (da - db);
      Point c{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      push(neg, c, tag);
      push(pos, c, tag);
    }
  }

  /* Fix up edge tags: in each part, the edge that lies along the cut must be
   * tagged with cut_tag.  Those are exactly the edges whose endpoints are
   * both within eps of the line. */
  auto retag = [&](TaggedPolygon& tp) {
    const std::size_t m = tp.vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = (i + 1) % m;
      if (std::fabs(line.signed_distance(tp.vertices[i])) <= eps &&
          std::fabs(line.signed_distance(tp.vertices[j])) <= eps) {
        tp.edge_lines[i] = cut_tag;
      }
    }
  };
  retag(neg);
  retag(pos);

  if (std::fabs(polygon_area(neg.vertices)) > eps * eps) out.negative = neg;
  if (std::fabs(polygon_area(pos.vertices)) > eps * eps) out.positive = pos;
  if (out.negative.vertices.empty() && out.positive.vertices.empty())
    out.positive = poly;  // degenerate: keep the input intact
  return out;
}

}  // namespace explore
