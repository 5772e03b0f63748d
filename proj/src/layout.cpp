#include "explore/layout.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace explore {

namespace {

constexpr double kTiny = 1e-9;
constexpr double kMergeTol = 1e-7;  // breakpoint / sliver tolerance, meters
constexpr double kInf = std::numeric_limits<double>::infinity();

std::atomic<std::uint64_t> g_retrievals{0};
std::atomic<bool> g_check_invariants{false};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

/* Endpoint identity for stitching: 1 micrometer quanta absorb the float
 * jitter between coordinates of the same arrangement vertex computed
 * along different lines. */
struct NodeKey {
  long long x = 0, y = 0;
  auto operator<=>(const NodeKey&) const = default;
};
NodeKey node_key(Point p) {
  return {std::llround(p.x * 1e6), std::llround(p.y * 1e6)};
}

Line border_line(int side, Point bounds_max) {
  switch (side) {
    case 0: return {0.0, 0.0};                  // y = 0
    case 1: return {kPi / 2.0, -bounds_max.x};  // x = max
    case 2: return {0.0, bounds_max.y};         // y = max
    default: return {kPi / 2.0, 0.0};           // x = 0
  }
}

/* Fits one run of occupied cell centers; yields a segment when it is
 * long enough.  The angle starts at the bin axis and is refined by the
 * principal direction of the run unless that leaves the bin. */
std::optional<WallSegment> fit_run(const std::vector<Point>& occupied,
                                   const std::vector<int>& cells,
                                   double bin_angle, double res,
                                   const LayoutParams& params) {
  const int support = static_cast<int>(cells.size());
  if (support < params.min_wall_support) return std::nullopt;

  double mx = 0.0, my = 0.0;
  for (int i : cells) {
    mx += occupied[i].x;
    my += occupied[i].y;
  }
  mx /= support;
  my /= support;
  double cxx = 0.0, cxy = 0.0, cyy = 0.0;
  for (int i : cells) {
    const double dx = occupied[i].x - mx;
    const double dy = occupied[i].y - my;
    cxx += dx * dx;
    cxy += dx * dy;
    cyy += dy * dy;
  }

  double angle = bin_angle;
  if (cxx > 0.0 || cyy > 0.0 || cxy != 0.0) {
    double principal = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
    if (principal < 0.0) principal += kPi;
    if (principal >= kPi) principal -= kPi;
    if (line_angle_distance(principal, bin_angle) <=
        kPi / (2.0 * params.angle_bins)) {
      angle = principal;
    }
  }

  Line fitted{angle, 0.0};
  fitted.offset = dot(fitted.normal(), Point{mx, my});
  double umin = kInf, umax = -kInf;
  for (int i : cells) {
    const double u = fitted.coordinate_along(occupied[i]);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  const double length = umax - umin + res;
  if (length + kTiny < params.min_wall_length) return std::nullopt;

  WallSegment seg;
  seg.angle = angle;
  seg.offset = fitted.offset;
  seg.support = support;
  seg.a = fitted.point_at(umin - 0.5 * res);
  seg.b = fitted.point_at(umax + 0.5 * res);
  return seg;
}

/* True when the shortest mod-pi rotation between the two angles passes
 * through the 0 / pi seam, which flips the sign convention of the
 * normal-form offset. */
bool offset_flips(double a, double b) { return std::abs(a - b) > kPi / 2.0; }

double wall_coverage(const Line& line, double u0, double u1,
                     const OccupancyGrid& map, const Grid2<std::uint8_t>& near,
                     Point bounds_max) {
  const double len = u1 - u0;
  const double step = 0.5 * map.resolution;
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  const double clamp_eps = map.resolution * 1e-6;
  int covered = 0;
  for (int i = 0; i < n; ++i) {
    Point q = line.point_at(u0 + (i + 0.5) * len / n);
    q.x = std::min(std::max(q.x, 0.0), bounds_max.x - clamp_eps);
    q.y = std::min(std::max(q.y, 0.0), bounds_max.y - clamp_eps);
    const GridIndex c = map.cell_of(q);
    if (near.in_bounds(c) && near.at(c)) ++covered;
  }
  return static_cast<double>(covered) / n;
}

std::vector<int> boundary_piece_ids(const Arrangement& arr,
                                    const std::vector<int>& members) {
  std::vector<int> out;
  for (int f : members) {
    for (int pi : arr.face_pieces[f]) {
      const ArrangementPiece& p = arr.pieces[pi];
      const int other = p.face_neg == f ? p.face_pos : p.face_neg;
      if (other >= 0 &&
          std::binary_search(members.begin(), members.end(), other)) {
        continue;  // interior edge, seen from both sides
      }
      out.push_back(pi);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/* Walks the boundary pieces into closed loops and returns the loop of
 * largest area as a polygon, dropping vertices where consecutive pieces
 * lie on the same line.  Nodes shared by more than two pieces (pinch
 * points) are resolved toward the smallest unvisited piece, which may
 * split a pinched boundary into several loops; the largest one wins. */
std::vector<Point> stitch_polygon(const Arrangement& arr,
                                  const std::vector<int>& piece_ids) {
  if (piece_ids.empty()) return {};

  std::map<NodeKey, std::vector<std::pair<int, int>>> adj;  // (piece, end)
  for (int pi : piece_ids) {
    adj[node_key(arr.pieces[pi].a)].push_back({pi, 0});
    adj[node_key(arr.pieces[pi].b)].push_back({pi, 1});
  }

  std::set<int> visited;
  std::vector<Point> best;
  double best_area = -1.0;
  for (int start : piece_ids) {
    if (visited.count(start)) continue;
    std::vector<Point> entry_points;
    std::vector<int> loop_lines;
    int cur = start;
    bool forward = true;
    NodeKey begin = node_key(arr.pieces[start].a);
    while (true) {
      visited.insert(cur);
      const ArrangementPiece& p = arr.pieces[cur];
      entry_points.push_back(forward ? p.a : p.b);
      loop_lines.push_back(p.line_id);
      const NodeKey exit = node_key(forward ? p.b : p.a);
      if (exit == begin) break;
      int next = -1, next_end = 0;
      for (auto [pid, end] : adj[exit]) {
        if (pid == cur || visited.count(pid)) continue;
        if (next < 0 || pid < next) {
          next = pid;
          next_end = end;
        }
      }
      if (next < 0) break;  // open chain; emit what we have
      cur = next;
      forward = next_end == 0;
    }

    std::vector<Point> poly;
    const std::size_t n = entry_points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int prev_line = loop_lines[(i + n - 1) % n];
      if (prev_line != loop_lines[i]) poly.push_back(entry_points[i]);
    }
    if (poly.size() < 3) poly = entry_points;
    if (poly.size() < 3) continue;
    const double area = std::abs(polygon_area(poly));
    if (area > best_area) {
      best_area = area;
      if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
      best = std::move(poly);
    }
  }
  return best;
}

/* Core of phi_score over a sorted, connected member set.  Returns
 * -infinity when the union boundary is not a single closed loop. */
double phi_of_set(const std::vector<int>& members, const PhiContext& ctx) {
  const Arrangement& arr = *ctx.arrangement;
  const LayoutParams& params = ctx.params;

  double area = 0.0;
  for (int f : members) area += arr.faces[f].area;

  double perimeter = 0.0, evidence = 0.0;
  struct NodeInfo {
    int idx = -1;
    int degree = 0;
    int lines[2] = {-1, -1};
  };
  std::map<NodeKey, NodeInfo> nodes;
  std::vector<std::pair<int, int>> boundary_edges;
  auto touch = [&](NodeKey key, int line) {
    NodeInfo& ni = nodes[key];
    if (ni.idx < 0) ni.idx = static_cast<int>(nodes.size()) - 1;
    if (ni.degree < 2) ni.lines[ni.degree] = line;
    ++ni.degree;
    return ni.idx;
  };

  for (int f : members) {
    for (int pi : arr.face_pieces[f]) {
      const ArrangementPiece& p = arr.pieces[pi];
      const int other = p.face_neg == f ? p.face_pos : p.face_neg;
      if (other >= 0 &&
          std::binary_search(members.begin(), members.end(), other)) {
        continue;
      }
      perimeter += p.length;
      const bool structural = ctx.line_multiroom[p.line_id] != 0;
      evidence += p.length * (structural ? 1.0 : p.wall_fraction);
      boundary_edges.emplace_back(touch(node_key(p.a), p.line_id),
                                  touch(node_key(p.b), p.line_id));
    }
  }
  if (boundary_edges.empty() || perimeter <= kTiny) return -kInf;

  for (const auto& [key, ni] : nodes) {
    if (ni.degree != 2) return -kInf;
  }
  UnionFind uf(static_cast<int>(nodes.size()));
  for (auto [a, b] : boundary_edges) uf.unite(a, b);
  int loops = 0;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (uf.find(i) == i) ++loops;
  }
  if (loops != 1) return -kInf;

  int vertices = 0;
  for (const auto& [key, ni] : nodes) {
    if (ni.lines[0] != ni.lines[1]) ++vertices;
  }

  const double med = ctx.median_room_area;
  double consistency = 1.0;
  if (med > 0.0) {
    consistency = area <= 0.0 ? 0.0 : std::min(area / med, med / area);
  }
  const double simplicity = vertices <= 4 ? 1.0 : 4.0 / vertices;
  const double wall = evidence / perimeter;
  return params.weight_consistency * consistency +
         params.weight_simplicity * simplicity + params.weight_wall * wall;
}

std::string room_kind_name(RoomKind kind) {
  switch (kind) {
    case RoomKind::FullyObserved: return "fully_observed";
    case RoomKind::Predicted: return "predicted";
    default: return "open_frontier";
  }
}

}  // namespace

Line Arrangement::line_geometry(int line_id) const {
  if (line_id < static_cast<int>(cut_lines.size())) return cut_lines[line_id];
  return border_line(line_id - static_cast<int>(cut_lines.size()), bounds_max);
}

std::vector<WallSegment> extract_wall_segments(const OccupancyGrid& map,
                                               const LayoutParams& params) {
  const double res = map.resolution;
  std::vector<Point> occupied;
  for (int r = 0; r < map.cells.height(); ++r) {
    for (int c = 0; c < map.cells.width(); ++c) {
      if (map.cells.at(c, r) == CellState::Occupied) {
        occupied.push_back(map.cell_center({c, r}));
      }
    }
  }

  /* Candidate runs from every angle bin; a cell can appear in one run
   * per bin.  Corner and jamb cells of axis-aligned walls line up into
   * staircase runs in the diagonal bins, so a claim pass keeps only
   * runs that mostly explain cells no stronger run already explains. */
  struct Candidate {
    int bin = 0;
    long long strip = 0;
    double start = 0.0;
    std::vector<int> cells;
  };
  std::vector<Candidate> candidates;
  const double max_gap = params.wall_gap_cells * res + kTiny;
  for (int b = 0; b < params.angle_bins; ++b) {
    const double bin_angle = b * kPi / params.angle_bins;
    const Line axis{bin_angle, 0.0};
    const Point dir = axis.direction();
    const Point nrm = axis.normal();

    std::map<long long, std::vector<std::pair<double, int>>> strips;
    for (int i = 0; i < static_cast<int>(occupied.size()); ++i) {
      const double offset = dot(nrm, occupied[i]);
      const double along = dot(dir, occupied[i]);
      const long long strip = static_cast<long long>(std::floor(offset / res));
      strips[strip].push_back({along, i});
    }

    for (auto& [strip, pts] : strips) {
      std::sort(pts.begin(), pts.end(),
                [&](const std::pair<double, int>& a,
                    const std::pair<double, int>& b) {
                  if (a.first != b.first) return a.first < b.first;
                  if (occupied[a.second].x != occupied[b.second].x) {
                    return occupied[a.second].x < occupied[b.second].x;
                  }
                  return occupied[a.second].y < occupied[b.second].y;
                });
      std::size_t begin = 0;
      for (std::size_t i = 1; i <= pts.size(); ++i) {
        if (i == pts.size() || pts[i].first - pts[i - 1].first > max_gap) {
          if (i - begin >= static_cast<std::size_t>(params.min_wall_support)) {
            Candidate cand{b, strip, pts[begin].first, {}};
            cand.cells.reserve(i - begin);
            for (std::size_t k = begin; k < i; ++k) {
              cand.cells.push_back(pts[k].second);
            }
            candidates.push_back(std::move(cand));
          }
          begin = i;
        }
      }
    }
  }

  /* Strongest runs first; a run is emitted only when at least half of
   * its cells, and no fewer than the minimum support, are still
   * unclaimed.  Redundant echoes of stronger walls drop out while
   * genuine walls of any direction survive. */
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.cells.size() != b.cells.size()) {
                return a.cells.size() > b.cells.size();
              }
              if (a.bin != b.bin) return a.bin < b.bin;
              if (a.strip != b.strip) return a.strip < b.strip;
              return a.start < b.start;
            });
  std::vector<char> claimed(occupied.size(), 0);
  std::vector<WallSegment> out;
  for (const Candidate& cand : candidates) {
    int fresh = 0;
    for (int i : cand.cells) fresh += claimed[i] ? 0 : 1;
    if (fresh < params.min_wall_support ||
        2 * fresh < static_cast<int>(cand.cells.size())) {
      continue;
    }
    const double bin_angle = cand.bin * kPi / params.angle_bins;
    std::optional<WallSegment> seg =
        fit_run(occupied, cand.cells, bin_angle, res, params);
    if (!seg) continue;
    for (int i : cand.cells) claimed[i] = 1;
    out.push_back(*seg);
  }

  std::sort(out.begin(), out.end(), [](const WallSegment& a,
                                       const WallSegment& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    if (a.offset != b.offset) return a.offset < b.offset;
    if (a.a.x != b.a.x) return a.a.x < b.a.x;
    return a.a.y < b.a.y;
  });
  return out;
}

std::vector<RepresentativeLine> representative_lines(
    const std::vector<WallSegment>& segments, const LayoutParams& params) {
  const int n = static_cast<int>(segments.size());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (line_angle_distance(segments[i].angle, segments[j].angle) >
          params.angle_tol + kTiny) {
        continue;
      }
      const double oj = offset_flips(segments[i].angle, segments[j].angle)
                            ? -segments[j].offset
                            : segments[j].offset;
      if (std::abs(segments[i].offset - oj) <= params.offset_tol + kTiny) {
        uf.unite(i, j);
      }
    }
  }

  std::map<int, std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) clusters[uf.find(i)].push_back(i);

  std::vector<RepresentativeLine> out;
  for (auto& [root, members] : clusters) {
    std::sort(members.begin(), members.end());
    /* Support-weighted circular mean over doubled angles (undirected
     * lines live mod pi), then support-weighted offsets with the sign
     * flipped for members across the 0/pi seam from the mean. */
    double sx = 0.0, sy = 0.0;
    int support = 0;
    for (int m : members) {
      sx += segments[m].support * std::cos(2.0 * segments[m].angle);
      sy += segments[m].support * std::sin(2.0 * segments[m].angle);
      support += segments[m].support;
    }
    double angle = segments[members.front()].angle;
    if (sx != 0.0 || sy != 0.0) {
      angle = 0.5 * std::atan2(sy, sx);
      if (angle < 0.0) angle += kPi;
      if (angle >= kPi) angle -= kPi;
    }
    double offset_sum = 0.0;
    for (int m : members) {
      const double o = offset_flips(segments[m].angle, angle)
                           ? -segments[m].offset
                           : segments[m].offset;
      offset_sum += segments[m].support * o;
    }

    RepresentativeLine line;
    line.angle = angle;
    line.offset = offset_sum / support;
    line.support = support;
    line.members = members;
    out.push_back(std::move(line));
  }

  std::sort(out.begin(), out.end(),
            [](const RepresentativeLine& a, const RepresentativeLine& b) {
              if (a.angle != b.angle) return a.angle < b.angle;
              return a.offset < b.offset;
            });
  return out;
}

Arrangement build_faces(const std::vector<RepresentativeLine>& lines,
                        const OccupancyGrid& map, const LayoutParams& params) {
  Arrangement arr;
  arr.resolution = map.resolution;
  const int width = map.cells.width();
  const int height = map.cells.height();
  const double res = map.resolution;
  arr.bounds_max = {width * res, height * res};

  for (const RepresentativeLine& l : lines) arr.cut_lines.push_back(l.line());
  const int nl = static_cast<int>(arr.cut_lines.size());

  /* Iteratively split the map rectangle by every line; every part stays
   * convex, and edge tags remember which line produced each edge. */
  TaggedPolygon rect;
  rect.vertices = {{0.0, 0.0},
                   {arr.bounds_max.x, 0.0},
                   {arr.bounds_max.x, arr.bounds_max.y},
                   {0.0, arr.bounds_max.y}};
  rect.edge_lines = {nl + 0, nl + 1, nl + 2, nl + 3};
  std::vector<TaggedPolygon> polys{rect};
  for (int k = 0; k < nl; ++k) {
    std::vector<TaggedPolygon> next;
    next.reserve(polys.size() + 8);
    for (TaggedPolygon& poly : polys) {
      ConvexSplit sp = split_convex(poly, arr.cut_lines[k], k, kMergeTol);
      if (!sp.negative.vertices.empty()) next.push_back(std::move(sp.negative));
      if (!sp.positive.vertices.empty()) next.push_back(std::move(sp.positive));
    }
    polys = std::move(next);
  }

  arr.faces.reserve(polys.size());
  for (TaggedPolygon& poly : polys) {
    Face f;
    double area = polygon_area(poly.vertices);
    if (area < 0.0) {
      const std::size_t nv = poly.vertices.size();
      std::reverse(poly.vertices.begin(), poly.vertices.end());
      std::vector<int> tags(nv);
      for (std::size_t j = 0; j < nv; ++j) {
        tags[j] = poly.edge_lines[(2 * nv - 2 - j) % nv];
      }
      poly.edge_lines = std::move(tags);
      area = -area;
    }
    f.polygon = std::move(poly.vertices);
    f.edge_lines = std::move(poly.edge_lines);
    f.area = area;
    for (int t : f.edge_lines) {
      if (t >= nl) f.touches_border = true;
    }
    arr.faces.push_back(std::move(f));
  }
  const int nf = static_cast<int>(arr.faces.size());

  /* Scanline raster of each convex face over cell centers; boundary
   * centers go to the lowest-indexed adjacent face. */
  arr.face_of_cell = Grid2<std::int32_t>(width, height, -1);
  for (int f = 0; f < nf; ++f) {
    const std::vector<Point>& poly = arr.faces[f].polygon;
    double ymin = kInf, ymax = -kInf;
    for (const Point& v : poly) {
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
    int r0 = std::max(0, static_cast<int>(std::ceil(ymin / res - 0.5 - kTiny)));
    int r1 = std::min(height - 1,
                      static_cast<int>(std::floor(ymax / res - 0.5 + kTiny)));
    for (int r = r0; r <= r1; ++r) {
      const double y = (r + 0.5) * res;
      double xlo = kInf, xhi = -kInf;
      const std::size_t nv = poly.size();
      for (std::size_t i = 0; i < nv; ++i) {
        const Point p = poly[i];
        const Point q = poly[(i + 1) % nv];
        if (p.y == q.y) {
          if (p.y == y) {
            xlo = std::min(xlo, std::min(p.x, q.x));
            xhi = std::max(xhi, std::max(p.x, q.x));
          }
          continue;
        }
        const double t = (y - p.y) / (q.y - p.y);
        if (t < -kTiny || t > 1.0 + kTiny) continue;
        const double x = p.x + t * (q.x - p.x);
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
      }
      if (xhi < xlo) continue;
      int c0 = std::max(0, static_cast<int>(std::ceil(xlo / res - 0.5 - kTiny)));
      int c1 = std::min(width - 1,
                        static_cast<int>(std::floor(xhi / res - 0.5 + kTiny)));
      for (int c = c0; c <= c1; ++c) {
        if (arr.face_of_cell.at(c, r) < 0) arr.face_of_cell.at(c, r) = f;
      }
    }
  }
  /* Numeric slivers may leave a center unclaimed; give it the face with
   * the best inside margin. */
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (arr.face_of_cell.at(c, r) >= 0) continue;
      const Point q = map.cell_center({c, r});
      int best = 0;
      double best_margin = -kInf;
      for (int f = 0; f < nf; ++f) {
        const std::vector<Point>& poly = arr.faces[f].polygon;
        const std::size_t nv = poly.size();
        double margin = kInf;
        for (std::size_t i = 0; i < nv; ++i) {
          const Point a = poly[i];
          const Point b = poly[(i + 1) % nv];
          const double len = distance(a, b);
          if (len <= kTiny) continue;
          margin = std::min(margin, cross(b - a, q - a) / len);
        }
        if (margin > best_margin) {
          best_margin = margin;
          best = f;
        }
      }
      arr.face_of_cell.at(c, r) = best;
    }
  }

  /* Observation counts and wall proximity in one pass over the grid. */
  std::vector<std::array<int, 3>> counts(nf, {0, 0, 0});
  Grid2<std::uint8_t> near_wall(width, height, 0);
  const int band = params.wall_band_cells;
  std::vector<std::pair<int, int>> disc;
  for (int dr = -band; dr <= band; ++dr) {
    for (int dc = -band; dc <= band; ++dc) {
      if (dr * dr + dc * dc <= band * band) disc.emplace_back(dc, dr);
    }
  }
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const CellState s = map.cells.at(c, r);
      ++counts[arr.face_of_cell.at(c, r)][static_cast<int>(s)];
      if (s == CellState::Occupied) {
        for (auto [dc, dr] : disc) {
          if (near_wall.in_bounds(c + dc, r + dr)) {
            near_wall.at(c + dc, r + dr) = 1;
          }
        }
      }
    }
  }
  for (int f = 0; f < nf; ++f) {
    Face& face = arr.faces[f];
    face.cells_total = counts[f][0] + counts[f][1] + counts[f][2];
    face.cells_free = counts[f][static_cast<int>(CellState::Free)];
    face.cells_occupied = counts[f][static_cast<int>(CellState::Occupied)];
    const int known = face.cells_free + face.cells_occupied;
    face.known_ratio =
        face.cells_total > 0 ? static_cast<double>(known) / face.cells_total
                             : 0.0;
    if (face.known_ratio >= params.full_face_ratio) {
      face.status = FaceStatus::FullyObserved;
    } else if (face.known_ratio <= params.unknown_face_ratio) {
      face.status = FaceStatus::UnknownFace;
    } else {
      face.status = FaceStatus::PartiallyObserved;
    }
    if (face.status != FaceStatus::UnknownFace && known > 0 &&
        face.cells_free < params.min_room_free_ratio * known) {
      face.solid = true;  // mostly wall mass; cannot be room interior
    }
  }

  /* Atomic boundary pieces: each face edge projects onto its line; the
   * union of breakpoints cuts every line into intervals bordered by at
   * most one face per side. */
  struct EdgeRef {
    double u0 = 0.0, u1 = 0.0;
    int face = -1;
  };
  const int ntags = nl + 4;
  std::vector<std::vector<EdgeRef>> neg(ntags), pos(ntags);
  for (int f = 0; f < nf; ++f) {
    const Face& face = arr.faces[f];
    const Point centroid = polygon_centroid(face.polygon);
    const std::size_t nv = face.polygon.size();
    for (std::size_t i = 0; i < nv; ++i) {
      const int tag = face.edge_lines[i];
      const Line line = arr.line_geometry(tag);
      double ua = line.coordinate_along(face.polygon[i]);
      double ub = line.coordinate_along(face.polygon[(i + 1) % nv]);
      if (ub < ua) std::swap(ua, ub);
      if (ub - ua <= kTiny) continue;
      EdgeRef ref{ua, ub, f};
      if (line.signed_distance(centroid) < 0.0) {
        neg[tag].push_back(ref);
      } else {
        pos[tag].push_back(ref);
      }
    }
  }

  arr.face_pieces.assign(nf, {});
  for (int tag = 0; tag < ntags; ++tag) {
    if (neg[tag].empty() && pos[tag].empty()) continue;
    const Line line = arr.line_geometry(tag);
    std::vector<double> breaks;
    for (const EdgeRef& e : neg[tag]) {
      breaks.push_back(e.u0);
      breaks.push_back(e.u1);
    }
    for (const EdgeRef& e : pos[tag]) {
      breaks.push_back(e.u0);
      breaks.push_back(e.u1);
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> merged;
    for (double u : breaks) {
      if (merged.empty() || u - merged.back() > kMergeTol) merged.push_back(u);
    }
    auto by_u0 = [](const EdgeRef& a, const EdgeRef& b) {
      if (a.u0 != b.u0) return a.u0 < b.u0;
      return a.u1 < b.u1;
    };
    std::sort(neg[tag].begin(), neg[tag].end(), by_u0);
    std::sort(pos[tag].begin(), pos[tag].end(), by_u0);
    std::size_t pn = 0, pp = 0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
      const double lo = merged[i];
      const double hi = merged[i + 1];
      if (hi - lo <= kMergeTol) continue;
      const double mid = 0.5 * (lo + hi);
      while (pn < neg[tag].size() && neg[tag][pn].u1 <= mid) ++pn;
      while (pp < pos[tag].size() && pos[tag][pp].u1 <= mid) ++pp;
      const int fneg =
          pn < neg[tag].size() && neg[tag][pn].u0 <= mid ? neg[tag][pn].face
                                                         : -1;
      const int fpos =
          pp < pos[tag].size() && pos[tag][pp].u0 <= mid ? pos[tag][pp].face
                                                         : -1;
      if (fneg < 0 && fpos < 0) continue;
      ArrangementPiece piece;
      piece.line_id = tag;
      piece.u0 = lo;
      piece.u1 = hi;
      piece.a = line.point_at(lo);
      piece.b = line.point_at(hi);
      piece.face_neg = fneg;
      piece.face_pos = fpos;
      piece.length = hi - lo;
      piece.wall_fraction =
          wall_coverage(line, lo, hi, map, near_wall, arr.bounds_max);
      const int idx = static_cast<int>(arr.pieces.size());
      if (fneg >= 0) arr.face_pieces[fneg].push_back(idx);
      if (fpos >= 0) arr.face_pieces[fpos].push_back(idx);
      arr.pieces.push_back(piece);
    }
  }

  return arr;
}

std::vector<Room> cluster_fully_observed_rooms(Arrangement& arr,
                                               const LayoutParams& params) {
  const int nf = static_cast<int>(arr.faces.size());
  auto eligible = [&](int f) {
    return f >= 0 && arr.faces[f].status == FaceStatus::FullyObserved &&
           !arr.faces[f].solid;
  };

  /* Shared-edge wall coverage aggregated per face pair; two observed
   * faces merge when their common boundary is mostly traversable. */
  std::map<std::pair<int, int>, std::pair<double, double>> shared;
  for (const ArrangementPiece& p : arr.pieces) {
    if (!eligible(p.face_neg) || !eligible(p.face_pos)) continue;
    auto key = std::minmax(p.face_neg, p.face_pos);
    auto& agg = shared[{key.first, key.second}];
    agg.first += p.length;
    agg.second += p.length * p.wall_fraction;
  }

  UnionFind uf(nf);
  for (const auto& [pair, agg] : shared) {
    if (agg.first > kTiny && agg.second / agg.first < params.wall_edge_ratio) {
      uf.unite(pair.first, pair.second);
    }
  }

  std::map<int, std::vector<int>> clusters;
  for (int f = 0; f < nf; ++f) {
    if (eligible(f)) clusters[uf.find(f)].push_back(f);
  }

  std::vector<Room> rooms;
  for (auto& [root, members] : clusters) {
    std::sort(members.begin(), members.end());
    Room room;
    room.kind = RoomKind::FullyObserved;
    room.faces = members;
    room.polygon = stitch_polygon(arr, boundary_piece_ids(arr, members));
    const int id = static_cast<int>(rooms.size());
    for (int f : members) arr.faces[f].room_id = id;
    rooms.push_back(std::move(room));
  }
  return rooms;
}

PhiContext make_phi_context(const Arrangement& arr,
                            const std::vector<Room>& observed_rooms,
                            const LayoutParams& params) {
  PhiContext ctx;
  ctx.arrangement = &arr;
  ctx.params = params;

  std::vector<double> areas;
  for (const Room& room : observed_rooms) {
    if (room.kind != RoomKind::FullyObserved) continue;
    double area = 0.0;
    for (int f : room.faces) area += arr.faces[f].area;
    areas.push_back(area);
  }
  std::sort(areas.begin(), areas.end());
  if (areas.empty()) {
    ctx.median_room_area = 0.0;
  } else if (areas.size() % 2 == 1) {
    ctx.median_room_area = areas[areas.size() / 2];
  } else {
    ctx.median_room_area =
        0.5 * (areas[areas.size() / 2 - 1] + areas[areas.size() / 2]);
  }

  /* A line already separating two observed rooms is structural: its
   * pieces count as full wall evidence even where no cells were hit. */
  const int ntags = static_cast<int>(arr.cut_lines.size()) + 4;
  ctx.line_multiroom.assign(ntags, 0);
  std::vector<std::set<int>> rooms_on_line(ntags);
  for (const ArrangementPiece& p : arr.pieces) {
    for (int f : {p.face_neg, p.face_pos}) {
      if (f < 0) continue;
      const int r = arr.faces[f].room_id;
      if (r >= 0 && r < static_cast<int>(observed_rooms.size()) &&
          observed_rooms[r].kind == RoomKind::FullyObserved) {
        rooms_on_line[p.line_id].insert(r);
      }
    }
  }
  for (int t = 0; t < ntags; ++t) {
    if (rooms_on_line[t].size() >= 2) ctx.line_multiroom[t] = 1;
  }
  return ctx;
}

double phi_score(const std::vector<int>& candidate_faces,
                 const PhiContext& ctx) {
  if (ctx.arrangement == nullptr) {
    throw std::invalid_argument("phi_score: context has no arrangement");
  }
  const Arrangement& arr = *ctx.arrangement;
  const int nf = static_cast<int>(arr.faces.size());
  if (candidate_faces.empty()) {
    throw std::invalid_argument("phi_score: empty candidate set");
  }
  std::vector<int> members = candidate_faces;
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw std::invalid_argument("phi_score: duplicate face id");
  }
  if (members.front() < 0 || members.back() >= nf) {
    throw std::invalid_argument("phi_score: face id out of range");
  }

  /* The score is defined for edge-connected sets only. */
  std::vector<char> seen(members.size(), 0);
  std::vector<int> stack{members.front()};
  seen.front() = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    for (int pi : arr.face_pieces[f]) {
      const ArrangementPiece& p = arr.pieces[pi];
      const int other = p.face_neg == f ? p.face_pos : p.face_neg;
      if (other < 0) continue;
      const auto it = std::lower_bound(members.begin(), members.end(), other);
      if (it == members.end() || *it != other) continue;
      const std::size_t pos = it - members.begin();
      if (!seen[pos]) {
        seen[pos] = 1;
        ++reached;
        stack.push_back(other);
      }
    }
  }
  if (reached != members.size()) {
    throw std::invalid_argument("phi_score: candidate set is disconnected");
  }
  return phi_of_set(members, ctx);
}

std::vector<int> search_room_completion(const Arrangement& arr, int seed_face,
                                        const PhiContext& ctx) {
  const int nf = static_cast<int>(arr.faces.size());
  if (seed_face < 0 || seed_face >= nf) {
    throw std::invalid_argument("search_room_completion: bad seed face");
  }
  const LayoutParams& params = ctx.params;
  auto eligible = [&](int f) {
    return arr.faces[f].room_id < 0 && !arr.faces[f].solid;
  };
  if (!eligible(seed_face)) return {seed_face};

  int eligible_count = 0;
  for (int f = 0; f < nf; ++f) {
    if (eligible(f)) ++eligible_count;
  }
  /* Beam truncation only matters when the state space outgrows the beam;
   * with at most max_room_faces eligible faces the whole space is tiny,
   * so the search runs unpruned (and is then exhaustive). */
  const std::size_t width = eligible_count <= params.max_room_faces
                                ? std::numeric_limits<std::size_t>::max()
                                : static_cast<std::size_t>(params.beam_width);

  std::vector<std::vector<int>> nbr_cache(nf);
  std::vector<char> nbr_built(nf, 0);
  auto neighbors = [&](int f) -> const std::vector<int>& {
    if (!nbr_built[f]) {
      std::vector<int>& list = nbr_cache[f];
      for (int pi : arr.face_pieces[f]) {
        const ArrangementPiece& p = arr.pieces[pi];
        const int other = p.face_neg == f ? p.face_pos : p.face_neg;
        if (other >= 0 && eligible(other)) list.push_back(other);
      }
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      nbr_built[f] = 1;
    }
    return nbr_cache[f];
  };

  struct State {
    std::vector<int> members;
    double phi = 0.0;
  };
  std::set<std::vector<int>> seen;
  State best{{seed_face}, phi_of_set({seed_face}, ctx)};
  std::vector<State> level{best};
  seen.insert(best.members);

  for (int size = 2; size <= params.max_room_faces; ++size) {
    std::vector<State> grown;
    for (const State& s : level) {
      for (int f : s.members) {
        for (int g : neighbors(f)) {
          if (std::binary_search(s.members.begin(), s.members.end(), g)) {
            continue;
          }
          std::vector<int> ns;
          ns.reserve(s.members.size() + 1);
          const auto it =
              std::lower_bound(s.members.begin(), s.members.end(), g);
          ns.insert(ns.end(), s.members.begin(), it);
          ns.push_back(g);
          ns.insert(ns.end(), it, s.members.end());
          if (!seen.insert(ns).second) continue;
          const double phi = phi_of_set(ns, ctx);
          if (phi == -kInf) continue;  // boundary not a single loop
          grown.push_back({std::move(ns), phi});
        }
      }
    }
    if (grown.empty()) break;
    std::sort(grown.begin(), grown.end(), [](const State& a, const State& b) {
      if (a.phi != b.phi) return a.phi > b.phi;
      return a.members < b.members;
    });
    if (grown.size() > width) grown.resize(width);
    if (grown.front().phi > best.phi ||
        (grown.front().phi == best.phi && grown.front().members < best.members)) {
      best = grown.front();
    }
    level = std::move(grown);
  }
  return best.members;
}

void predict_partial_rooms(Arrangement& arr, std::vector<Room>& rooms,
                           const std::vector<Frontier>& frontiers,
                           const LayoutParams& params) {
  if (frontiers.empty()) return;
  const PhiContext ctx = make_phi_context(arr, rooms, params);
  const int nl = static_cast<int>(arr.cut_lines.size());

  for (const Frontier& frontier : frontiers) {
    if (!arr.face_of_cell.in_bounds(frontier.candidate)) continue;
    const int f0 = arr.face_of_cell.at(frontier.candidate);
    if (f0 < 0) continue;
    Face& seed = arr.faces[f0];
    if (seed.room_id >= 0 || seed.solid) continue;

    Room room;
    if (seed.touches_border) {
      /* The face runs to the edge of the mapped rectangle: the room's
       * extent is unknowable, so no shape is predicted. */
      room.kind = RoomKind::OpenFrontier;
      room.faces = {f0};
      room.polygon = seed.polygon;
      const std::size_t nv = seed.polygon.size();
      for (std::size_t i = 0; i < nv; ++i) {
        if (seed.edge_lines[i] >= nl) {
          room.open_edges.push_back(
              {seed.polygon[i], seed.polygon[(i + 1) % nv]});
        }
      }
    } else {
      room.kind = RoomKind::Predicted;
      room.faces = search_room_completion(arr, f0, ctx);
      room.polygon = stitch_polygon(arr, boundary_piece_ids(arr, room.faces));
    }
    const int id = static_cast<int>(rooms.size());
    for (int f : room.faces) arr.faces[f].room_id = id;
    rooms.push_back(std::move(room));
  }
}

Layout retrieve_layout(const OccupancyGrid& map,
                       const std::vector<Frontier>& frontiers,
                       const LayoutParams& params) {
  g_retrievals.fetch_add(1, std::memory_order_relaxed);
  Layout layout;
  const std::vector<WallSegment> segments = extract_wall_segments(map, params);
  layout.lines = representative_lines(segments, params);
  layout.arrangement = build_faces(layout.lines, map, params);
  layout.rooms = cluster_fully_observed_rooms(layout.arrangement, params);
  predict_partial_rooms(layout.arrangement, layout.rooms, frontiers, params);
  if (g_check_invariants.load(std::memory_order_relaxed)) {
    check_layout_invariants(layout, map);
  }
  return layout;
}

std::string rooms_to_text(const Layout& layout) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  for (const Room& room : layout.rooms) {
    os << "room " << room_kind_name(room.kind);
    for (const Point& p : room.polygon) os << ' ' << p.x << ' ' << p.y;
    os << '\n';
  }
  return os.str();
}

std::uint64_t layout_retrieval_count() {
  return g_retrievals.load(std::memory_order_relaxed);
}

void set_layout_invariant_checks(bool enabled) {
  g_check_invariants.store(enabled, std::memory_order_relaxed);
}

void check_layout_invariants(const Layout& layout, const OccupancyGrid& map) {
  const Arrangement& arr = layout.arrangement;
  const int nf = static_cast<int>(arr.faces.size());
  if (nf == 0) {
    if (!layout.rooms.empty()) {
      throw std::logic_error("layout invariant: rooms without faces");
    }
    return;
  }

  const double total = arr.bounds_max.x * arr.bounds_max.y;
  double sum = 0.0;
  for (const Face& f : arr.faces) sum += f.area;
  if (std::abs(sum - total) > 1e-6 * total) {
    throw std::logic_error("layout invariant: faces do not tile the map");
  }

  for (int r = 0; r < map.cells.height(); ++r) {
    for (int c = 0; c < map.cells.width(); ++c) {
      const std::int32_t f = arr.face_of_cell.at(c, r);
      if (f < 0 || f >= nf) {
        throw std::logic_error("layout invariant: cell without face");
      }
    }
  }

  std::vector<int> owner(nf, -1);
  for (int i = 0; i < static_cast<int>(layout.rooms.size()); ++i) {
    const Room& room = layout.rooms[i];
    for (int f : room.faces) {
      if (f < 0 || f >= nf) {
        throw std::logic_error("layout invariant: room face out of range");
      }
      if (owner[f] != -1) {
        throw std::logic_error("layout invariant: face in two rooms");
      }
      owner[f] = i;
      if (arr.faces[f].room_id != i) {
        throw std::logic_error("layout invariant: face/room id mismatch");
      }
      if (room.kind == RoomKind::FullyObserved &&
          arr.faces[f].status != FaceStatus::FullyObserved) {
        throw std::logic_error(
            "layout invariant: observed room contains unobserved face");
      }
    }
  }
  for (int f = 0; f < nf; ++f) {
    if (arr.faces[f].room_id >= 0 && owner[f] != arr.faces[f].room_id) {
      throw std::logic_error("layout invariant: dangling room id");
    }
  }
}

}  // namespace explore
