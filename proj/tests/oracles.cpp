#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "explore/geometry.hpp"

namespace oracle {

namespace {

/* Rational bound p/q (q > 0) on the segment parameter, open or closed. */
struct Bound {
  long long num = 0;
  long long den = 1;
  bool strict = false;
};

int compare(const Bound& a, const Bound& b) {
  const long long lhs = a.num * b.den;
  const long long rhs = b.num * a.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

/* Clips t in [lo, hi] against  low <= x0 + t*dx < high  (scaled integer
 * coordinates).  Returns false when the result is empty. */
bool clip_axis(long long x0, long long dx, long long low, long long high,
               Bound& lo, Bound& hi) {
  if (dx == 0) return x0 >= low && x0 < high;
  if (dx > 0) {
    const Bound nlo{low - x0, dx, false};
    const Bound nhi{high - x0, dx, true};
    if (compare(nlo, lo) > 0 || (compare(nlo, lo) == 0 && nlo.strict)) lo = nlo;
    if (compare(nhi, hi) < 0 || (compare(nhi, hi) == 0 && nhi.strict)) hi = nhi;
  } else {
    /* dividing by dx < 0 flips the inequalities; keep denominators > 0 */
    const Bound nhi{x0 - low, -dx, false};
    const Bound nlo{x0 - high, -dx, true};
    if (compare(nlo, lo) > 0 || (compare(nlo, lo) == 0 && nlo.strict)) lo = nlo;
    if (compare(nhi, hi) < 0 || (compare(nhi, hi) == 0 && nhi.strict)) hi = nhi;
  }
  const int c = compare(lo, hi);
  if (c > 0) return false;
  if (c == 0) return !lo.strict && !hi.strict;
  return true;
}

bool segment_touches_cell(GridIndex a, GridIndex b, GridIndex cell) {
  /* centers scaled by two: odd coordinates, cell boundaries even */
  const long long ax = 2LL * a.col + 1, ay = 2LL * a.row + 1;
  const long long dx = 2LL * (b.col - a.col), dy = 2LL * (b.row - a.row);
  Bound lo{0, 1, false}, hi{1, 1, false};
  if (!clip_axis(ax, dx, 2LL * cell.col, 2LL * cell.col + 2, lo, hi))
    return false;
  return clip_axis(ay, dy, 2LL * cell.row, 2LL * cell.row + 2, lo, hi);
}

}  // namespace

std::set<GridIndex> segment_cell_set(GridIndex a, GridIndex b) {
  std::set<GridIndex> out;
  const int c0 = std::min(a.col, b.col) - 1, c1 = std::max(a.col, b.col) + 1;
  const int r0 = std::min(a.row, b.row) - 1, r1 = std::max(a.row, b.row) + 1;
  for (int row = r0; row <= r1; ++row)
    for (int col = c0; col <= c1; ++col)
      if (segment_touches_cell(a, b, {col, row})) out.insert({col, row});
  return out;
}

std::set<GridIndex> frontier_cells(const OccupancyGrid& map) {
  std::set<GridIndex> out;
  const auto& g = map.cells;
  for (int row = 0; row < g.height(); ++row) {
    for (int col = 0; col < g.width(); ++col) {
      if (g.at(col, row) != CellState::Free) continue;
      bool frontier = false;
      for (int dr = -1; dr <= 1 && !frontier; ++dr)
        for (int dc = -1; dc <= 1 && !frontier; ++dc) {
          if (dc == 0 && dr == 0) continue;
          if (g.in_bounds(col + dc, row + dr) &&
              g.at(col + dc, row + dr) == CellState::Unknown)
            frontier = true;
        }
      if (frontier) out.insert({col, row});
    }
  }
  return out;
}

std::vector<std::vector<GridIndex>> frontier_components(
    const OccupancyGrid& map, int min_cells) {
  const std::set<GridIndex> cells = frontier_cells(map);
  std::set<GridIndex> seen;
  std::vector<std::vector<GridIndex>> comps;
  for (const GridIndex& seed : cells) {
    if (seen.count(seed)) continue;
    std::vector<GridIndex> comp;
    std::deque<GridIndex> queue{seed};
    seen.insert(seed);
    while (!queue.empty()) {
      const GridIndex c = queue.front();
      queue.pop_front();
      comp.push_back(c);
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dc == 0 && dr == 0) continue;
          const GridIndex n{c.col + dc, c.row + dr};
          if (cells.count(n) && !seen.count(n)) {
            seen.insert(n);
            queue.push_back(n);
          }
        }
    }
    if (static_cast<int>(comp.size()) < min_cells) continue;
    std::sort(comp.begin(), comp.end(), explore::raster_less);
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(),
            [](const std::vector<GridIndex>& a,
               const std::vector<GridIndex>& b) {
              return explore::raster_less(a.front(), b.front());
            });
  return comps;
}

double info_gain(const Grid2<CellState>& known,
                 const Grid2<CellState>& blockers, GridIndex origin,
                 double range, double res, bool skip_blocked_targets) {
  const long long rr = std::llround((range / res) * (range / res));
  long long count = 0;
  for (int row = 0; row < known.height(); ++row) {
    for (int col = 0; col < known.width(); ++col) {
      if (known.at(col, row) != CellState::Unknown) continue;
      if (skip_blocked_targets &&
          blockers.at(col, row) == CellState::Occupied)
        continue;
      const long long dc = col - origin.col, dr = row - origin.row;
      if (dc * dc + dr * dr > rr) continue;
      const GridIndex target{col, row};
      bool blocked = false;
      for (const GridIndex& c : segment_cell_set(origin, target)) {
        if (c == origin || c == target) continue;
        if (blockers.at(c) == CellState::Occupied) {
          blocked = true;
          break;
        }
      }
      if (!blocked) ++count;
    }
  }
  return static_cast<double>(count) * res * res;
}

double info_gain_layout(const OccupancyGrid& map,
                        const Grid2<CellState>& stamped,
                        const explore::Layout& layout, GridIndex origin,
                        double range) {
  const explore::Arrangement& arr = layout.arrangement;
  const double res = map.resolution;
  const long long rr = std::llround((range / res) * (range / res));
  long long count = 0;
  for (int row = 0; row < map.cells.height(); ++row) {
    for (int col = 0; col < map.cells.width(); ++col) {
      if (map.cells.at(col, row) != CellState::Unknown) continue;
      const long long dc = col - origin.col, dr = row - origin.row;
      if (dc * dc + dr * dr > rr) continue;
      const GridIndex target{col, row};
      bool roomed = false;
      if (!arr.faces.empty() && arr.face_of_cell.in_bounds(target)) {
        const std::int32_t face = arr.face_of_cell.at(target);
        roomed = face >= 0 && arr.faces[face].room_id >= 0;
      }
      const Grid2<CellState>& blockers = roomed ? stamped : map.cells;
      if (roomed && stamped.at(target) == CellState::Occupied) continue;
      bool blocked = false;
      for (const GridIndex& c : segment_cell_set(origin, target)) {
        if (c == origin || c == target) continue;
        if (blockers.at(c) == CellState::Occupied) {
          blocked = true;
          break;
        }
      }
      if (!blocked) ++count;
    }
  }
  return static_cast<double>(count) * res * res;
}

std::optional<double> dijkstra_cost(const OccupancyGrid& map, GridIndex from,
                                    GridIndex to, double robot_radius) {
  const auto& g = map.cells;
  if (!g.in_bounds(from) || g.at(from) != CellState::Free)
    throw std::invalid_argument("dijkstra_cost: bad start");
  if (!g.in_bounds(to)) return std::nullopt;
  const int w = g.width(), h = g.height();

  Grid2<std::uint8_t> blocked(w, h, 0);
  if (robot_radius > 0.0) {
    const double rc2 = (robot_radius / map.resolution) *
                       (robot_radius / map.resolution);
    const int rc = static_cast<int>(std::floor(robot_radius / map.resolution));
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < w; ++col) {
        if (g.at(col, row) != CellState::Occupied) continue;
        for (int dr = -rc; dr <= rc; ++dr)
          for (int dc = -rc; dc <= rc; ++dc)
            if (dc * dc + dr * dr <= rc2 && g.in_bounds(col + dc, row + dr))
              blocked.at(col + dc, row + dr) = 1;
      }
  }
  blocked.at(from) = 0;
  auto passable = [&](GridIndex c) {
    return g.in_bounds(c) && g.at(c) == CellState::Free && !blocked.at(c);
  };
  if (from != to && !passable(to)) return std::nullopt;
  if (from == to) return 0.0;

  const double kInf = std::numeric_limits<double>::infinity();
  Grid2<double> dist(w, h, kInf);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist.at(from) = 0.0;
  pq.push({0.0, from.row * w + from.col});
  const int dcol[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int drow[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const double kSqrt2 = std::sqrt(2.0);
  while (!pq.empty()) {
    const auto [d, ci] = pq.top();
    pq.pop();
    const GridIndex c{ci % w, ci / w};
    if (d > dist.at(c)) continue;
    for (int k = 0; k < 8; ++k) {
      const GridIndex nb{c.col + dcol[k], c.row + drow[k]};
      if (!passable(nb)) continue;
      if (k >= 4 && (!passable({c.col + dcol[k], c.row}) ||
                     !passable({c.col, c.row + drow[k]})))
        continue;
      const double nd = d + (k >= 4 ? kSqrt2 : 1.0);
      if (nd < dist.at(nb)) {
        dist.at(nb) = nd;
        pq.push({nd, nb.row * w + nb.col});
      }
    }
  }
  if (dist.at(to) == kInf) return std::nullopt;
  return dist.at(to) * map.resolution;
}

std::vector<int> exhaustive_room_completion(const Arrangement& arr,
                                            int seed_face,
                                            const PhiContext& ctx) {
  const auto& faces = arr.faces;
  if (seed_face < 0 || seed_face >= static_cast<int>(faces.size()))
    throw std::invalid_argument("exhaustive_room_completion: bad seed");
  if (faces[seed_face].room_id >= 0 || faces[seed_face].solid)
    return {seed_face};

  std::vector<int> eligible;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f)
    if (faces[f].room_id < 0 && !faces[f].solid) eligible.push_back(f);
  const int n = static_cast<int>(eligible.size());
  if (n > 22)
    throw std::invalid_argument("exhaustive_room_completion: too many faces");

  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[eligible[i]] = i;
  std::vector<std::vector<int>> adj(n);
  for (const auto& piece : arr.pieces) {
    const auto a = pos.find(piece.face_neg);
    const auto b = pos.find(piece.face_pos);
    if (a != pos.end() && b != pos.end() && a->second != b->second) {
      adj[a->second].push_back(b->second);
      adj[b->second].push_back(a->second);
    }
  }
  const int seed_pos = pos.at(seed_face);

  double best_phi = -std::numeric_limits<double>::infinity();
  std::vector<int> best{seed_face};
  bool have_best = false;
  const std::uint32_t full = n >= 32 ? 0xffffffffu : (1u << n) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (!(mask & (1u << seed_pos))) continue;
    const int size = __builtin_popcount(mask);
    if (size > ctx.params.max_room_faces) continue;
    /* connectivity within the mask */
    std::uint32_t seen = 1u << seed_pos;
    std::deque<int> queue{seed_pos};
    int reached = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int u : adj[v]) {
        if ((mask & (1u << u)) && !(seen & (1u << u))) {
          seen |= 1u << u;
          ++reached;
          queue.push_back(u);
        }
      }
    }
    if (reached != size) continue;
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(eligible[i]);
    const double phi = explore::phi_score(members, ctx);
    if (!have_best || phi > best_phi ||
        (phi == best_phi && members < best)) {
      best_phi = phi;
      best = members;
      have_best = true;
    }
  }
  return best;
}

double flood_free_area(const std::string& env_text) {
  std::istringstream in(env_text);
  std::string word;
  double res = 0.0;
  int scol = 0, srow = 0;
  double theta = 0.0;
  if (!(in >> word >> res) || word != "resolution")
    throw std::runtime_error("flood_free_area: bad header");
  if (!(in >> word >> scol >> srow >> theta) || word != "start")
    throw std::runtime_error("flood_free_area: bad start line");
  std::string line;
  std::getline(in, line);  // consume the rest of the start line
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw std::runtime_error("flood_free_area: empty raster");
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows[0].size());
  std::set<std::pair<int, int>> seen;
  std::deque<std::pair<int, int>> queue;
  if (rows[srow][scol] != '.')
    throw std::runtime_error("flood_free_area: start not free");
  queue.push_back({scol, srow});
  seen.insert({scol, srow});
  long long count = 0;
  while (!queue.empty()) {
    const auto [c, r] = queue.front();
    queue.pop_front();
    ++count;
    const int dc4[4] = {1, -1, 0, 0};
    const int dr4[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nc = c + dc4[k], nr = r + dr4[k];
      if (nc < 0 || nr < 0 || nc >= w || nr >= h) continue;
      if (rows[nr][nc] != '.' || seen.count({nc, nr})) continue;
      seen.insert({nc, nr});
      queue.push_back({nc, nr});
    }
  }
  return static_cast<double>(count) * res * res;
}

double ray_hit_distance(const explore::GroundTruthWorld& world, Point origin,
                        double angle, double range) {
  const double res = world.resolution;
  const Point o{origin.x / res, origin.y / res};
  const Point dir{std::cos(angle), std::sin(angle)};
  const double len = range / res;

  /* crossing times of integer x and y boundaries, plus the endpoints */
  std::vector<double> ts{0.0, len};
  auto add_crossings = [&](double oc, double dc) {
    if (dc == 0.0) return;
    const double lo = std::min(oc, oc + dc * len);
    const double hi = std::max(oc, oc + dc * len);
    for (long long b = static_cast<long long>(std::ceil(lo));
         b <= static_cast<long long>(std::floor(hi)); ++b) {
      const double t = (static_cast<double>(b) - oc) / dc;
      if (t > 0.0 && t < len) ts.push_back(t);
    }
  };
  add_crossings(o.x, dir.x);
  add_crossings(o.y, dir.y);
  std::sort(ts.begin(), ts.end());

  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] <= 0.0) continue;
    const double mid = 0.5 * (ts[i] + ts[i + 1]);
    const int col = static_cast<int>(std::floor(o.x + dir.x * mid));
    const int row = static_cast<int>(std::floor(o.y + dir.y * mid));
    if (!world.cells.in_bounds(col, row)) return range;
    if (world.occupied({col, row})) return ts[i] * res;
  }
  return range;
}

double polygon_iou(const std::vector<Point>& a, const std::vector<Point>& b,
                   double res) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto* poly : {&a, &b}) {
    for (const Point& p : *poly) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const int c0 = static_cast<int>(std::floor(xmin / res)) - 1;
  const int c1 = static_cast<int>(std::ceil(xmax / res)) + 1;
  const int r0 = static_cast<int>(std::floor(ymin / res)) - 1;
  const int r1 = static_cast<int>(std::ceil(ymax / res)) + 1;
  long long in_a = 0, in_b = 0, in_both = 0;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      const Point p{(col + 0.5) * res, (row + 0.5) * res};
      const bool pa = explore::point_in_polygon(a, p);
      const bool pb = explore::point_in_polygon(b, p);
      in_a += pa;
      in_b += pb;
      in_both += pa && pb;
    }
  }
  const long long uni = in_a + in_b - in_both;
  return uni > 0 ? static_cast<double>(in_both) / static_cast<double>(uni)
                 : 0.0;
}

}  // namespace oracle
