#include "explore/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace explore {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

/* Octile distance: exact lower bound for unit straight / sqrt(2)
 * diagonal step costs. */
double octile(GridIndex a, GridIndex b) {
  double dx = std::abs(a.col - b.col);
  double dy = std::abs(a.row - b.row);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

}  // namespace

std::optional<PlannedPath> plan_path(const OccupancyGrid& map, GridIndex from,
                                     GridIndex to, double robot_radius) {
  const Grid2<CellState>& g = map.cells;
  if (!g.in_bounds(from) || g.at(from) != CellState::Free)
    throw std::invalid_argument("plan_path: start is not a free cell");
  if (!g.in_bounds(to)) return std::nullopt;
  if (from == to) return PlannedPath{};

  const int w = g.width(), h = g.height();
  std::vector<std::uint8_t> blocked(g.size(), 0);
  if (robot_radius > 0.0) {
    const int rc = static_cast<int>(std::floor(robot_radius / map.resolution));
    const double r2 = (robot_radius / map.resolution) *
                      (robot_radius / map.resolution);
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < w; ++col) {
        if (g.at(col, row) != CellState::Occupied) continue;
        for (int dr = -rc; dr <= rc; ++dr)
          for (int dc = -rc; dc <= rc; ++dc) {
            if (dc * dc + dr * dr > r2) continue;
            int c = col + dc, r = row + dr;
            if (g.in_bounds(c, r))
              blocked[static_cast<std::size_t>(r) * w + c] = 1;
          }
      }
  }
  auto idx = [&](GridIndex c) {
    return static_cast<std::size_t>(c.row) * w + c.col;
  };
  auto passable = [&](GridIndex c) {
    return g.in_bounds(c) && g.at(c) == CellState::Free && !blocked[idx(c)];
  };
  blocked[idx(from)] = 0;  // the robot already stands here
  if (!passable(to)) return std::nullopt;

  constexpr double kInf = 1e18;
  std::vector<double> dist(g.size(), kInf);
  std::vector<std::int32_t> parent(g.size(), -1);

  struct Node {
    double f;
    double gcost;
    std::int32_t cell;
  };
  auto worse = [](const Node& a, const Node& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.gcost != b.gcost) return a.gcost < b.gcost;  // prefer deeper
    return a.cell > b.cell;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

  dist[idx(from)] = 0.0;
  open.push({octile(from, to), 0.0, static_cast<std::int32_t>(idx(from))});

  const int dcol[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int drow[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    Node n = open.top();
    open.pop();
    const std::int32_t ci = n.cell;
    if (n.gcost > dist[ci]) continue;  // stale entry
    GridIndex c{ci % w, ci / w};
    if (c == to) break;
    for (int k = 0; k < 8; ++k) {
      GridIndex nb{c.col + dcol[k], c.row + drow[k]};
      if (!passable(nb)) continue;
      if (k >= 4) {  // no corner cutting on diagonal moves
        if (!passable({c.col + dcol[k], c.row}) ||
            !passable({c.col, c.row + drow[k]}))
          continue;
      }
      double nd = n.gcost + (k >= 4 ? kSqrt2 : 1.0);
      std::size_t ni = idx(nb);
      if (nd < dist[ni]) {
        dist[ni] = nd;
        parent[ni] = ci;
        open.push({nd + octile(nb, to), nd, static_cast<std::int32_t>(ni)});
      }
    }
  }

  if (dist[idx(to)] >= kInf) return std::nullopt;

  PlannedPath path;
  path.cost_m = dist[idx(to)] * map.resolution;
  for (std::int32_t ci = static_cast<std::int32_t>(idx(to)); ci >= 0;
       ci = parent[ci])
    path.cells.push_back({ci % w, ci / w});
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

DistanceField compute_distance_field(const OccupancyGrid& map, GridIndex from,
                                     double robot_radius,
                                     const std::vector<GridIndex>* targets) {
  const Grid2<CellState>& g = map.cells;
  if (!g.in_bounds(from) || g.at(from) != CellState::Free)
    throw std::invalid_argument(
        "compute_distance_field: start is not a free cell");
  const int w = g.width(), h = g.height();

  Grid2<std::uint8_t> wanted(0, 0);
  std::size_t remaining = 0;
  if (targets != nullptr) {
    wanted = Grid2<std::uint8_t>(w, h, 0);
    for (GridIndex t : *targets) {
      if (g.in_bounds(t) && !wanted.at(t)) {
        wanted.at(t) = 1;
        ++remaining;
      }
    }
  }

  Grid2<std::uint8_t> blocked(w, h, 0);
  if (robot_radius > 0.0) {
    const int rc = static_cast<int>(std::floor(robot_radius / map.resolution));
    const double r2 = (robot_radius / map.resolution) *
                      (robot_radius / map.resolution);
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < w; ++col) {
        if (g.at(col, row) != CellState::Occupied) continue;
        for (int dr = -rc; dr <= rc; ++dr)
          for (int dc = -rc; dc <= rc; ++dc) {
            if (dc * dc + dr * dr > r2) continue;
            if (g.in_bounds(col + dc, row + dr))
              blocked.at(col + dc, row + dr) = 1;
          }
      }
    blocked.at(from) = 0;  // the robot already stands here
  }
  auto passable = [&](GridIndex c) {
    return g.in_bounds(c) && g.at(c) == CellState::Free && !blocked.at(c);
  };

  DistanceField field;
  field.from = from;
  field.resolution = map.resolution;
  field.cost_cells =
      Grid2<double>(w, h, std::numeric_limits<double>::infinity());
  field.parent = Grid2<std::int32_t>(w, h, -1);

  struct Node {
    double cost;
    std::int32_t cell;
  };
  auto worse = [](const Node& a, const Node& b) {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.cell > b.cell;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
  field.cost_cells.at(from) = 0.0;
  open.push({0.0, static_cast<std::int32_t>(from.row) * w + from.col});

  const int dcol[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int drow[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const Node n = open.top();
    open.pop();
    const GridIndex c{n.cell % w, n.cell / w};
    if (n.cost > field.cost_cells.at(c)) continue;  // stale entry
    if (targets != nullptr && wanted.at(c)) {
      wanted.at(c) = 0;
      if (--remaining == 0) break;  // every target finalized
    }
    for (int k = 0; k < 8; ++k) {
      const GridIndex nb{c.col + dcol[k], c.row + drow[k]};
      if (!passable(nb)) continue;
      if (k >= 4) {  // no corner cutting on diagonal moves
        if (!passable({c.col + dcol[k], c.row}) ||
            !passable({c.col, c.row + drow[k]}))
          continue;
      }
      const double nd = n.cost + (k >= 4 ? kSqrt2 : 1.0);
      if (nd < field.cost_cells.at(nb)) {
        field.cost_cells.at(nb) = nd;
        field.parent.at(nb) = n.cell;
        open.push({nd, static_cast<std::int32_t>(nb.row) * w + nb.col});
      }
    }
  }
  return field;
}

std::optional<PlannedPath> extract_path(const DistanceField& field,
                                        GridIndex to) {
  if (!field.reached(to)) return std::nullopt;
  if (to == field.from) return PlannedPath{};
  const int w = field.cost_cells.width();
  PlannedPath path;
  path.cost_m = field.cost_m(to);
  for (std::int32_t ci = to.row * w + to.col; ci >= 0;
       ci = field.parent.at({ci % w, ci / w}))
    path.cells.push_back({ci % w, ci / w});
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

}  // namespace explore
