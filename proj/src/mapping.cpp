#include "explore/mapping.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace explore {

OccupancyGrid make_unknown_like(const GroundTruthWorld& world) {
  OccupancyGrid map;
  map.resolution = world.resolution;
  map.cells = Grid2<CellState>(world.cells.width(), world.cells.height(),
                               CellState::Unknown);
  return map;
}

IntegrationDelta integrate_scan(OccupancyGrid& map, const Scan& scan,
                                std::vector<GridIndex>* newly_free) {
  IntegrationDelta delta;
  const double res = map.resolution;
  const Point origin{scan.pose.x / res, scan.pose.y / res};

  for (const ScanRay& ray : scan.rays) {
    const Point dir{std::cos(ray.angle), std::sin(ray.angle)};
    const double length = ray.distance / res;
    walk_supercover(origin, dir, length, [&](int col, int row, double) {
      if (!map.cells.in_bounds(col, row)) return false;
      CellState& s = map.cells.at(col, row);
      if (!ray.max_range && GridIndex{col, row} == ray.hit) {
        if (s == CellState::Unknown) {
          s = CellState::Occupied;
          ++delta.new_occupied;
        }
        return false;
      }
      if (s == CellState::Unknown) {
        s = CellState::Free;
        ++delta.new_free;
        if (newly_free != nullptr) newly_free->push_back({col, row});
      }
      return true;
    });
  }
  return delta;
}

GridIndex candidate_of(const std::vector<GridIndex>& chain) {
  if (chain.empty()) throw std::invalid_argument("candidate_of: empty chain");
  return chain[(chain.size() - 1) / 2];
}

namespace {

bool is_frontier_cell(const Grid2<CellState>& g, int col, int row) {
  if (g.at(col, row) != CellState::Free) return false;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dc == 0 && dr == 0) continue;
      int c = col + dc, r = row + dr;
      if (g.in_bounds(c, r) && g.at(c, r) == CellState::Unknown) return true;
    }
  }
  return false;
}

/* Orders one 8-connected component as a chain.  Start from the raster-
 * smallest endpoint (a cell with exactly one neighbour in the component)
 * or, for loops and blobs, from the raster-smallest cell; then repeatedly
 * extend to the raster-smallest unvisited neighbour, jumping to the
 * raster-smallest unvisited cell if the walk dead-ends early. */
std::vector<GridIndex> order_chain(std::vector<GridIndex> comp) {
  std::sort(comp.begin(), comp.end(), raster_less);
  auto find = [&](GridIndex c) -> int {
    auto it = std::lower_bound(comp.begin(), comp.end(), c, raster_less);
    if (it != comp.end() && *it == c)
      return static_cast<int>(it - comp.begin());
    return -1;
  };
  auto neighbours = [&](GridIndex c, auto&& fn) {
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (dc == 0 && dr == 0) continue;
        int k = find({c.col + dc, c.row + dr});
        if (k >= 0) fn(k);
      }
  };

  int start = 0;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    int deg = 0;
    neighbours(comp[i], [&](int) { ++deg; });
    if (deg == 1) { start = static_cast<int>(i); break; }  // raster-sorted
  }

  std::vector<std::uint8_t> visited(comp.size(), 0);
  std::vector<GridIndex> chain;
  chain.reserve(comp.size());
  std::size_t comp_ptr = 0;
  int cur = start;
  visited[cur] = 1;
  chain.push_back(comp[cur]);
  while (chain.size() < comp.size()) {
    int next = -1;
    neighbours(comp[cur], [&](int k) {
      if (visited[k]) return;
      if (next < 0 || raster_less(comp[k], comp[next])) next = k;
    });
    if (next < 0) {  // blob dead-end: continue from the smallest unvisited
      while (visited[comp_ptr]) ++comp_ptr;
      next = static_cast<int>(comp_ptr);
    }
    visited[next] = 1;
    chain.push_back(comp[next]);
    cur = next;
  }
  return chain;
}

}  // namespace

std::vector<Frontier> detect_frontiers(const OccupancyGrid& map,
                                       int min_frontier_cells) {
  const Grid2<CellState>& g = map.cells;
  Grid2<std::uint8_t> member(g.width(), g.height(), 0);
  std::vector<GridIndex> frontier_cells;
  for (int row = 0; row < g.height(); ++row)
    for (int col = 0; col < g.width(); ++col)
      if (is_frontier_cell(g, col, row)) {
        member.at(col, row) = 1;
        frontier_cells.push_back({col, row});
      }

  std::vector<Frontier> out;
  Grid2<std::uint8_t> seen(g.width(), g.height(), 0);
  for (GridIndex seed : frontier_cells) {
    if (seen.at(seed)) continue;
    std::vector<GridIndex> comp;
    std::vector<GridIndex> stack{seed};
    seen.at(seed) = 1;
    while (!stack.empty()) {
      GridIndex c = stack.back();
      stack.pop_back();
      comp.push_back(c);
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dc == 0 && dr == 0) continue;
          GridIndex n{c.col + dc, c.row + dr};
          if (member.in_bounds(n) && member.at(n) && !seen.at(n)) {
            seen.at(n) = 1;
            stack.push_back(n);
          }
        }
    }
    if (static_cast<int>(comp.size()) < min_frontier_cells) continue;
    Frontier f;
    f.cells = order_chain(std::move(comp));
    f.candidate = candidate_of(f.cells);
    out.push_back(std::move(f));
  }

  std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) {
    GridIndex ma = *std::min_element(a.cells.begin(), a.cells.end(),
                                     raster_less);
    GridIndex mb = *std::min_element(b.cells.begin(), b.cells.end(),
                                     raster_less);
    return raster_less(ma, mb);
  });
  return out;
}

double explored_fraction(const OccupancyGrid& map,
                         const GroundTruthWorld& world) {
  if (map.cells.width() != world.cells.width() ||
      map.cells.height() != world.cells.height())
    throw std::invalid_argument("explored_fraction: dimension mismatch");
  std::size_t n = 0;
  for (int row = 0; row < map.cells.height(); ++row)
    for (int col = 0; col < map.cells.width(); ++col)
      if (map.cells.at(col, row) == CellState::Free &&
          world.reachable.at(col, row))
        ++n;
  return static_cast<double>(n) * map.resolution * map.resolution /
         world.free_area;
}

std::string to_pgm(const OccupancyGrid& map) {
  std::ostringstream out;
  out << "P2\n" << map.cells.width() << ' ' << map.cells.height() << "\n255\n";
  for (int row = 0; row < map.cells.height(); ++row) {
    for (int col = 0; col < map.cells.width(); ++col) {
      int v = 128;
      switch (map.cells.at(col, row)) {
        case CellState::Free: v = 255; break;
        case CellState::Occupied: v = 0; break;
        default: break;
      }
      out << v << (col + 1 == map.cells.width() ? '\n' : ' ');
    }
  }
  return out.str();
}

OccupancyGrid parse_pgm(const std::string& text, double resolution) {
  std::istringstream in(text);
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  if (!(in >> magic >> w >> h >> maxv) || magic != "P2" || w <= 0 || h <= 0)
    throw std::runtime_error("pgm: malformed header");
  OccupancyGrid map;
  map.resolution = resolution;
  map.cells = Grid2<CellState>(w, h, CellState::Unknown);
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col) {
      int v = 0;
      if (!(in >> v)) throw std::runtime_error("pgm: truncated raster");
      if (v == 255) map.cells.at(col, row) = CellState::Free;
      else if (v == 0) map.cells.at(col, row) = CellState::Occupied;
    }
  return map;
}

OccupancyGrid load_pgm(const std::string& path, double resolution) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("pgm: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_pgm(buf.str(), resolution);
}

}  // namespace explore
