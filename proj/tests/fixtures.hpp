#pragma once

#include <string>
#include <vector>

#include "explore/mapping.hpp"
#include "explore/runner.hpp"
#include "explore/world.hpp"

namespace fixture {

/* Builds an occupancy grid from an ASCII picture: '#' Occupied, '.' Free,
 * anything else Unknown.  Rows top to bottom. */
inline explore::OccupancyGrid grid_from_rows(
    const std::vector<std::string>& rows, double resolution = 0.1) {
  explore::OccupancyGrid map;
  map.resolution = resolution;
  const int h = static_cast<int>(rows.size());
  const int w = h > 0 ? static_cast<int>(rows[0].size()) : 0;
  map.cells = explore::Grid2<explore::CellState>(w, h,
                                                 explore::CellState::Unknown);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (rows[r][c] == '#') {
        map.cells.at(c, r) = explore::CellState::Occupied;
      } else if (rows[r][c] == '.') {
        map.cells.at(c, r) = explore::CellState::Free;
      }
    }
  }
  return map;
}

/* The map as it looks once everything has been observed. */
inline explore::OccupancyGrid full_map(const explore::GroundTruthWorld& w) {
  explore::OccupancyGrid map;
  map.resolution = w.resolution;
  map.cells = explore::Grid2<explore::CellState>(
      w.cells.width(), w.cells.height(), explore::CellState::Free);
  for (int r = 0; r < w.cells.height(); ++r) {
    for (int c = 0; c < w.cells.width(); ++c) {
      if (w.cells.at(c, r) == explore::TrueCell::Occupied) {
        map.cells.at(c, r) = explore::CellState::Occupied;
      }
    }
  }
  return map;
}

/* A small five-room office on a central corridor, 14 x 8 m at 0.1 m:
 * three rooms above the corridor, two below, one-cell walls, 1 m doors.
 * Start pose in the corridor center. */
struct OfficeSmall {
  std::string env_text;
  /* Ground-truth rectangles (meters): T1 T2 T3 corridor B1 B2. */
  std::vector<std::vector<explore::Point>> rooms;
};

inline const OfficeSmall& office_small() {
  static const OfficeSmall office = [] {
    const int w = 140, h = 80;
    std::vector<std::string> rows(h, std::string(w, '.'));
    auto wall_h = [&](int row, int c0, int c1) {
      for (int c = c0; c <= c1; ++c) rows[row][c] = '#';
    };
    auto wall_v = [&](int col, int r0, int r1) {
      for (int r = r0; r <= r1; ++r) rows[r][col] = '#';
    };
    wall_h(0, 0, w - 1);
    wall_h(h - 1, 0, w - 1);
    wall_v(0, 0, h - 1);
    wall_v(w - 1, 0, h - 1);
    wall_h(33, 1, w - 2);   // corridor's upper wall
    wall_h(46, 1, w - 2);   // corridor's lower wall
    wall_v(46, 1, 32);      // T1 | T2
    wall_v(92, 1, 32);      // T2 | T3
    wall_v(69, 47, 78);     // B1 | B2
    auto door_h = [&](int row, int c0) {
      for (int c = c0; c < c0 + 10; ++c) rows[row][c] = '.';
    };
    door_h(33, 18);   // T1
    door_h(33, 64);   // T2
    door_h(33, 111);  // T3
    door_h(46, 30);   // B1
    door_h(46, 99);   // B2

    OfficeSmall o;
    o.env_text = "resolution 0.1\nstart 70 39 0\n";
    for (const std::string& row : rows) o.env_text += row + "\n";
    auto rect = [](double x0, double y0, double x1, double y1) {
      return std::vector<explore::Point>{
          {x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    };
    o.rooms = {rect(0.1, 0.1, 4.6, 3.3),  rect(4.7, 0.1, 9.2, 3.3),
               rect(9.3, 0.1, 13.9, 3.3), rect(0.1, 3.4, 13.9, 4.6),
               rect(0.1, 4.7, 6.9, 7.9),  rect(7.0, 4.7, 13.9, 7.9)};
    return o;
  }();
  return office;
}

inline const explore::GroundTruthWorld& office_small_world() {
  static const explore::GroundTruthWorld w =
      explore::parse_world(office_small().env_text);
  return w;
}

/* Map snapshot of a partially exploring run; fraction 1.0 runs to the end. */
inline explore::OccupancyGrid explore_office_to(double fraction,
                                                std::uint64_t seed = 0) {
  explore::RunConfig config;
  config.mode = explore::StrategyMode::Baseline;
  config.seed = seed;
  config.stop_at_explored = fraction;
  return explore::run_exploration(office_small_world(), config).final_map;
}

}  // namespace fixture
