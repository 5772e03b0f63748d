#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "explore/world.hpp"

namespace explore {

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

struct OccupancyGrid {
  Grid2<CellState> cells;
  double resolution = 0.1;

  Point cell_center(GridIndex c) const {
    return {(c.col + 0.5) * resolution, (c.row + 0.5) * resolution};
  }
  GridIndex cell_of(Point p) const {
    return {static_cast<int>(std::floor(p.x / resolution)),
            static_cast<int>(std::floor(p.y / resolution))};
  }
};

OccupancyGrid make_unknown_like(const GroundTruthWorld& world);

/* Marks every cell a ray traverses before its hit as Free and the hit cell
 * as Occupied, re-walking the same supercover the scan was cast on.  With a
 * perfect sensor the two markings never conflict: a cell is only traversed
 * while it is obstacle-free in the ground truth, so Free cells never flip
 * to Occupied or back.  Returns {newly free, newly occupied} cell counts.
 * Integrating the same scan twice leaves the map unchanged. */
struct IntegrationDelta {
  int new_free = 0;
  int new_occupied = 0;
};
IntegrationDelta integrate_scan(OccupancyGrid& map, const Scan& scan,
                                std::vector<GridIndex>* newly_free = nullptr);

/* A frontier: a maximal 8-connected chain of Free cells that touch at
 * least one Unknown cell.  `cells` is ordered along the chain (walk from
 * an endpoint; closed loops start at the raster-smallest cell) and
 * `candidate` is the middle element cells[(size-1)/2]. */
struct Frontier {
  std::vector<GridIndex> cells;
  GridIndex candidate;
};

GridIndex candidate_of(const std::vector<GridIndex>& chain);

/* Components with fewer than min_frontier_cells cells are discarded
 * (narrower than the robot).  Frontiers are returned sorted by their
 * raster-smallest cell, so the output is deterministic. */
std::vector<Frontier> detect_frontiers(const OccupancyGrid& map,
                                       int min_frontier_cells = 3);

/* Fraction of the reachable ground-truth free area currently marked Free. */
double explored_fraction(const OccupancyGrid& map,
                         const GroundTruthWorld& world);

/* Portable graymap text: Unknown=128, Free=255, Occupied=0. */
std::string to_pgm(const OccupancyGrid& map);
OccupancyGrid parse_pgm(const std::string& text, double resolution);
OccupancyGrid load_pgm(const std::string& path, double resolution);

}  // namespace explore
