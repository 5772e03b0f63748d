#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "explore/mapping.hpp"

namespace explore {

struct PlannedPath {
  std::vector<GridIndex> cells;  // from .. to inclusive; empty when from==to
  double cost_m = 0.0;
};

/* Shortest 8-connected path over Free cells, diagonal steps costing
 * sqrt(2) and forbidden from cutting corners (both orthogonal neighbours
 * must be traversable).  Cells whose center lies within robot_radius of
 * an Occupied cell center are excluded (obstacle inflation); the start
 * cell itself is exempt so the robot can leave a tight spot.  Returns
 * nullopt when no path exists.  Throws std::invalid_argument when `from`
 * is not a Free in-bounds cell. */
std::optional<PlannedPath> plan_path(const OccupancyGrid& map, GridIndex from,
                                     GridIndex to, double robot_radius = 0.0);

/* Single-source shortest-path costs to every cell, under exactly the
 * movement rules of plan_path.  One field per decision round replaces one
 * search per candidate. */
struct DistanceField {
  GridIndex from;
  double resolution = 0.1;
  Grid2<double> cost_cells;        // path length in cell units; +inf unreached
  Grid2<std::int32_t> parent;      // flat predecessor index; -1 at from/unreached

  bool reached(GridIndex c) const {
    return cost_cells.in_bounds(c) &&
           cost_cells.at(c) != std::numeric_limits<double>::infinity();
  }
  double cost_m(GridIndex c) const { return cost_cells.at(c) * resolution; }
};

/* With `targets`, the search may stop as soon as every listed in-bounds
 * cell is finalized; the listed cells (and every cell of the shortest
 * paths to them) carry final costs, anything beyond may read as
 * unreached. */
DistanceField compute_distance_field(
    const OccupancyGrid& map, GridIndex from, double robot_radius = 0.0,
    const std::vector<GridIndex>* targets = nullptr);

/* Shortest path to `to` read out of the field; nullopt when unreached. */
std::optional<PlannedPath> extract_path(const DistanceField& field,
                                        GridIndex to);

}  // namespace explore
