#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "explore/grid.hpp"

namespace explore {

enum class TrueCell : std::uint8_t { Free = 0, Occupied = 1 };

struct SensorModel {
  double fov = kPi;        // radians
  double range = 6.0;      // meters
  int ray_count = 180;
};

/* Ground-truth environment: an occupancy raster, the start pose, and the
 * explorable free area.  Free cells that are not 4-connected to the start
 * are kept in the raster but excluded from `reachable` and from
 * `free_area`, so they never enter the exploration denominator. */
struct GroundTruthWorld {
  Grid2<TrueCell> cells;
  Grid2<std::uint8_t> reachable;  // 1 for free cells 4-connected to start
  double resolution = 0.1;        // meters per cell
  double free_area = 0.0;         // reachable free cells * resolution^2
  Pose start;

  bool occupied(GridIndex c) const { return cells.at(c) == TrueCell::Occupied; }
  Point cell_center(GridIndex c) const {
    return {(c.col + 0.5) * resolution, (c.row + 0.5) * resolution};
  }
  GridIndex cell_of(Point p) const {
    return {static_cast<int>(std::floor(p.x / resolution)),
            static_cast<int>(std::floor(p.y / resolution))};
  }
  GridIndex start_cell() const { return cell_of(start.position()); }
};

/* Environment file format:
 *   line 1: "resolution <meters>"
 *   line 2: "start <col> <row> <theta_degrees>"
 *   then one raster row per line, '#' occupied / '.' free, equal lengths.
 * Throws std::runtime_error on malformed input, a start cell that is not
 * free, or a raster without free cells.  resolution_override replaces the
 * declared resolution when positive. */
GroundTruthWorld load_world(const std::string& path,
                            double resolution_override = 0.0);
GroundTruthWorld parse_world(const std::string& text,
                             double resolution_override = 0.0);

struct ScanRay {
  double angle = 0.0;     // absolute heading of the ray
  double distance = 0.0;  // meters to the obstacle entry point, capped
  bool max_range = true;  // true when no obstacle was hit within range
  GridIndex hit{-1, -1};  // obstacle cell when max_range is false
};

struct Scan {
  Pose pose;
  SensorModel sensor;
  std::vector<ScanRay> rays;
};

/* Casts sensor.ray_count rays evenly spanning [theta - fov/2, theta + fov/2]
 * (endpoints included).  Each ray walks the grid supercover from the pose
 * and stops at the first occupied cell it touches; its distance is the
 * ray parameter at which that cell was reached.  Rays that leave the grid
 * or reach sensor.range report max_range.  Throws std::invalid_argument
 * when the pose is out of bounds or on an occupied cell. */
Scan simulate_scan(const GroundTruthWorld& world, const Pose& pose,
                   const SensorModel& sensor);

}  // namespace explore
