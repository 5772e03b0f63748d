#include "explore/world.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace explore {

namespace {

std::runtime_error parse_error(const std::string& what) {
  return std::runtime_error("environment: " + what);
}

}  // namespace

GroundTruthWorld parse_world(const std::string& text,
                             double resolution_override) {
  std::istringstream in(text);
  std::string line;

  if (!std::getline(in, line)) throw parse_error("empty file");
  std::istringstream l1(line);
  std::string key;
  double resolution = 0.0;
  if (!(l1 >> key >> resolution) || key != "resolution" || resolution <= 0.0)
    throw parse_error("first line must be 'resolution <meters>'");
  if (resolution_override > 0.0) resolution = resolution_override;

  if (!std::getline(in, line)) throw parse_error("missing start line");
  std::istringstream l2(line);
  int scol = 0, srow = 0;
  double theta_deg = 0.0;
  if (!(l2 >> key >> scol >> srow >> theta_deg) || key != "start")
    throw parse_error("second line must be 'start <col> <row> <theta_deg>'");

  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw parse_error("no raster rows");
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());

  GroundTruthWorld w;
  w.resolution = resolution;
  w.cells = Grid2<TrueCell>(width, height, TrueCell::Free);
  for (int r = 0; r < height; ++r) {
    if (static_cast<int>(rows[r].size()) != width)
      throw parse_error("ragged raster row " + std::to_string(r));
    for (int c = 0; c < width; ++c) {
      char ch = rows[r][c];
      if (ch == '#') {
        w.cells.at(c, r) = TrueCell::Occupied;
      } else if (ch != '.') {
        throw parse_error(std::string("unexpected character '") + ch + "'");
      }
    }
  }

  bool any_free = false;
  for (TrueCell c : w.cells.cells())
    if (c == TrueCell::Free) { any_free = true; break; }
  if (!any_free) throw parse_error("no free cells");

  if (!w.cells.in_bounds(scol, srow))
    throw parse_error("start cell out of bounds");
  if (w.cells.at(scol, srow) != TrueCell::Free)
    throw parse_error("start cell is occupied");

  w.start = Pose{(scol + 0.5) * resolution, (srow + 0.5) * resolution,
                 normalize_angle(theta_deg * kPi / 180.0)};

  /* Flood fill (4-connectivity) from the start; unreachable free pockets
   * stay out of the explorable-area denominator. */
  w.reachable = Grid2<std::uint8_t>(width, height, 0);
  std::vector<GridIndex> stack{{scol, srow}};
  w.reachable.at(scol, srow) = 1;
  std::size_t reachable_count = 0;
  while (!stack.empty()) {
    GridIndex c = stack.back();
    stack.pop_back();
    ++reachable_count;
    const GridIndex nb[4] = {{c.col + 1, c.row}, {c.col - 1, c.row},
                             {c.col, c.row + 1}, {c.col, c.row - 1}};
    for (GridIndex n : nb) {
      if (!w.cells.in_bounds(n) || w.reachable.at(n) ||
          w.cells.at(n) != TrueCell::Free)
        continue;
      w.reachable.at(n) = 1;
      stack.push_back(n);
    }
  }
  w.free_area = static_cast<double>(reachable_count) * resolution * resolution;
  return w;
}

GroundTruthWorld load_world(const std::string& path,
                            double resolution_override) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("environment: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_world(buf.str(), resolution_override);
}

Scan simulate_scan(const GroundTruthWorld& world, const Pose& pose,
                   const SensorModel& sensor) {
  const double res = world.resolution;
  GridIndex pc = world.cell_of(pose.position());
  if (!world.cells.in_bounds(pc))
    throw std::invalid_argument("simulate_scan: pose out of bounds");
  if (world.occupied(pc))
    throw std::invalid_argument("simulate_scan: pose on an occupied cell");
  if (sensor.ray_count < 2)
    throw std::invalid_argument("simulate_scan: ray_count must be >= 2");

  Scan scan;
  scan.pose = pose;
  scan.sensor = sensor;
  scan.rays.reserve(sensor.ray_count);

  const Point origin{pose.x / res, pose.y / res};  // cell units
  const double length = sensor.range / res;

  for (int i = 0; i < sensor.ray_count; ++i) {
    const double angle = normalize_angle(
        pose.theta - sensor.fov / 2.0 +
        sensor.fov * static_cast<double>(i) / (sensor.ray_count - 1));
    ScanRay ray;
    ray.angle = angle;
    ray.distance = sensor.range;
    ray.max_range = true;
    const Point dir{std::cos(angle), std::sin(angle)};
    walk_supercover(origin, dir, length, [&](int col, int row, double t) {
      if (!world.cells.in_bounds(col, row)) {
        ray.distance = std::min(sensor.range, t * res);
        return false;  // left the grid: no obstacle seen
      }
      if (world.cells.at(col, row) == TrueCell::Occupied) {
        ray.distance = t * res;
        ray.max_range = false;
        ray.hit = {col, row};
        return false;
      }
      return true;
    });
    scan.rays.push_back(ray);
  }
  return scan;
}

}  // namespace explore
