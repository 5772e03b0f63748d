#include "explore/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "explore/grid.hpp"
#include "explore/io.hpp"
#include "explore/rng.hpp"

namespace explore {

namespace {

/* One-cell walls: every wall cell is a surface cell observable from the
 * free side, so a finished exploration leaves no unreachable unknown
 * pockets inside walls (which would otherwise spawn frontiers that can
 * never be resolved and drag out the final phase). */
constexpr int kWall = 1;  // wall thickness, cells

int to_cells(double meters, double res) {
  return std::max(1, static_cast<int>(std::llround(meters / res)));
}

/* Splits a row of `length` cells into room widths separated by walls;
 * widths stay in roughly 6 .. 10 m. */
std::vector<int> partition_row(Rng& rng, int length) {
  const int nmin = std::max(1, (length + 2 + 71) / 72);  // ceil((L+2)/72)
  const int nmax = std::max(1, (length + 2) / 42);
  int n = static_cast<int>(std::llround((length + 2) / 57.0));
  n = std::clamp(n, nmin, nmax);
  const int interior = length - kWall * (n - 1);
  const int base = interior / n;
  const int rem = interior % n;
  std::vector<int> widths(n, base);
  for (int i = 0; i < rem; ++i) ++widths[i];
  for (int i = 0; i + 1 < n; i += 2) {
    const int lo = std::max({-4, 40 - widths[i], widths[i + 1] - 70});
    const int hi = std::min({4, 70 - widths[i], widths[i + 1] - 40});
    if (hi > lo) {
      const int d = lo + static_cast<int>(rng.below(hi - lo + 1));
      widths[i] += d;
      widths[i + 1] -= d;
    }
  }
  return widths;
}

struct BandSpec {
  int depth_top = 0;
  int depth_bot = 0;
  int corridor = 0;
  double length_scale = 1.0;
  std::uint64_t seed_top = 0;
  std::uint64_t seed_bot = 0;
};

struct Draft {
  std::vector<std::string> raster;
  std::vector<NamedPolygon> rooms;
  int start_col = 0, start_row = 0;
  long long connector_cells = 0;
  long long free_cells = 0;  // reachable from start
};

/* Ground-truth polygon for an interior cell rectangle, extended half a
 * wall into the surrounding walls so adjacent polygons meet exactly on
 * the wall centerlines. */
NamedPolygon centerline_rect(const std::string& kind, int c0, int r0, int c1,
                             int r1, double res) {
  const double x0 = (c0 - 0.5 * kWall) * res;
  const double y0 = (r0 - 0.5 * kWall) * res;
  const double x1 = (c1 + 1 + 0.5 * kWall) * res;
  const double y1 = (r1 + 1 + 0.5 * kWall) * res;
  return {kind, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

Draft paint(const std::vector<BandSpec>& bands, int row_length,
            int connector_w, double res) {
  const int x_conn0 = kWall;
  const int x_conn1 = x_conn0 + connector_w - 1;
  const int x_row0 = x_conn1 + 1 + kWall;
  int height = kWall + kWall;  // outer walls
  for (std::size_t k = 0; k < bands.size(); ++k) {
    height += bands[k].depth_top + kWall + bands[k].corridor + kWall +
              bands[k].depth_bot;
    if (k + 1 < bands.size()) height += kWall;
  }
  const int width = x_row0 + row_length + kWall;

  Draft d;
  d.raster.assign(height, std::string(width, '#'));
  auto carve = [&](int c0, int r0, int c1, int r1) {
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) d.raster[r][c] = '.';
    }
  };
  auto fill = [&](int c0, int r0, int c1, int r1) {
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) d.raster[r][c] = '#';
    }
  };

  carve(x_conn0, kWall, x_conn1, height - kWall - 1);
  d.connector_cells =
      static_cast<long long>(connector_w) * (height - 2 * kWall);
  d.rooms.push_back(centerline_rect("connector", x_conn0, kWall, x_conn1,
                                    height - kWall - 1, res));

  auto carve_room_row = [&](std::uint64_t seed, int y0, int depth, int len,
                            int door_wall_y0) {
    Rng rng(seed);
    carve(x_row0, y0, x_row0 + len - 1, y0 + depth - 1);
    const std::vector<int> widths = partition_row(rng, len);
    int xa = x_row0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const int xb = xa + widths[i] - 1;
      if (i + 1 < widths.size()) fill(xb + 1, y0, xb + kWall, y0 + depth - 1);
      d.rooms.push_back(centerline_rect("room", xa, y0, xb, y0 + depth - 1,
                                        res));
      int dw = 10 + static_cast<int>(rng.below(3));  // 1.0 .. 1.2 m doors
      dw = std::min(dw, widths[i] - 4);
      const int avail = widths[i] - dw - 4;
      const int so =
          avail >= 0 ? 2 + static_cast<int>(rng.below(avail + 1))
                     : std::max(1, (widths[i] - dw) / 2);
      carve(xa + so, door_wall_y0, xa + so + dw - 1, door_wall_y0 + kWall - 1);
      xa = xb + kWall + 1;
    }
  };

  int y = kWall;
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const BandSpec& band = bands[k];
    const int len = std::max(
        44, static_cast<int>(std::llround(row_length * band.length_scale)));

    carve_room_row(band.seed_top, y, band.depth_top, len, y + band.depth_top);
    y += band.depth_top + kWall;

    carve(x_row0, y, x_row0 + len - 1, y + band.corridor - 1);
    d.rooms.push_back(centerline_rect("corridor", x_row0, y, x_row0 + len - 1,
                                      y + band.corridor - 1, res));
    const int door_h = 10;  // 1.0 m opening into the connector
    const int cy = y + (band.corridor - door_h) / 2;
    carve(x_conn1 + 1, cy, x_conn1 + kWall, cy + door_h - 1);
    y += band.corridor + kWall;

    carve_room_row(band.seed_bot, y, band.depth_bot, len, y - kWall);
    y += band.depth_bot;
    if (k + 1 < bands.size()) y += kWall;
  }

  d.start_col = x_conn0 + connector_w / 2;
  d.start_row = height - kWall - 1;

  /* Reachable free area (4-connected flood from the start). */
  Grid2<std::uint8_t> seen(width, height, 0);
  std::deque<GridIndex> queue;
  queue.push_back({d.start_col, d.start_row});
  seen.at(d.start_col, d.start_row) = 1;
  while (!queue.empty()) {
    const GridIndex c = queue.front();
    queue.pop_front();
    ++d.free_cells;
    const int dc4[4] = {1, -1, 0, 0};
    const int dr4[4] = {0, 0, 1, -1};
    for (int i = 0; i < 4; ++i) {
      const GridIndex nb{c.col + dc4[i], c.row + dr4[i]};
      if (nb.col < 0 || nb.row < 0 || nb.col >= width || nb.row >= height) {
        continue;
      }
      if (seen.at(nb) || d.raster[nb.row][nb.col] != '.') continue;
      seen.at(nb) = 1;
      queue.push_back(nb);
    }
  }
  return d;
}

GeneratedEnv generate_env(const std::string& name, std::uint64_t env_seed,
                          double target_area, bool irregular, double res) {
  Rng rng(env_seed);
  const int k_bands =
      std::clamp(static_cast<int>(std::llround(std::sqrt(target_area) / 12.0)),
                 2, 8);
  std::vector<BandSpec> bands(k_bands);
  for (BandSpec& b : bands) {
    b.depth_top = to_cells(rng.uniform(4.5, 6.5), res);
    b.depth_bot = to_cells(rng.uniform(4.5, 6.5), res);
    b.corridor = to_cells(rng.uniform(2.0, 2.6), res);
  }
  const int connector_w = to_cells(rng.uniform(2.0, 2.6), res);
  if (irregular) {
    const int notched = std::max(1, k_bands / 3);
    for (int k = k_bands - notched; k < k_bands; ++k) {
      bands[k].length_scale = rng.uniform(0.55, 0.75);
    }
  }
  for (BandSpec& b : bands) {
    b.seed_top = rng.next();
    b.seed_bot = rng.next();
  }

  double denom = 0.0;  // free cells gained per unit of row length
  for (const BandSpec& b : bands) {
    denom += b.length_scale * (b.depth_top + b.depth_bot + b.corridor);
  }
  const double target_cells = target_area / (res * res);
  int length = std::clamp(
      static_cast<int>(std::llround(target_cells / denom)), 60, 1600);
  Draft draft = paint(bands, length, connector_w, res);

  /* Second pass: rescale the row length using the measured area, with the
   * fixed connector contribution taken out. */
  const double cell_area = res * res;
  const double measured = draft.free_cells * cell_area;
  const double conn = draft.connector_cells * cell_area;
  if (measured > conn && target_area > conn) {
    const double ratio = (target_area - conn) / (measured - conn);
    length = std::clamp(static_cast<int>(std::llround(length * ratio)), 60,
                        1600);
    draft = paint(bands, length, connector_w, res);
  }

  GeneratedEnv env;
  env.name = name;
  env.target_area = target_area;
  env.free_area = draft.free_cells * cell_area;

  std::ostringstream os;
  os << "resolution " << res << "\n";
  os << "start " << draft.start_col << ' ' << draft.start_row << " -90\n";
  for (const std::string& row : draft.raster) os << row << '\n';
  env.env_text = os.str();
  env.rooms_text = rooms_to_text(draft.rooms);
  return env;
}

}  // namespace

std::vector<GeneratedEnv> generate_corpus(const CorpusParams& params) {
  std::vector<GeneratedEnv> envs;
  envs.reserve(params.count);
  for (int i = 0; i < params.count; ++i) {
    const double t = params.count > 1
                         ? static_cast<double>(i) / (params.count - 1)
                         : 0.0;
    const double target =
        params.min_target_area +
        t * (params.max_target_area - params.min_target_area);
    const bool irregular = i >= params.count - params.irregular;
    std::ostringstream name;
    name << "env_" << std::setw(2) << std::setfill('0') << i;
    envs.push_back(generate_env(name.str(), params.seed + 0x1000u * i, target,
                                irregular, params.resolution));
  }
  return envs;
}

std::string rooms_to_text(const std::vector<NamedPolygon>& rooms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  for (const NamedPolygon& room : rooms) {
    os << "room " << room.kind;
    for (const Point& p : room.polygon) os << ' ' << p.x << ' ' << p.y;
    os << '\n';
  }
  return os.str();
}

std::vector<NamedPolygon> parse_rooms_text(const std::string& text) {
  std::vector<NamedPolygon> rooms;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag, kind;
    if (!(ls >> tag >> kind) || tag != "room") {
      throw std::runtime_error("rooms file: bad line " +
                               std::to_string(lineno));
    }
    NamedPolygon room{kind, {}};
    double x = 0.0, y = 0.0;
    while (ls >> x >> y) room.polygon.push_back({x, y});
    if (room.polygon.size() < 3) {
      throw std::runtime_error("rooms file: polygon too small on line " +
                               std::to_string(lineno));
    }
    rooms.push_back(std::move(room));
  }
  return rooms;
}

CorpusManifest write_corpus(const std::vector<GeneratedEnv>& envs,
                            std::uint64_t seed, const std::string& dir) {
  CorpusManifest manifest;
  manifest.seed = seed;
  std::ostringstream toml;
  toml << std::fixed << std::setprecision(6);
  toml << "seed = " << seed << "\n";
  toml << "count = " << envs.size() << "\n";
  for (const GeneratedEnv& env : envs) {
    CorpusEnvInfo info;
    info.name = env.name;
    info.map_file = env.name + ".env";
    info.rooms_file = env.name + ".rooms";
    info.target_area = env.target_area;
    info.free_area = env.free_area;
    atomic_write(dir + "/" + info.map_file, env.env_text);
    atomic_write(dir + "/" + info.rooms_file, env.rooms_text);
    toml << "\n[[env]]\n";
    toml << "name = \"" << env.name << "\"\n";
    toml << "map = \"" << info.map_file << "\"\n";
    toml << "rooms = \"" << info.rooms_file << "\"\n";
    toml << "target_area = " << env.target_area << "\n";
    toml << "free_area = " << env.free_area << "\n";
    manifest.envs.push_back(std::move(info));
  }
  atomic_write(dir + "/corpus.toml", toml.str());
  return manifest;
}

CorpusManifest load_corpus_manifest(const std::string& path) {
  const std::string text = read_file(path);
  CorpusManifest manifest;
  CorpusEnvInfo* current = nullptr;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[[env]]") {
      manifest.envs.emplace_back();
      current = &manifest.envs.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("corpus manifest: bad line: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (current == nullptr) {
      if (key == "seed") manifest.seed = std::stoull(value);
    } else if (key == "name") {
      current->name = value;
    } else if (key == "map") {
      current->map_file = value;
    } else if (key == "rooms") {
      current->rooms_file = value;
    } else if (key == "target_area") {
      current->target_area = std::stod(value);
    } else if (key == "free_area") {
      current->free_area = std::stod(value);
    }
  }
  return manifest;
}

}  // namespace explore
