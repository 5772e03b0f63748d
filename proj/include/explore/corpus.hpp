#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "explore/geometry.hpp"

namespace explore {

/* Procedural single-floor office buildings: stacked double-loaded
 * corridor bands (rooms / corridor / rooms) hooked to one vertical
 * connector corridor, drawn on a 0.1 m grid with 1-cell walls.  A few
 * environments get stepped outlines (shorter upper bands) for irregular
 * corners.  Generation is deterministic per seed and scales band length
 * in a second pass to land within 10% of the target free area. */
struct CorpusParams {
  int count = 10;
  int irregular = 3;          // how many of the last envs get notches
  std::uint64_t seed = 20240817;
  double resolution = 0.1;
  double min_target_area = 1000.0;  // m^2 of reachable free space
  double max_target_area = 3500.0;
};

struct NamedPolygon {
  std::string kind;
  std::vector<Point> polygon;
};

struct GeneratedEnv {
  std::string name;
  std::string env_text;    // map raster file content
  std::string rooms_text;  // ground-truth room polygons
  double target_area = 0.0;
  double free_area = 0.0;  // measured reachable free area
};

std::vector<GeneratedEnv> generate_corpus(const CorpusParams& params);

/* Serialization of `room <kind> x0 y0 x1 y1 ...` lines (meters). */
std::string rooms_to_text(const std::vector<NamedPolygon>& rooms);
std::vector<NamedPolygon> parse_rooms_text(const std::string& text);

/* Writes env/rooms files plus a corpus.toml manifest into `dir`. */
struct CorpusEnvInfo {
  std::string name;
  std::string map_file;    // relative to the manifest
  std::string rooms_file;
  double target_area = 0.0;
  double free_area = 0.0;
};
struct CorpusManifest {
  std::uint64_t seed = 0;
  std::vector<CorpusEnvInfo> envs;
};
CorpusManifest write_corpus(const std::vector<GeneratedEnv>& envs,
                            std::uint64_t seed, const std::string& dir);

/* Reads back a manifest written by write_corpus (a small TOML subset:
 * `key = value` lines and [[env]] blocks). */
CorpusManifest load_corpus_manifest(const std::string& path);

}  // namespace explore
