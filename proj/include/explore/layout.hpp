#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "explore/mapping.hpp"

namespace explore {

struct LayoutParams {
  int angle_bins = 4;               // candidate wall angles over [0, pi)
  double angle_tol = 5.0 * kPi / 180.0;
  double offset_tol = 0.3;          // meters
  int wall_band_cells = 2;          // "near a wall" distance for evidence
  double min_wall_length = 0.5;     // meters
  int min_wall_support = 5;         // cells
  int wall_gap_cells = 3;           // run splits at larger gaps (doorways)
  double full_face_ratio = 0.95;    // known fraction for FullyObserved
  double unknown_face_ratio = 0.05; // known fraction below which Unknown
  double wall_edge_ratio = 0.5;     // occupied fraction that keeps faces apart
  double min_room_free_ratio = 0.5; // known faces below this are wall mass
  double weight_consistency = 1.0 / 3.0;
  double weight_simplicity = 1.0 / 3.0;
  double weight_wall = 1.0 / 3.0;
  int beam_width = 32;
  int max_room_faces = 12;
};

/* A straight run of Occupied cells: an observed piece of wall. */
struct WallSegment {
  Point a, b;          // endpoints on the fitted line, meters
  double angle = 0.0;  // [0, pi)
  double offset = 0.0; // normal-form offset of the fitted line
  int support = 0;     // occupied cells in the run
  double length() const { return distance(a, b); }
  Point midpoint() const { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }
};

/* Cluster of near-collinear wall segments; the infinite line they share.
 * Walls interrupted by doorways collapse onto one representative line. */
struct RepresentativeLine {
  double angle = 0.0;
  double offset = 0.0;
  int support = 0;
  std::vector<int> members;  // indices into the segment list
  Line line() const { return {angle, offset}; }
};

enum class FaceStatus : std::uint8_t {
  FullyObserved,
  PartiallyObserved,
  UnknownFace
};

/* Convex cell of the planar arrangement of representative lines clipped to
 * the map rectangle.  edge_lines tags each polygon edge with the line that
 * produced it; ids >= line count denote the map border. */
struct Face {
  std::vector<Point> polygon;    // positive signed area
  std::vector<int> edge_lines;   // per edge (vertex i -> i+1)
  FaceStatus status = FaceStatus::UnknownFace;
  double area = 0.0;
  double known_ratio = 0.0;
  int cells_total = 0;
  int cells_free = 0;
  int cells_occupied = 0;
  bool touches_border = false;
  bool solid = false;   // observed but wall-dominated; never joins a room
  int room_id = -1;
};

/* Atomic boundary interval of the arrangement: a maximal stretch of a line
 * (or map border) bordered by the same face on each side.  face_neg /
 * face_pos are the faces on the negative / positive side of the line, -1
 * beyond the map border. */
struct ArrangementPiece {
  int line_id = -1;
  double u0 = 0.0, u1 = 0.0;  // interval along the line direction
  Point a, b;
  int face_neg = -1;
  int face_pos = -1;
  double length = 0.0;
  double wall_fraction = 0.0;  // fraction of the piece near Occupied cells
};

/* Faces, their adjacency pieces, and the cell -> face raster. */
struct Arrangement {
  std::vector<Face> faces;
  std::vector<ArrangementPiece> pieces;
  std::vector<std::vector<int>> face_pieces;  // per face, piece indices
  Grid2<std::int32_t> face_of_cell;
  std::vector<Line> cut_lines;  // merged lines, aligned with edge tags
  Point bounds_max;             // map rectangle is (0,0)..bounds_max
  double resolution = 0.1;

  int border_line_count() const { return 4; }
  bool is_border_line(int line_id) const {
    return line_id >= static_cast<int>(cut_lines.size());
  }
  Line line_geometry(int line_id) const;
};

enum class RoomKind : std::uint8_t {
  FullyObserved,
  Predicted,    // partially observed, completed by the shape search
  OpenFrontier  // unbounded toward the map border; no reliable prediction
};

struct Room {
  std::vector<Point> polygon;  // stitched outer boundary
  RoomKind kind = RoomKind::FullyObserved;
  std::vector<int> faces;
  std::vector<std::pair<Point, Point>> open_edges;  // unbounded border edges
};

struct Layout {
  std::vector<Room> rooms;
  std::vector<RepresentativeLine> lines;
  Arrangement arrangement;
  bool empty() const { return rooms.empty() && lines.empty(); }
};

/* ---- pipeline stages (exposed for tests; retrieve_layout composes) ---- */

std::vector<WallSegment> extract_wall_segments(const OccupancyGrid& map,
                                               const LayoutParams& params);

/* Transitive closure of pairwise (angle_tol, offset_tol) proximity;
 * parameters are support-weighted means over members. */
std::vector<RepresentativeLine> representative_lines(
    const std::vector<WallSegment>& segments, const LayoutParams& params);

Arrangement build_faces(const std::vector<RepresentativeLine>& lines,
                        const OccupancyGrid& map, const LayoutParams& params);

/* Merges adjacent FullyObserved faces whose shared edge is mostly free of
 * wall evidence; each cluster becomes a FullyObserved room and its faces
 * get the room id. */
std::vector<Room> cluster_fully_observed_rooms(Arrangement& arr,
                                               const LayoutParams& params);

/* Shape plausibility of a candidate face set (the seed's room completion):
 *   consistency = min(A / Am, Am / A), Am = median observed room area
 *                 (1 when no room has been observed yet)
 *   simplicity  = 4 / vertex count of the union polygon, capped at 1
 *   wall        = fraction of the union perimeter near Occupied cells or
 *                 on a line already bounding >= 2 observed rooms
 * weighted by LayoutParams.  Returns -infinity when the union boundary is
 * not a single closed loop.  Throws std::invalid_argument when the set is
 * not edge-connected. */
struct PhiContext {
  const Arrangement* arrangement = nullptr;
  double median_room_area = 0.0;  // <= 0 means no observed rooms
  std::vector<std::uint8_t> line_multiroom;
  LayoutParams params;
};
PhiContext make_phi_context(const Arrangement& arr,
                            const std::vector<Room>& observed_rooms,
                            const LayoutParams& params);
double phi_score(const std::vector<int>& candidate_faces,
                 const PhiContext& ctx);

/* Best-first beam completion of the room containing `seed_face`: grows
 * connected face sets over faces not yet assigned to rooms, keeping the
 * beam_width best sets per size, and returns the best-scoring set overall
 * (ties broken toward the lexicographically smaller sorted id list). */
std::vector<int> search_room_completion(const Arrangement& arr, int seed_face,
                                        const PhiContext& ctx);

/* Appends one room per frontier whose containing face is unassigned:
 * an OpenFrontier room when that face touches the map border on a side
 * with no bounding line, otherwise the beam-search completion. */
void predict_partial_rooms(Arrangement& arr, std::vector<Room>& rooms,
                           const std::vector<Frontier>& frontiers,
                           const LayoutParams& params);

/* Full pipeline: walls -> lines -> faces -> observed rooms -> predictions.
 * Deterministic for equal inputs. */
Layout retrieve_layout(const OccupancyGrid& map,
                       const std::vector<Frontier>& frontiers,
                       const LayoutParams& params = {});

/* Text export: one `room <kind> x0 y0 x1 y1 ...` line per room, meters. */
std::string rooms_to_text(const Layout& layout);

/* Test hooks: retrieval counter (strategy-isolation checks) and an
 * every-retrieval invariant verifier (throws std::logic_error). */
std::uint64_t layout_retrieval_count();
void set_layout_invariant_checks(bool enabled);
void check_layout_invariants(const Layout& layout, const OccupancyGrid& map);

}  // namespace explore
