#pragma once

#include <map>

#include "explore/layout.hpp"
#include "explore/planner.hpp"

namespace explore {

enum class StrategyMode : std::uint8_t {
  Baseline,             // footprint gain on the raw map
  LayoutInformed,       // gain on the layout-augmented map
  LayoutInformedES      // layout gain plus early stopping
};

const char* strategy_mode_name(StrategyMode mode);

struct StrategyConfig {
  double alpha = 0.5;         // weight of distance vs information in utility
  double es_threshold = 1.0;  // m^2 below which a candidate is exhausted
  double robot_radius = 0.0;  // meters, inflation for path planning
  SensorModel sensor;
  LayoutParams layout;
};

/* Occupancy map with every room boundary piece rasterized as Occupied.
 * Unbounded map-border edges are never stamped, and pieces interior to a
 * single room (merged faces, doorways between them) are left open.  The
 * stamped set only ever adds Occupied cells, so visibility through it is
 * a subset of visibility through the raw map. */
struct AugmentedGrid {
  OccupancyGrid grid;
};
AugmentedGrid stamp_layout(const OccupancyGrid& map, const Layout& layout);

/* Unknown area (m^2) the sensor could newly observe from the center of
 * `origin`: counts Unknown cells whose center lies within `range` of the
 * origin center (dc^2+dr^2 <= llround((range/res)^2) in cell units) and
 * whose center-to-center segment passes no Occupied cell strictly between
 * the two endpoint cells.  The origin cell itself never blocks, so a
 * candidate standing on a stamped boundary still sees past it. */
double info_gain_baseline(const OccupancyGrid& map, GridIndex origin,
                          double range);

/* Layout-informed variant of the same count.  An Unknown cell inside a
 * face that some room claims is counted under the augmented map: its
 * Occupied cells (a superset of the raw map's) block the segment, and
 * cells stamped Occupied are not counted at all.  An Unknown cell in a
 * face no room claims lies in territory the layout says nothing about,
 * so it keeps its raw-map count, exactly as in info_gain_baseline --
 * discounting it would credit the layout with knowledge it does not
 * have.  Never exceeds info_gain_baseline, and equals it when the
 * layout is empty. */
double info_gain_layout(const OccupancyGrid& map, const AugmentedGrid& aug,
                        const Layout& layout, GridIndex origin, double range);

/* True when the face containing `cell` belongs to an OpenFrontier room. */
bool candidate_in_open_frontier_room(const Layout& layout, GridIndex cell);

struct CandidateEval {
  GridIndex cell;
  bool reachable = false;
  double distance = 0.0;       // shortest-path length, meters
  double gain_baseline = 0.0;  // raw-map gain (Baseline mode, or fallback)
  double gain_layout = 0.0;    // augmented-map gain
  bool open_frontier = false;
  double gain_used = 0.0;      // the gain entering the utility
  double utility = 0.0;
};

/* One decision round's evaluation: per-candidate scores plus the distance
 * field they were read from (extract_path gives the chosen path). */
struct CandidateEvaluation {
  std::vector<CandidateEval> evals;  // order matches `frontiers`
  DistanceField field;
};

/* Remembers raw-map information gains between decision rounds.  A
 * candidate's gain only depends on the map within sensor range of it, so
 * it stays valid until a scan lands within twice the range; the runner
 * invalidates around every scan pose.  Using the cache never changes a
 * value, it only skips recomputation. */
class GainCache {
 public:
  void invalidate_near(Point center_m, double radius_m, double resolution);
  bool lookup(GridIndex cell, double& gain) const;
  void store(GridIndex cell, double gain);
  std::size_t size() const { return gains_.size(); }

 private:
  std::map<GridIndex, double, decltype(&raster_less)> gains_{&raster_less};
};

/* Evaluates every frontier candidate from the robot cell `from`: reads
 * path distances off one distance field, computes the mode's information
 * gain (candidates in OpenFrontier rooms fall back to the raw-map gain),
 * and combines them as  u = alpha * (Dmax-D)/Dmax + (1-alpha) * I/Imax
 * normalized over the reachable candidates of this round (Imax == 0 makes
 * the gain term 0; Dmax == 0 makes the distance term 1, the lone
 * candidate being the robot's own cell).  `baseline_cache`, when given,
 * reuses raw-map gains the caller knows are still current. */
CandidateEvaluation evaluate_candidates(
    const OccupancyGrid& map, const AugmentedGrid& aug, const Layout& layout,
    const std::vector<Frontier>& frontiers, GridIndex from,
    const StrategyConfig& config, StrategyMode mode,
    GainCache* baseline_cache = nullptr);

/* Index of the best reachable candidate: highest utility, then shortest
 * path, then raster order.  -1 when none is reachable. */
int select_next(const std::vector<CandidateEval>& evals);

/* True when exploration should end: no candidate sits in an OpenFrontier
 * room and every candidate's layout gain is below the threshold.
 * Unreachable candidates take part like any other (they may become
 * reachable later, so their predicted gain still counts). */
bool early_stop(const std::vector<CandidateEval>& evals,
                const StrategyConfig& config);

}  // namespace explore
