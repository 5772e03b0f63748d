#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "explore/strategy.hpp"

namespace explore {

/* When the strategy consults the room layout:
 *   Synchronous - recomputed from the current map before every decision.
 *   Stale       - a background worker recomputes continuously; decisions
 *                 use the latest finished result (empty until the first
 *                 one lands), so they can lag the map by a few rounds. */
enum class LayoutRefresh : std::uint8_t { Synchronous, Stale };
const char* layout_refresh_name(LayoutRefresh refresh);

struct RunConfig {
  StrategyMode mode = StrategyMode::Baseline;
  LayoutRefresh refresh = LayoutRefresh::Synchronous;
  StrategyConfig strategy;
  std::uint64_t seed = 0;
  double speed = 0.5;         // m/s; rotation is free
  double start_jitter = kPi;  // heading jitter, uniform in [-j, j)
  double stop_at_explored = 1.0;  // end once this fraction is reached
  int max_rounds = 100000;        // safety valve, never hit in practice
  std::vector<double> snapshot_fractions;  // ascending; see LayoutSnapshot
  bool keep_snapshot_maps = false;
};

struct TraceSample {
  double time = 0.0;           // seconds of simulated mission time
  double explored_area = 0.0;  // m^2 of reachable free space mapped
};

/* One movement decision; written before the robot travels. */
struct DecisionRecord {
  int round = 0;
  double time = 0.0;
  GridIndex robot;
  GridIndex chosen;
  int candidates = 0;
  double distance = 0.0;
  double gain_baseline = 0.0;
  double gain_layout = 0.0;
  double gain_used = 0.0;
  double utility = 0.0;
  bool open_frontier = false;
};

/* Layout freshly retrieved the first time the explored fraction crosses
 * each requested threshold (the map copy is kept on request). */
struct LayoutSnapshot {
  double fraction_target = 0.0;
  double explored_fraction = 0.0;
  double time = 0.0;
  Layout layout;
  OccupancyGrid map;
};

struct RunResult {
  std::vector<TraceSample> trace;  // sample 0 at t=0, then one per round
  std::vector<DecisionRecord> decisions;
  std::vector<LayoutSnapshot> snapshots;
  double total_time = 0.0;
  double explored_fraction = 0.0;
  double free_area = 0.0;
  bool early_stopped = false;
  int rounds = 0;
  std::uint64_t layout_retrievals = 0;
  double layout_wall_ms = 0.0;  // wall clock spent retrieving layouts
  OccupancyGrid final_map;
};

/* Simulates one exploration mission.  Mission time counts travel only
 * (path length / speed); sensing, rotation, and computation are free, so
 * equal seeds and configs reproduce byte-identical traces regardless of
 * machine load.  The Stale refresh mode is the exception: its decisions
 * depend on real compute timing and are not replay-stable. */
RunResult run_exploration(const GroundTruthWorld& world,
                          const RunConfig& config);

/* Time at which explored_area reaches area_target, linearly interpolated
 * between the surrounding samples; +infinity when the trace never gets
 * there. */
double first_crossing_time(const std::vector<TraceSample>& trace,
                           double area_target);

std::string trace_to_csv(const std::vector<TraceSample>& trace);
std::string decisions_to_csv(const std::vector<DecisionRecord>& decisions);

/* Long-format summary rows: one metric per line. */
struct SummaryRow {
  std::string env;
  std::uint64_t seed = 0;
  std::string mode;
  std::string metric;
  double value = 0.0;
};
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

/* Runs every item (order-preserving results) on `jobs` worker threads. */
struct BatchItem {
  const GroundTruthWorld* world = nullptr;
  RunConfig config;
  std::string env_name;
};
std::vector<RunResult> run_batch(const std::vector<BatchItem>& items,
                                 int jobs);

}  // namespace explore
