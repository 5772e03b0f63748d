#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "explore/runner.hpp"
#include "fixtures.hpp"

using namespace explore;

namespace {

GroundTruthWorld small_room_world() {
  std::string text = "resolution 0.1\nstart 20 15 0\n";
  for (int r = 0; r < 30; ++r) {
    std::string row(40, '.');
    if (r == 0 || r == 29) {
      row.assign(40, '#');
    } else {
      row.front() = '#';
      row.back() = '#';
    }
    text += row + "\n";
  }
  return parse_world(text);
}

RunConfig office_config(StrategyMode mode, std::uint64_t seed) {
  RunConfig config;
  config.mode = mode;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("a single small room is finished within three decisions") {
  const GroundTruthWorld world = small_room_world();
  const RunResult result =
      run_exploration(world, office_config(StrategyMode::Baseline, 0));
  CHECK(result.explored_fraction == doctest::Approx(1.0));
  CHECK(result.decisions.size() <= 3);
  CHECK(!result.early_stopped);
}

TEST_CASE("time advances only while the robot drives") {
  const GroundTruthWorld world = fixture::office_small_world();
  const RunResult result =
      run_exploration(world, office_config(StrategyMode::Baseline, 3));
  REQUIRE(result.decisions.size() >= 3);
  CHECK(result.decisions.front().time == 0.0);
  for (std::size_t k = 1; k < result.decisions.size(); ++k) {
    const DecisionRecord& prev = result.decisions[k - 1];
    CHECK(result.decisions[k].time ==
          doctest::Approx(prev.time + prev.distance / 0.5).epsilon(1e-12));
  }
  const DecisionRecord& last = result.decisions.back();
  CHECK(result.total_time ==
        doctest::Approx(last.time + last.distance / 0.5).epsilon(1e-12));
}

TEST_CASE("traces start at zero and never move backwards") {
  const GroundTruthWorld world = fixture::office_small_world();
  const RunResult result =
      run_exploration(world, office_config(StrategyMode::LayoutInformed, 1));
  REQUIRE(result.trace.size() >= 2);
  CHECK(result.trace.front().time == 0.0);
  CHECK(result.trace.front().explored_area > 0.0);
  for (std::size_t k = 1; k < result.trace.size(); ++k) {
    CHECK(result.trace[k].time >= result.trace[k - 1].time);
    CHECK(result.trace[k].explored_area >= result.trace[k - 1].explored_area);
  }
  CHECK(result.trace.back().explored_area <= result.free_area + 1e-6);
}

TEST_CASE("identical seeds reproduce runs byte for byte") {
  const GroundTruthWorld world = fixture::office_small_world();
  const RunConfig config = office_config(StrategyMode::LayoutInformed, 7);
  const RunResult a = run_exploration(world, config);
  const RunResult b = run_exploration(world, config);
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
  CHECK(decisions_to_csv(a.decisions) == decisions_to_csv(b.decisions));
  CHECK(a.total_time == b.total_time);
  CHECK(a.rounds == b.rounds);

  const RunResult c =
      run_exploration(world, office_config(StrategyMode::LayoutInformed, 8));
  CHECK(trace_to_csv(a.trace) != trace_to_csv(c.trace));
}

TEST_CASE("the baseline strategy never touches the layout machinery") {
  const GroundTruthWorld world = fixture::office_small_world();
  const std::uint64_t before = layout_retrieval_count();
  const RunResult result =
      run_exploration(world, office_config(StrategyMode::Baseline, 2));
  CHECK(result.layout_retrievals == 0);
  CHECK(layout_retrieval_count() == before);
  CHECK(result.explored_fraction == doctest::Approx(1.0).epsilon(1e-6));
  for (const DecisionRecord& d : result.decisions)
    CHECK(d.gain_layout == d.gain_baseline);
}

TEST_CASE("layout-informed complete runs finish the map too") {
  const GroundTruthWorld world = fixture::office_small_world();
  const RunResult result =
      run_exploration(world, office_config(StrategyMode::LayoutInformed, 4));
  CHECK(result.explored_fraction == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.layout_retrievals >= 1);
  CHECK(!result.early_stopped);
}

TEST_CASE("early stopping ends no later than the full sweep") {
  const GroundTruthWorld world = fixture::office_small_world();
  const RunResult full =
      run_exploration(world, office_config(StrategyMode::LayoutInformed, 11));
  const RunResult es =
      run_exploration(world, office_config(StrategyMode::LayoutInformedES, 11));
  CHECK(es.total_time <= full.total_time + 1e-9);
  if (es.early_stopped) {
    CHECK(es.explored_fraction >= 0.9);
  }
}

TEST_CASE("exploration can stop at a requested fraction") {
  const GroundTruthWorld world = fixture::office_small_world();
  RunConfig config = office_config(StrategyMode::Baseline, 5);
  config.stop_at_explored = 0.5;
  const RunResult result = run_exploration(world, config);
  CHECK(result.explored_fraction >= 0.5);
  CHECK(result.explored_fraction < 1.0);
}

TEST_CASE("snapshots fire in order once their fraction is reached") {
  const GroundTruthWorld world = fixture::office_small_world();
  RunConfig config = office_config(StrategyMode::LayoutInformed, 6);
  config.snapshot_fractions = {0.4, 0.8};
  config.keep_snapshot_maps = true;
  const RunResult result = run_exploration(world, config);
  REQUIRE(result.snapshots.size() == 2);
  CHECK(result.snapshots[0].fraction_target == 0.4);
  CHECK(result.snapshots[1].fraction_target == 0.8);
  for (const LayoutSnapshot& snap : result.snapshots) {
    CHECK(snap.explored_fraction >= snap.fraction_target - 1e-9);
    CHECK(snap.map.cells.width() == world.grid.width());
    CHECK(!snap.layout.rooms.empty());
  }
  CHECK(result.snapshots[0].time <= result.snapshots[1].time);
}

TEST_CASE("area targets interpolate linearly between trace samples") {
  const std::vector<TraceSample> trace = {{0.0, 0.0}, {100.0, 1.0}};
  CHECK(first_crossing_time(trace, 0.5) == doctest::Approx(50.0));
  CHECK(first_crossing_time(trace, 1.0) == doctest::Approx(100.0));
  CHECK(first_crossing_time(trace, 0.0) == 0.0);
  CHECK(std::isinf(first_crossing_time(trace, 1.5)));
  CHECK(std::isinf(first_crossing_time({}, 0.5)));

  const std::vector<TraceSample> steps = {{0.0, 0.0}, {10.0, 4.0},
                                          {30.0, 4.0}, {40.0, 8.0}};
  CHECK(first_crossing_time(steps, 2.0) == doctest::Approx(5.0));
  CHECK(first_crossing_time(steps, 4.0) == doctest::Approx(10.0));
  CHECK(first_crossing_time(steps, 6.0) == doctest::Approx(35.0));
}

TEST_CASE("csv serialization is stable and complete") {
  std::vector<TraceSample> trace = {{0.0, 0.0}, {12.5, 3.25}};
  const std::string csv = trace_to_csv(trace);
  CHECK(csv.find("Time,ExploredArea") == 0);
  CHECK(csv.find("12.500000") != std::string::npos);
  CHECK(csv.find("3.250000") != std::string::npos);

  DecisionRecord rec;
  rec.round = 1;
  rec.time = 2.0;
  rec.robot = {3, 4};
  rec.chosen = {5, 6};
  rec.candidates = 2;
  rec.distance = 1.5;
  rec.gain_baseline = 9.0;
  rec.gain_layout = 7.0;
  rec.gain_used = 7.0;
  rec.utility = 0.75;
  rec.open_frontier = false;
  const std::string dec = decisions_to_csv({rec});
  CHECK(dec.find("Round,Time,RobotCol,RobotRow,ChosenCol,ChosenRow,"
                 "Candidates,Distance,GainBaseline,GainLayout,GainUsed,"
                 "Utility,OpenFrontier") == 0);
  CHECK(dec.find("0.750000") != std::string::npos);
}

TEST_CASE("batch execution matches standalone runs") {
  const GroundTruthWorld world = fixture::office_small_world();
  const RunConfig c1 = office_config(StrategyMode::Baseline, 21);
  const RunConfig c2 = office_config(StrategyMode::LayoutInformed, 22);
  std::vector<BatchItem> items;
  items.push_back({&world, c1, "office"});
  items.push_back({&world, c2, "office"});
  const std::vector<RunResult> batch = run_batch(items, 2);
  REQUIRE(batch.size() == 2);
  const RunResult solo1 = run_exploration(world, c1);
  const RunResult solo2 = run_exploration(world, c2);
  CHECK(trace_to_csv(batch[0].trace) == trace_to_csv(solo1.trace));
  CHECK(trace_to_csv(batch[1].trace) == trace_to_csv(solo2.trace));
  CHECK(decisions_to_csv(batch[1].decisions) ==
        decisions_to_csv(solo2.decisions));
}
