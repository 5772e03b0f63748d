#include "explore/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <iomanip>
#include <limits>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "explore/rng.hpp"

namespace explore {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/* Background layout recomputation for LayoutRefresh::Stale: whenever the
 * worker is idle it accepts the newest map snapshot; the main loop always
 * reads the latest finished layout (none until the first completes). */
class StaleLayoutWorker {
 public:
  explicit StaleLayoutWorker(const LayoutParams& params) : params_(params) {
    thread_ = std::thread([this] { loop(); });
  }
  ~StaleLayoutWorker() {
    {
      std::lock_guard lk(mu_);
      quit_ = true;
    }
    cv_.notify_all();
    thread_.join();
  }

  void offer(const OccupancyGrid& map, const std::vector<Frontier>& frontiers) {
    std::lock_guard lk(mu_);
    if (busy_ || pending_) return;
    input_map_ = map;
    input_frontiers_ = frontiers;
    pending_ = true;
    cv_.notify_all();
  }

  std::shared_ptr<const Layout> latest() {
    std::lock_guard lk(mu_);
    return published_;
  }

  std::uint64_t retrievals() {
    std::lock_guard lk(mu_);
    return count_;
  }
  double wall_ms() {
    std::lock_guard lk(mu_);
    return wall_ms_;
  }

 private:
  void loop() {
    std::unique_lock lk(mu_);
    for (;;) {
      cv_.wait(lk, [&] { return pending_ || quit_; });
      if (quit_) return;
      OccupancyGrid map = std::move(input_map_);
      std::vector<Frontier> frontiers = std::move(input_frontiers_);
      pending_ = false;
      busy_ = true;
      lk.unlock();

      const auto t0 = Clock::now();
      Layout layout = retrieve_layout(map, frontiers, params_);
      const double ms = ms_since(t0);

      lk.lock();
      published_ = std::make_shared<const Layout>(std::move(layout));
      wall_ms_ += ms;
      ++count_;
      busy_ = false;
    }
  }

  LayoutParams params_;
  std::thread thread_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool pending_ = false;
  bool busy_ = false;
  bool quit_ = false;
  OccupancyGrid input_map_;
  std::vector<Frontier> input_frontiers_;
  std::shared_ptr<const Layout> published_;
  std::uint64_t count_ = 0;
  double wall_ms_ = 0.0;
};

/* Middle-out walk of a frontier chain: index order mid, mid+1, mid-1, ...
 * so a replacement candidate stays as central as possible. */
int middle_out_index(int n, int k) {
  const int mid = (n - 1) / 2;
  const int step = (k + 1) / 2;
  return k % 2 == 1 ? mid + step : mid - step;
}

/* Nearest Unknown 8-neighbor of `cell` (ties: raster order).  Every
 * frontier cell has one by definition. */
bool nearest_unknown_neighbor(const OccupancyGrid& map, GridIndex cell,
                              GridIndex& out) {
  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const GridIndex nb{cell.col + dc, cell.row + dr};
      if (!map.cells.in_bounds(nb)) continue;
      if (map.cells.at(nb) != CellState::Unknown) continue;
      const double d = std::sqrt(double(dc * dc + dr * dr));
      if (!found || d < best || (d == best && raster_less(nb, out))) {
        found = true;
        best = d;
        out = nb;
      }
    }
  }
  return found;
}

}  // namespace

const char* layout_refresh_name(LayoutRefresh refresh) {
  return refresh == LayoutRefresh::Synchronous ? "sync" : "stale";
}

RunResult run_exploration(const GroundTruthWorld& world,
                          const RunConfig& config) {
  RunResult result;
  result.free_area = world.free_area;
  const double res = world.resolution;
  const double cell_area = res * res;

  long long total_reachable = 0;
  for (std::uint8_t r : world.reachable.cells()) total_reachable += r != 0;

  OccupancyGrid map = make_unknown_like(world);
  Rng rng(config.seed);
  Pose pose = world.start;
  pose.theta = normalize_angle(
      pose.theta + rng.uniform(-config.start_jitter, config.start_jitter));
  GridIndex robot = world.start_cell();

  long long explored_cells = 0;
  GainCache gain_cache;
  std::vector<GridIndex> newly;
  auto integrate_at = [&](const Pose& p) {
    newly.clear();
    const Scan scan = simulate_scan(world, p, config.strategy.sensor);
    const IntegrationDelta delta = integrate_scan(map, scan, &newly);
    for (GridIndex c : newly) {
      if (world.reachable.at(c)) ++explored_cells;
    }
    /* The scan only touched cells within sensor range, so cached gains
     * farther than two ranges from the pose are still exact. */
    gain_cache.invalidate_near(
        p.position(), 2.0 * config.strategy.sensor.range + 4.0 * map.resolution,
        map.resolution);
    return delta;
  };
  auto fraction_now = [&] {
    return total_reachable > 0
               ? static_cast<double>(explored_cells) / total_reachable
               : 1.0;
  };

  double time = 0.0;
  std::size_t snap_idx = 0;
  auto take_snapshots = [&] {
    while (snap_idx < config.snapshot_fractions.size() &&
           fraction_now() + 1e-12 >= config.snapshot_fractions[snap_idx]) {
      LayoutSnapshot snap;
      snap.fraction_target = config.snapshot_fractions[snap_idx];
      snap.explored_fraction = fraction_now();
      snap.time = time;
      const auto t0 = Clock::now();
      snap.layout =
          retrieve_layout(map, detect_frontiers(map), config.strategy.layout);
      result.layout_wall_ms += ms_since(t0);
      ++result.layout_retrievals;
      if (config.keep_snapshot_maps) snap.map = map;
      result.snapshots.push_back(std::move(snap));
      ++snap_idx;
    }
  };

  integrate_at(pose);
  result.trace.push_back({0.0, explored_cells * cell_area});
  take_snapshots();

  const bool uses_layout = config.mode != StrategyMode::Baseline;
  std::unique_ptr<StaleLayoutWorker> worker;
  if (uses_layout && config.refresh == LayoutRefresh::Stale) {
    worker = std::make_unique<StaleLayoutWorker>(config.strategy.layout);
  }
  auto layout = std::make_shared<const Layout>();
  std::set<GridIndex> blacklist;

  for (int round = 1; round <= config.max_rounds; ++round) {
    std::vector<Frontier> frontiers = detect_frontiers(map);

    /* A candidate that yielded nothing twice is blacklisted for good; its
     * frontier retargets the most central non-blacklisted cell and is
     * dropped once every cell has failed. */
    if (!blacklist.empty()) {
      std::vector<Frontier> kept;
      kept.reserve(frontiers.size());
      for (Frontier& f : frontiers) {
        if (!blacklist.count(f.candidate)) {
          kept.push_back(std::move(f));
          continue;
        }
        const int n = static_cast<int>(f.cells.size());
        for (int k = 0; k < n; ++k) {
          const GridIndex c = f.cells[middle_out_index(n, k)];
          if (!blacklist.count(c)) {
            f.candidate = c;
            kept.push_back(std::move(f));
            break;
          }
        }
      }
      frontiers = std::move(kept);
    }
    if (frontiers.empty()) break;

    if (uses_layout) {
      if (config.refresh == LayoutRefresh::Synchronous) {
        const auto t0 = Clock::now();
        layout = std::make_shared<const Layout>(
            retrieve_layout(map, frontiers, config.strategy.layout));
        result.layout_wall_ms += ms_since(t0);
        ++result.layout_retrievals;
      } else {
        worker->offer(map, frontiers);
        if (auto latest = worker->latest()) layout = std::move(latest);
      }
    }

    AugmentedGrid aug;
    if (uses_layout) aug = stamp_layout(map, *layout);

    const CandidateEvaluation eval_round =
        evaluate_candidates(map, aug, *layout, frontiers, robot,
                            config.strategy, config.mode, &gain_cache);
    const std::vector<CandidateEval>& evals = eval_round.evals;

    if (config.mode == StrategyMode::LayoutInformedES &&
        early_stop(evals, config.strategy)) {
      result.early_stopped = true;
      break;
    }

    double best_utility = -std::numeric_limits<double>::infinity();
    for (const CandidateEval& ev : evals) {
      if (ev.reachable && ev.utility > best_utility) {
        best_utility = ev.utility;
      }
    }
    if (best_utility == -std::numeric_limits<double>::infinity()) break;
    std::vector<int> ties;
    for (int i = 0; i < static_cast<int>(evals.size()); ++i) {
      if (evals[i].reachable && evals[i].utility == best_utility) {
        ties.push_back(i);
      }
    }
    const int pick =
        ties.size() == 1
            ? ties.front()
            : ties[static_cast<std::size_t>(rng.below(ties.size()))];
    const CandidateEval& chosen = evals[pick];

    DecisionRecord rec;
    rec.round = round;
    rec.time = time;
    rec.robot = robot;
    rec.chosen = chosen.cell;
    rec.candidates = static_cast<int>(evals.size());
    rec.distance = chosen.distance;
    rec.gain_baseline = chosen.gain_baseline;
    rec.gain_layout = chosen.gain_layout;
    rec.gain_used = chosen.gain_used;
    rec.utility = chosen.utility;
    rec.open_frontier = chosen.open_frontier;
    result.decisions.push_back(rec);

    /* Travel, then scan along the final path segment. */
    time += chosen.distance / config.speed;
    const Point arrive = map.cell_center(chosen.cell);
    double heading = pose.theta;
    const auto path = extract_path(eval_round.field, chosen.cell);
    if (path && path->cells.size() >= 2) {
      const std::size_t np = path->cells.size();
      const Point a = map.cell_center(path->cells[np - 2]);
      const Point b = map.cell_center(path->cells[np - 1]);
      heading = std::atan2(b.y - a.y, b.x - a.x);
    }
    pose = {arrive.x, arrive.y, heading};
    robot = chosen.cell;

    IntegrationDelta delta = integrate_at(pose);
    if (delta.new_free + delta.new_occupied == 0) {
      /* Free re-orientation toward the nearest unknown neighbor; if even
       * that yields nothing the cell is done for. */
      GridIndex target;
      if (nearest_unknown_neighbor(map, robot, target)) {
        const Point t = map.cell_center(target);
        pose.theta = std::atan2(t.y - pose.y, t.x - pose.x);
        delta = integrate_at(pose);
      }
      if (delta.new_free + delta.new_occupied == 0) blacklist.insert(robot);
    }

    result.rounds = round;
    result.trace.push_back({time, explored_cells * cell_area});
    take_snapshots();
    if (config.stop_at_explored < 1.0 &&
        fraction_now() + 1e-12 >= config.stop_at_explored) {
      break;
    }
  }

  if (worker) {
    result.layout_retrievals += worker->retrievals();
    result.layout_wall_ms += worker->wall_ms();
  }
  result.total_time = time;
  result.explored_fraction = fraction_now();
  result.final_map = std::move(map);
  return result;
}

double first_crossing_time(const std::vector<TraceSample>& trace,
                           double area_target) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].explored_area + 1e-9 < area_target) continue;
    if (i == 0) return trace[0].time;
    const TraceSample& lo = trace[i - 1];
    const TraceSample& hi = trace[i];
    const double span = hi.explored_area - lo.explored_area;
    if (span <= 0.0) return hi.time;
    const double f = (area_target - lo.explored_area) / span;
    return lo.time + f * (hi.time - lo.time);
  }
  return std::numeric_limits<double>::infinity();
}

std::string trace_to_csv(const std::vector<TraceSample>& trace) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "Time,ExploredArea\n";
  for (const TraceSample& s : trace) {
    os << s.time << ',' << s.explored_area << '\n';
  }
  return os.str();
}

std::string decisions_to_csv(const std::vector<DecisionRecord>& decisions) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "Round,Time,RobotCol,RobotRow,ChosenCol,ChosenRow,Candidates,"
        "Distance,GainBaseline,GainLayout,GainUsed,Utility,OpenFrontier\n";
  for (const DecisionRecord& d : decisions) {
    os << d.round << ',' << d.time << ',' << d.robot.col << ',' << d.robot.row
       << ',' << d.chosen.col << ',' << d.chosen.row << ',' << d.candidates
       << ',' << d.distance << ',' << d.gain_baseline << ',' << d.gain_layout
       << ',' << d.gain_used << ',' << d.utility << ','
       << (d.open_frontier ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "Env,Seed,Mode,Metric,Value\n";
  for (const SummaryRow& r : rows) {
    os << r.env << ',' << r.seed << ',' << r.mode << ',' << r.metric << ','
       << r.value << '\n';
  }
  return os.str();
}

std::vector<RunResult> run_batch(const std::vector<BatchItem>& items,
                                 int jobs) {
  std::vector<RunResult> results(items.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      results[i] = run_exploration(*items[i].world, items[i].config);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      results[i] = run_exploration(*items[i].world, items[i].config);
    }
  };
  std::vector<std::thread> threads;
  const int n = std::min<int>(jobs, static_cast<int>(items.size()));
  threads.reserve(n);
  for (int i = 0; i < n; ++i) threads.emplace_back(work);
  for (std::thread& t : threads) t.join();
  return results;
}

}  // namespace explore
