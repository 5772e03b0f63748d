#include "explore/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace explore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/* Lazy disc visibility around one origin.  A target cell is visible when
 * no Occupied cell of `obstacles` lies strictly between the endpoint
 * cells of the center-to-center segment.
 *
 * Targets sharing a primitive direction (dx,dy), gcd(|dx|,|dy|) == 1,
 * share their supercover prefixes: the walker decides each step by
 * comparing nx*|dy| with ny*|dx|, so scaling the endpoint from k*(dx,dy)
 * to K*(dx,dy) scales both sides alike and the walk to a nearer multiple
 * is a bit-exact prefix of the walk to a farther one.  One ordered walk
 * per direction -- taken only when a query first needs that direction,
 * and stopped at the first Occupied cell -- therefore answers every
 * multiple at once: the k-th multiple is visible iff the walk got that
 * far.  Queries outside the grid or the disc return false. */
class LazyVisibility {
 public:
  LazyVisibility(const Grid2<CellState>& obstacles, GridIndex origin,
                 int reach, long long rr)
      : obstacles_(obstacles), origin_(origin), reach_(reach), rr_(rr),
        side_(2 * reach + 1),
        seen_k_(static_cast<std::size_t>(side_) * side_, kUnevaluated) {}

  bool visible(int dc, int dr) {
    if (dc == 0 && dr == 0) return true;
    const int g = std::gcd(std::abs(dc), std::abs(dr));
    const int px = dc / g, py = dr / g;
    const std::size_t slot =
        static_cast<std::size_t>(py + reach_) * side_ + (px + reach_);
    if (seen_k_[slot] == kUnevaluated) walk_direction(px, py, slot);
    return g <= seen_k_[slot];
  }

 private:
  static constexpr std::int16_t kUnevaluated = -1;

  void walk_direction(int px, int py, std::size_t slot) {
    const long long step2 =
        static_cast<long long>(px) * px + static_cast<long long>(py) * py;
    int maxk = static_cast<int>(std::floor(
        std::sqrt(static_cast<double>(rr_) / static_cast<double>(step2))));
    while (static_cast<long long>(maxk) * maxk * step2 > rr_) --maxk;
    std::int16_t got = 0;
    if (maxk >= 1) {
      const GridIndex far{origin_.col + maxk * px, origin_.row + maxk * py};
      int k = 1;
      GridIndex next{origin_.col + px, origin_.row + py};
      for_each_segment_cell(origin_, far, [&](GridIndex c) {
        if (c == origin_) return true;
        if (!obstacles_.in_bounds(c)) return false;
        if (c == next) {
          /* The walk stops at the first Occupied cell, so reaching a
           * multiple means nothing blocked the way to it. */
          got = static_cast<std::int16_t>(k);
          ++k;
          next = {origin_.col + k * px, origin_.row + k * py};
        }
        if (obstacles_.at(c) == CellState::Occupied) {
          /* Everything farther along this direction is blocked too. */
          return false;
        }
        return true;
      });
    }
    seen_k_[slot] = got;
  }

  const Grid2<CellState>& obstacles_;
  GridIndex origin_;
  int reach_;
  long long rr_;
  int side_;
  std::vector<std::int16_t> seen_k_;
};

long long squared_cell_range(double range, double res) {
  return std::llround((range / res) * (range / res));
}

double unknown_visible_area(const OccupancyGrid& map, GridIndex origin,
                            double range) {
  const double res = map.resolution;
  const long long rr = squared_cell_range(range, res);
  const int reach = static_cast<int>(std::floor(std::sqrt(
      static_cast<double>(rr))));
  LazyVisibility vis(map.cells, origin, reach, rr);
  int count = 0;
  for (int dr = -reach; dr <= reach; ++dr) {
    const int row = origin.row + dr;
    if (row < 0 || row >= map.cells.height()) continue;
    for (int dc = -reach; dc <= reach; ++dc) {
      const int col = origin.col + dc;
      if (col < 0 || col >= map.cells.width()) continue;
      if (static_cast<long long>(dc) * dc + static_cast<long long>(dr) * dr >
          rr) {
        continue;
      }
      if (map.cells.at(col, row) != CellState::Unknown) continue;
      if (vis.visible(dc, dr)) ++count;
    }
  }
  return count * res * res;
}

}  // namespace

const char* strategy_mode_name(StrategyMode mode) {
  switch (mode) {
    case StrategyMode::Baseline: return "baseline";
    case StrategyMode::LayoutInformed: return "layout";
    default: return "layout_es";
  }
}

AugmentedGrid stamp_layout(const OccupancyGrid& map, const Layout& layout) {
  AugmentedGrid aug{map};
  const Arrangement& arr = layout.arrangement;
  const double res = map.resolution;
  auto room_of = [&](int face) {
    return face >= 0 ? arr.faces[face].room_id : -1;
  };
  for (const ArrangementPiece& piece : arr.pieces) {
    if (arr.is_border_line(piece.line_id)) continue;
    if (room_of(piece.face_neg) == room_of(piece.face_pos)) continue;
    const Point a{piece.a.x / res, piece.a.y / res};
    const Point b{piece.b.x / res, piece.b.y / res};
    walk_supercover_segment(a, b, [&](int col, int row, double) {
      if (aug.grid.cells.in_bounds(col, row)) {
        aug.grid.cells.at(col, row) = CellState::Occupied;
      }
      return true;
    });
  }
  return aug;
}

double info_gain_baseline(const OccupancyGrid& map, GridIndex origin,
                          double range) {
  return unknown_visible_area(map, origin, range);
}

double info_gain_layout(const OccupancyGrid& map, const AugmentedGrid& aug,
                        const Layout& layout, GridIndex origin, double range) {
  const Arrangement& arr = layout.arrangement;
  auto roomed = [&](GridIndex cell) {
    if (arr.faces.empty() || !arr.face_of_cell.in_bounds(cell)) return false;
    const std::int32_t face = arr.face_of_cell.at(cell);
    return face >= 0 && arr.faces[face].room_id >= 0;
  };

  const double res = map.resolution;
  const long long rr = squared_cell_range(range, res);
  const int reach =
      static_cast<int>(std::floor(std::sqrt(static_cast<double>(rr))));
  LazyVisibility raw_vis(map.cells, origin, reach, rr);
  LazyVisibility stamped_vis(aug.grid.cells, origin, reach, rr);
  int count = 0;
  for (int dr = -reach; dr <= reach; ++dr) {
    const int row = origin.row + dr;
    if (row < 0 || row >= map.cells.height()) continue;
    for (int dc = -reach; dc <= reach; ++dc) {
      const int col = origin.col + dc;
      if (col < 0 || col >= map.cells.width()) continue;
      if (static_cast<long long>(dc) * dc + static_cast<long long>(dr) * dr >
          rr) {
        continue;
      }
      const GridIndex cell{col, row};
      if (map.cells.at(cell) != CellState::Unknown) continue;
      if (roomed(cell)) {
        /* Inside a claimed room the layout predicts what is there: its
         * stamped boundaries bound the estimate. */
        if (aug.grid.cells.at(cell) == CellState::Occupied) continue;
        if (stamped_vis.visible(dc, dr)) ++count;
      } else {
        /* No room claims this cell, so the layout cannot estimate it;
         * keep the raw-map count like the plain gain does. */
        if (raw_vis.visible(dc, dr)) ++count;
      }
    }
  }
  return count * res * res;
}

void GainCache::invalidate_near(Point center_m, double radius_m,
                                double resolution) {
  const double r2 = (radius_m / resolution) * (radius_m / resolution);
  const double cc = center_m.x / resolution - 0.5;
  const double cr = center_m.y / resolution - 0.5;
  for (auto it = gains_.begin(); it != gains_.end();) {
    const double dc = it->first.col - cc;
    const double dr = it->first.row - cr;
    if (dc * dc + dr * dr <= r2) {
      it = gains_.erase(it);
    } else {
      ++it;
    }
  }
}

bool GainCache::lookup(GridIndex cell, double& gain) const {
  const auto it = gains_.find(cell);
  if (it == gains_.end()) return false;
  gain = it->second;
  return true;
}

void GainCache::store(GridIndex cell, double gain) { gains_[cell] = gain; }

bool candidate_in_open_frontier_room(const Layout& layout, GridIndex cell) {
  const Arrangement& arr = layout.arrangement;
  if (arr.faces.empty() || !arr.face_of_cell.in_bounds(cell)) return false;
  const std::int32_t face = arr.face_of_cell.at(cell);
  if (face < 0) return false;
  const int room = arr.faces[face].room_id;
  return room >= 0 && layout.rooms[room].kind == RoomKind::OpenFrontier;
}

CandidateEvaluation evaluate_candidates(
    const OccupancyGrid& map, const AugmentedGrid& aug, const Layout& layout,
    const std::vector<Frontier>& frontiers, GridIndex from,
    const StrategyConfig& config, StrategyMode mode,
    GainCache* baseline_cache) {
  const double range = config.sensor.range;
  CandidateEvaluation round;
  std::vector<GridIndex> targets;
  targets.reserve(frontiers.size());
  for (const Frontier& frontier : frontiers)
    targets.push_back(frontier.candidate);
  round.field =
      compute_distance_field(map, from, config.robot_radius, &targets);
  std::vector<CandidateEval>& evals = round.evals;
  evals.reserve(frontiers.size());

  auto baseline_gain = [&](GridIndex cell) {
    double gain = 0.0;
    if (baseline_cache != nullptr && baseline_cache->lookup(cell, gain))
      return gain;
    gain = info_gain_baseline(map, cell, range);
    if (baseline_cache != nullptr) baseline_cache->store(cell, gain);
    return gain;
  };

  for (const Frontier& frontier : frontiers) {
    CandidateEval ev;
    ev.cell = frontier.candidate;
    if (round.field.reached(ev.cell)) {
      ev.reachable = true;
      ev.distance = round.field.cost_m(ev.cell);
    }
    if (mode == StrategyMode::Baseline) {
      ev.gain_baseline = baseline_gain(ev.cell);
      ev.gain_layout = ev.gain_baseline;
      ev.gain_used = ev.gain_baseline;
    } else {
      ev.open_frontier = candidate_in_open_frontier_room(layout, ev.cell);
      ev.gain_baseline = baseline_gain(ev.cell);
      ev.gain_layout = info_gain_layout(map, aug, layout, ev.cell, range);
      ev.gain_used = ev.open_frontier ? ev.gain_baseline : ev.gain_layout;
    }
    evals.push_back(ev);
  }

  double dmax = 0.0, imax = 0.0;
  for (const CandidateEval& ev : evals) {
    if (!ev.reachable) continue;
    dmax = std::max(dmax, ev.distance);
    imax = std::max(imax, ev.gain_used);
  }
  for (CandidateEval& ev : evals) {
    if (!ev.reachable) {
      ev.utility = -kInf;
      continue;
    }
    /* dmax == 0 means the lone reachable candidate is the robot's own
     * cell: distance utility is maximal by convention. */
    const double dterm = dmax > 0.0 ? (dmax - ev.distance) / dmax : 1.0;
    const double iterm = imax > 0.0 ? ev.gain_used / imax : 0.0;
    ev.utility = config.alpha * dterm + (1.0 - config.alpha) * iterm;
  }
  return round;
}

int select_next(const std::vector<CandidateEval>& evals) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(evals.size()); ++i) {
    const CandidateEval& ev = evals[i];
    if (!ev.reachable) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const CandidateEval& cur = evals[best];
    if (ev.utility != cur.utility) {
      if (ev.utility > cur.utility) best = i;
    } else if (ev.distance != cur.distance) {
      if (ev.distance < cur.distance) best = i;
    } else if (raster_less(ev.cell, cur.cell)) {
      best = i;
    }
  }
  return best;
}

bool early_stop(const std::vector<CandidateEval>& evals,
                const StrategyConfig& config) {
  for (const CandidateEval& ev : evals) {
    if (ev.open_frontier) return false;
    if (ev.gain_layout >= config.es_threshold) return false;
  }
  return true;
}

}  // namespace explore
