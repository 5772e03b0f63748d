#include <cstdint>
#include <deque>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "explore/corpus.hpp"
#include "explore/io.hpp"
#include "explore/layout.hpp"
#include "explore/mapping.hpp"
#include "explore/render.hpp"
#include "explore/runner.hpp"
#include "explore/world.hpp"

namespace {

using namespace explore;

StrategyMode parse_mode(const std::string& name) {
  if (name == "baseline") return StrategyMode::Baseline;
  if (name == "layout") return StrategyMode::LayoutInformed;
  if (name == "layout_es") return StrategyMode::LayoutInformedES;
  throw CLI::ValidationError("mode", "unknown mode '" + name +
                                         "' (baseline|layout|layout_es)");
}

LayoutRefresh parse_refresh(const std::string& name) {
  if (name == "sync") return LayoutRefresh::Synchronous;
  if (name == "stale") return LayoutRefresh::Stale;
  throw CLI::ValidationError("refresh",
                             "unknown refresh '" + name + "' (sync|stale)");
}

std::string snapshot_name(double fraction) {
  std::ostringstream os;
  os << "snap_" << static_cast<int>(std::llround(fraction * 100)) << ".svg";
  return os.str();
}

void write_run_outputs(const std::string& dir, const GroundTruthWorld& world,
                       const RunConfig& config, const RunResult& result) {
  std::filesystem::create_directories(dir);
  atomic_write(dir + "/trace.csv", trace_to_csv(result.trace));
  atomic_write(dir + "/decisions.csv", decisions_to_csv(result.decisions));
  atomic_write(dir + "/map.pgm", to_pgm(result.final_map));

  const auto frontiers = detect_frontiers(result.final_map);
  const Layout layout =
      retrieve_layout(result.final_map, frontiers, config.strategy.layout);
  atomic_write(dir + "/rooms.txt", rooms_to_text(layout));
  atomic_write(dir + "/final.svg", render_svg(result.final_map, layout));
  for (const LayoutSnapshot& snap : result.snapshots) {
    atomic_write(dir + "/" + snapshot_name(snap.fraction_target),
                 render_svg(snap.map, snap.layout));
  }
  (void)world;
}

int cmd_gen_corpus(const CorpusParams& params, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto envs = generate_corpus(params);
  write_corpus(envs, params.seed, out_dir);
  std::cout << "wrote " << envs.size() << " environments to " << out_dir
            << "\n";
  for (const GeneratedEnv& env : envs) {
    std::cout << "  " << env.name << "  target " << env.target_area
              << " m^2  free " << env.free_area << " m^2\n";
  }
  return 0;
}

int cmd_run(const std::string& map_path, const RunConfig& config,
            const std::string& out_dir) {
  const GroundTruthWorld world = load_world(map_path);
  const RunResult result = run_exploration(world, config);
  std::cout << "map: " << map_path << "\n";
  std::cout << "mode: " << strategy_mode_name(config.mode)
            << "  refresh: " << layout_refresh_name(config.refresh)
            << "  seed: " << config.seed << "\n";
  std::cout << "time: " << result.total_time
            << " s  explored: " << result.explored_fraction
            << "  rounds: " << result.rounds
            << "  early_stop: " << (result.early_stopped ? "yes" : "no")
            << "\n";
  std::cout << "layout retrievals: " << result.layout_retrievals << "  (wall "
            << result.layout_wall_ms << " ms)\n";
  if (!out_dir.empty()) {
    write_run_outputs(out_dir, world, config, result);
    std::cout << "outputs written to " << out_dir << "\n";
  }
  return 0;
}

int cmd_batch(const std::string& corpus_path,
              const std::vector<std::string>& mode_names, int seeds,
              const RunConfig& base, int jobs, const std::string& out_dir,
              bool traces) {
  const CorpusManifest manifest = load_corpus_manifest(corpus_path);
  const std::string corpus_dir =
      std::filesystem::path(corpus_path).parent_path().string();
  std::deque<GroundTruthWorld> worlds;
  std::vector<BatchItem> items;
  for (const CorpusEnvInfo& env : manifest.envs) {
    const std::string map_path =
        corpus_dir.empty() ? env.map_file : corpus_dir + "/" + env.map_file;
    worlds.push_back(load_world(map_path));
    for (const std::string& mode_name : mode_names) {
      for (int seed = 0; seed < seeds; ++seed) {
        BatchItem item;
        item.world = &worlds.back();
        item.config = base;
        item.config.mode = parse_mode(mode_name);
        item.config.seed = static_cast<std::uint64_t>(seed);
        item.env_name = env.name;
        items.push_back(std::move(item));
      }
    }
  }
  std::cerr << "running " << items.size() << " missions on " << jobs
            << " thread(s)\n";
  const auto results = run_batch(items, jobs);

  std::filesystem::create_directories(out_dir);
  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const BatchItem& item = items[i];
    const RunResult& r = results[i];
    const std::string mode = strategy_mode_name(item.config.mode);
    const auto add = [&](const std::string& metric, double value) {
      rows.push_back({item.env_name, item.config.seed, mode, metric, value});
    };
    add("total_time", r.total_time);
    add("explored_fraction", r.explored_fraction);
    add("rounds", static_cast<double>(r.rounds));
    add("early_stopped", r.early_stopped ? 1.0 : 0.0);
    add("layout_retrievals", static_cast<double>(r.layout_retrievals));
    add("layout_wall_ms", r.layout_wall_ms);
    if (traces) {
      std::ostringstream stem;
      stem << item.env_name << '_' << mode << "_seed" << item.config.seed;
      atomic_write(out_dir + "/" + stem.str() + "_trace.csv",
                   trace_to_csv(r.trace));
      atomic_write(out_dir + "/" + stem.str() + "_decisions.csv",
                   decisions_to_csv(r.decisions));
    }
  }
  atomic_write(out_dir + "/summary.csv", summary_to_csv(rows));
  std::cout << "summary written to " << out_dir << "/summary.csv\n";
  return 0;
}

int cmd_layout(const std::string& pgm_path, double resolution,
               const std::string& svg_path) {
  const OccupancyGrid map = load_pgm(pgm_path, resolution);
  const auto frontiers = detect_frontiers(map);
  const Layout layout = retrieve_layout(map, frontiers);
  std::cout << rooms_to_text(layout);
  if (!svg_path.empty()) {
    atomic_write(svg_path, render_svg(map, layout));
    std::cerr << "svg written to " << svg_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"indoor exploration simulator with room-layout prediction"};
  app.require_subcommand(1);

  /* gen-corpus */
  auto* gen = app.add_subcommand("gen-corpus",
                                 "generate a benchmark environment corpus");
  CorpusParams corpus_params;
  std::string gen_out = "corpus";
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--count", corpus_params.count, "number of environments");
  gen->add_option("--irregular", corpus_params.irregular,
                  "how many of them get irregular footprints");
  gen->add_option("--seed", corpus_params.seed, "corpus seed");
  gen->add_option("--resolution", corpus_params.resolution,
                  "grid resolution in meters");
  gen->add_option("--min-area", corpus_params.min_target_area,
                  "smallest target free area, m^2");
  gen->add_option("--max-area", corpus_params.max_target_area,
                  "largest target free area, m^2");

  /* shared run/batch options */
  std::string mode_name = "baseline";
  std::string refresh_name = "sync";
  RunConfig config;
  std::vector<double> snapshots;

  /* run */
  auto* run = app.add_subcommand("run", "run a single exploration mission");
  std::string run_map;
  std::string run_out;
  run->add_option("--map", run_map, "environment file")->required();
  run->add_option("--mode", mode_name, "baseline|layout|layout_es");
  run->add_option("--refresh", refresh_name, "sync|stale");
  run->add_option("--seed", config.seed, "mission seed");
  run->add_option("--alpha", config.strategy.alpha,
                  "distance weight in the utility");
  run->add_option("--es-threshold", config.strategy.es_threshold,
                  "early-stop gain threshold, m^2");
  run->add_option("--robot-radius", config.strategy.robot_radius,
                  "planning inflation radius, m");
  run->add_option("--speed", config.speed, "travel speed, m/s");
  run->add_option("--stop-at", config.stop_at_explored,
                  "stop once this explored fraction is reached");
  run->add_option("--snapshots", snapshots,
                  "explored fractions at which to snapshot the layout");
  run->add_option("--out", run_out, "directory for trace/decision/svg output");

  /* batch */
  auto* batch = app.add_subcommand("batch",
                                   "run a corpus x seeds x modes benchmark");
  std::string corpus_path;
  std::string batch_modes = "baseline,layout,layout_es";
  std::string batch_out = "results";
  int batch_seeds = 10;
  int jobs = 1;
  bool batch_traces = false;
  batch->add_option("--corpus", corpus_path, "corpus.toml path")->required();
  batch->add_option("--modes", batch_modes, "comma-separated mode list");
  batch->add_option("--seeds", batch_seeds, "seeds 0..N-1 per env and mode");
  batch->add_option("--refresh", refresh_name, "sync|stale");
  batch->add_option("--alpha", config.strategy.alpha,
                    "distance weight in the utility");
  batch->add_option("--es-threshold", config.strategy.es_threshold,
                    "early-stop gain threshold, m^2");
  batch->add_option("--jobs", jobs, "worker threads");
  batch->add_option("--out", batch_out, "output directory");
  batch->add_flag("--traces", batch_traces, "write per-run trace CSVs");

  /* layout */
  auto* lay = app.add_subcommand(
      "layout", "retrieve the room layout from a partial map (PGM)");
  std::string lay_map;
  std::string lay_svg;
  double lay_res = 0.1;
  lay->add_option("--map", lay_map, "partial map, PGM (P2)")->required();
  lay->add_option("--resolution", lay_res, "meters per cell");
  lay->add_option("--svg", lay_svg, "also render to this SVG file");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen_corpus(corpus_params, gen_out);

    config.mode = parse_mode(mode_name);
    config.refresh = parse_refresh(refresh_name);
    if (run->parsed()) {
      std::sort(snapshots.begin(), snapshots.end());
      config.snapshot_fractions = snapshots;
      config.keep_snapshot_maps = !run_out.empty();
      return cmd_run(run_map, config, run_out);
    }
    if (batch->parsed()) {
      std::vector<std::string> modes;
      std::stringstream ss(batch_modes);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) modes.push_back(tok);
      }
      return cmd_batch(corpus_path, modes, batch_seeds, config, jobs,
                       batch_out, batch_traces);
    }
    if (lay->parsed()) return cmd_layout(lay_map, lay_res, lay_svg);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
