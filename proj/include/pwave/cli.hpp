// Copyright 2026 The pwave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PWAVE_CLI_HPP
#define PWAVE_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pwave/analysis.hpp"
#include "pwave/config.hpp"
#include "pwave/cortex.hpp"
#include "pwave/errors.hpp"
#include "pwave/frame_io.hpp"
#include "pwave/snapshot.hpp"
#include "pwave/trapstats.hpp"
#include "pwave/wavesim.hpp"

// Experiment driver shared by the command-line tool and the test suites.
// All outputs are byte-deterministic given (config, seeds, flags): LF
// newlines, '.' decimal separator, no locale dependence.

namespace pwave::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDamped = 3,
  kNotConverged = 4,
  kInternalError = 5,
};

// Long-format metrics CSV: metric,run_a,run_b,tick,value
class MetricsCsv {
 public:
  void add(std::string_view metric, std::string_view run_a,
           std::string_view run_b, std::optional<std::uint64_t> tick,
           double value) {
    rows_ += std::string(metric) + ',' + std::string(run_a) + ',' +
             std::string(run_b) + ',' +
             (tick ? std::to_string(*tick) : std::string()) + ',' +
             io::format_double(value) + '\n';
  }

  // Appends to an existing file, writing the header only when new.
  void append_to(const fs::path& path) const {
    std::string content;
    if (fs::exists(path)) {
      content = io::read_text_file(path);
    }
    if (content.empty()) {
      content = "metric,run_a,run_b,tick,value\n";
    }
    content += rows_;
    io::write_text_file(path, content);
  }

 private:
  std::string rows_;
};

inline void cmd_trap_stats(const config::RunConfig& cfg, bool analytic_only,
                           const fs::path& out_dir) {
  const trapstats::TrapParams params = config::trap_params_of(cfg);
  fs::create_directories(out_dir);

  if (!analytic_only) {
    const auto rows = trapstats::sharp_transition_scan(
        params, cfg.k_max, cfg.trials, cfg.seed, config::map_options_of(cfg),
        cfg.comparison);
    std::string csv = "k,estimate,stderr,trials\n";
    for (const auto& row : rows) {
      csv += std::to_string(row.k) + ',' + io::format_double(row.estimate) +
             ',' + io::format_double(row.std_error) + ',' +
             std::to_string(row.trials) + '\n';
    }
    io::write_text_file(out_dir / "scan.csv", csv);
  }

  std::string csv = "k,p_exact,p_tail,p_error\n";
  const std::uint32_t k_top = std::min(cfg.k_max, params.n_sig);
  for (std::uint32_t k = 0; k <= k_top; ++k) {
    csv += std::to_string(k) + ',' +
           io::format_double(trapstats::p_exact_k(params, k)) + ',' +
           io::format_double(trapstats::p_tail(params, k)) + ',' +
           io::format_double(trapstats::p_error(params, k)) + '\n';
  }
  io::write_text_file(out_dir / "analytic.csv", csv);
}

struct SimulateOptions {
  std::uint64_t ticks = 0;  // 0: use config
  bool train = false;
  bool dump_frames = false;  // additionally dump training-phase frames
  std::optional<fs::path> save_state;
  std::optional<fs::path> load_state;
};

inline void write_frames(const fs::path& dir,
                         const cortex::GridGeometry& geometry,
                         const std::vector<cortex::Frame>& frames) {
  fs::create_directories(dir);
  for (const cortex::Frame& frame : frames) {
    io::write_frame_file(dir, geometry, frame);
  }
}

inline void cmd_simulate(const config::RunConfig& cfg,
                         const SimulateOptions& options,
                         const fs::path& out_dir) {
  const std::uint64_t ticks = options.ticks ? options.ticks : cfg.ticks;
  const bool dump_frames = options.dump_frames || cfg.dump_frames;

  // A snapshot carries its own geometry and parameters; the config supplies
  // them only for a fresh cortex.
  wavesim::CortexState state =
      options.load_state
          ? snapshot::load_state(io::read_text_file(*options.load_state))
          : wavesim::CortexState(config::geometry_of(cfg),
                                 config::sim_params_of(cfg));
  const cortex::GridGeometry geometry = state.geometry();
  const std::vector<std::uint32_t> pattern =
      config::resolve_pattern(cfg.pattern, geometry);

  fs::create_directories(out_dir);
  MetricsCsv metrics;

  if (options.train) {
    const wavesim::TrainResult result =
        wavesim::train(state, pattern, cfg.max_emissions);
    // One replay emission: the state sits on the first frame after the
    // canonical period, so the next period is already aligned with it.
    std::vector<cortex::Frame> replay;
    replay.push_back(state.frame());
    if (result.canonical.size() > 1) {
      auto more = state.run(result.canonical.size() - 1);
      replay.insert(replay.end(), more.begin(), more.end());
    }
    write_frames(out_dir / "frames", geometry, replay);
    if (dump_frames) {
      write_frames(out_dir / "train_frames", geometry, result.canonical);
    }

    metrics.add("emissions", "train", "", std::nullopt,
                static_cast<double>(result.emissions));
    analysis::EmissionRecord canonical;
    canonical.start_tick = result.canonical.front().tick;
    canonical.end_tick = result.canonical.back().tick;
    for (const auto& f : result.canonical) {
      canonical.sets.push_back(analysis::endogenous_set(f));
    }
    analysis::EmissionRecord replayed;
    replayed.start_tick = replay.front().tick;
    replayed.end_tick = replay.back().tick;
    for (const auto& f : replay) {
      replayed.sets.push_back(analysis::endogenous_set(f));
    }
    const analysis::ReproReport report =
        analysis::reproducibility(canonical, replayed);
    metrics.add("reproducibility_identical", "canonical", "replay",
                std::nullopt, report.identical ? 1.0 : 0.0);
    for (std::size_t i = 0; i < report.hamming.size(); ++i) {
      metrics.add("hamming", "canonical", "replay", i,
                  static_cast<double>(report.hamming[i]));
    }
    for (const auto& f : replay) {
      metrics.add("activity_fraction", "replay", "", f.tick,
                  analysis::activity_fraction(f));
    }
    if (!pattern.empty()) {
      try {
        metrics.add("front_speed", "replay", "", std::nullopt,
                    analysis::front_speed(geometry, replay, pattern.front()));
      } catch (const InvalidArgument&) {
        // Too little activity for a slope; omit the row.
      }
    }
  } else {
    state.set_evoked(pattern);
    const std::vector<cortex::Frame> frames = state.run(ticks);
    write_frames(out_dir / "frames", geometry, frames);
    for (const auto& f : frames) {
      metrics.add("activity_fraction", "run", "", f.tick,
                  analysis::activity_fraction(f));
    }
  }

  metrics.append_to(out_dir / "metrics.csv");
  if (options.save_state) {
    io::write_text_file(*options.save_state, snapshot::save_state(state));
  }
}

// Runs one coupled simulation and returns both zones' frames.
inline std::pair<std::vector<cortex::Frame>, std::vector<cortex::Frame>>
run_coupled_once(const config::RunConfig& cfg_a, const config::RunConfig& cfg_b,
                 const config::RunConfig& tunnel_spec, std::uint64_t ticks,
                 const config::PatternSpec& pattern_a) {
  const cortex::GridGeometry geom_a = config::geometry_of(cfg_a);
  const cortex::GridGeometry geom_b = config::geometry_of(cfg_b);
  wavesim::CortexState zone_a(geom_a, config::sim_params_of(cfg_a));
  wavesim::CortexState zone_b(geom_b, config::sim_params_of(cfg_b));
  zone_a.set_evoked(config::resolve_pattern(pattern_a, geom_a));
  zone_b.set_evoked(config::resolve_pattern(cfg_b.pattern, geom_b));
  wavesim::CoupledCortex coupled = wavesim::attach_tunnel(
      std::move(zone_a), std::move(zone_b),
      config::tunnel_of(tunnel_spec, geom_a, geom_b));
  return coupled.run(ticks);
}

inline void cmd_tunnel(const config::RunConfig& cfg_a,
                       const config::RunConfig& cfg_b,
                       const config::RunConfig& tunnel_spec,
                       std::uint64_t ticks_override, const fs::path& out_dir) {
  const std::uint64_t ticks = ticks_override ? ticks_override : cfg_a.ticks;
  const cortex::GridGeometry geom_a = config::geometry_of(cfg_a);
  const cortex::GridGeometry geom_b = config::geometry_of(cfg_b);

  const auto [frames_a, frames_b] =
      run_coupled_once(cfg_a, cfg_b, tunnel_spec, ticks, cfg_a.pattern);
  write_frames(out_dir / "zone_a", geom_a, frames_a);
  write_frames(out_dir / "zone_b", geom_b, frames_b);

  MetricsCsv metrics;
  // Determinism report: an identical rerun must reproduce zone B exactly.
  const auto rerun =
      run_coupled_once(cfg_a, cfg_b, tunnel_spec, ticks, cfg_a.pattern);
  metrics.add("b_repeat_identical", "b", "b_repeat", std::nullopt,
              rerun.second == frames_b ? 1.0 : 0.0);

  if (!std::holds_alternative<std::monostate>(cfg_a.pattern_alt)) {
    const auto alt =
        run_coupled_once(cfg_a, cfg_b, tunnel_spec, ticks, cfg_a.pattern_alt);
    const std::uint32_t dst_center =
        geom_b.index_of(tunnel_spec.tunnel_dst_cx, tunnel_spec.tunnel_dst_cy);
    const double jaccard = analysis::uniqueness(
        geom_b, frames_b, alt.second, dst_center, 2.0 * geom_b.r_obs);
    metrics.add("b_cross_jaccard_max", "b", "b_alt", std::nullopt, jaccard);
  }
  for (const auto& f : frames_b) {
    metrics.add("activity_fraction", "b", "", f.tick,
                analysis::activity_fraction(f));
  }
  metrics.append_to(out_dir / "tunnel_metrics.csv");
}

struct AnalyzeOptions {
  std::uint32_t gap = 1;            // silent ticks separating emissions
  double band = 0.2;                // self-excitation activity fraction
  std::uint32_t sustain = 5;        // consecutive ticks above the band
  std::optional<std::uint32_t> origin_x;
  std::optional<std::uint32_t> origin_y;
};

inline void cmd_analyze(const fs::path& frames_dir,
                        const AnalyzeOptions& options,
                        const fs::path& out_dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(frames_dir)) {
    if (entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw InvalidArgument("no frame files in " + frames_dir.string());
  }

  std::vector<cortex::Frame> frames;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  for (const auto& file : files) {
    io::ParsedFrame parsed = io::parse_frame(io::read_text_file(file));
    if (frames.empty()) {
      width = parsed.width;
      height = parsed.height;
    } else if (parsed.width != width || parsed.height != height) {
      throw GeometryMismatch("frame files disagree on the grid size");
    }
    frames.push_back(std::move(parsed.frame));
  }
  std::sort(frames.begin(), frames.end(),
            [](const auto& a, const auto& b) { return a.tick < b.tick; });

  cortex::GridGeometry geometry;
  geometry.width = width;
  geometry.height = height;
  geometry.r_obs = 1.0;  // distances only; the radius plays no role here

  fs::create_directories(out_dir);
  MetricsCsv metrics;
  const auto emissions = analysis::segment_emissions(frames, options.gap);
  metrics.add("emissions", "run", "", std::nullopt,
              static_cast<double>(emissions.size()));
  for (std::size_t i = 0; i + 1 < emissions.size(); ++i) {
    const auto report =
        analysis::reproducibility(emissions[i], emissions[i + 1]);
    metrics.add("reproducibility_identical",
                "emission_" + std::to_string(i),
                "emission_" + std::to_string(i + 1), std::nullopt,
                report.identical ? 1.0 : 0.0);
  }
  for (const auto& f : frames) {
    metrics.add("activity_fraction", "run", "", f.tick,
                analysis::activity_fraction(f));
  }
  if (options.origin_x && options.origin_y) {
    if (*options.origin_x >= width || *options.origin_y >= height) {
      throw InvalidArgument("origin outside grid");
    }
    try {
      metrics.add("front_speed", "run", "", std::nullopt,
                  analysis::front_speed(
                      geometry, frames,
                      geometry.index_of(*options.origin_x, *options.origin_y)));
    } catch (const InvalidArgument&) {
      // Not enough active ticks; omit the row.
    }
  }
  if (const auto tick =
          analysis::detect_self_excitation(frames, options.band,
                                           options.sustain)) {
    metrics.add("self_excitation_tick", "run", "", std::nullopt,
                static_cast<double>(*tick));
  }
  metrics.append_to(out_dir / "metrics.csv");
}

}  // namespace pwave::cli

#endif  // PWAVE_CLI_HPP
