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

// Command-line driver: trap statistics tables, wave simulation, tunnel
// demos, and offline analysis of frame dumps.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pwave/cli.hpp"
#include "pwave/config.hpp"
#include "pwave/errors.hpp"
#include "pwave/frame_io.hpp"
#include "pwave/trapstats.hpp"

namespace {

namespace fs = std::filesystem;

pwave::config::RunConfig load_config(const std::string& path,
                                     std::optional<std::uint64_t> seed,
                                     std::optional<std::string> out) {
  pwave::config::RunConfig cfg;
  if (!path.empty()) {
    cfg = pwave::config::parse_config(pwave::io::read_text_file(path));
  }
  if (seed) cfg.seed = *seed;
  if (out) cfg.out = *out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pattern-wave cortex simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  app.add_option("--config", config_path, "config file (key = value lines)");
  app.add_option("--seed", seed_override, "override the config seed");
  app.add_option("--out", out_override, "override the output directory");

  // trap-stats
  auto* trap = app.add_subcommand(
      "trap-stats", "Monte Carlo scan and analytic probability tables");
  std::optional<std::uint32_t> k_max;
  std::optional<std::uint64_t> trials;
  bool analytic_only = false;
  trap->add_option("--k-max", k_max, "maximum density k in the scan");
  trap->add_option("--trials", trials, "Monte Carlo trials per estimate");
  trap->add_flag("--analytic", analytic_only,
                 "write only the analytic table, skip the Monte Carlo scan");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "run the lattice wave simulation");
  std::optional<std::uint64_t> ticks;
  bool do_train = false;
  bool dump_frames = false;
  std::string save_state;
  std::string load_state;
  simulate->add_option("--ticks", ticks, "tick budget (default from config)");
  simulate->add_flag("--train", do_train,
                     "train to a stable wave, then write one replay emission");
  simulate->add_flag("--dump-frames", dump_frames,
                     "also write the canonical training emission frames");
  simulate->add_option("--save-state", save_state,
                       "write a state snapshot after the run");
  simulate->add_option("--load-state", load_state,
                       "start from a state snapshot instead of a fresh grid");

  // tunnel
  auto* tunnel = app.add_subcommand(
      "tunnel", "couple two zones with a wavefront tunnel and run them");
  std::string config_a;
  std::string config_b;
  std::string tunnel_spec_path;
  std::optional<std::uint64_t> tunnel_ticks;
  tunnel->add_option("--config-a", config_a, "zone A config")->required();
  tunnel->add_option("--config-b", config_b, "zone B config")->required();
  tunnel->add_option("--tunnel-spec", tunnel_spec_path,
                     "config file holding the tunnel_* keys")
      ->required();
  tunnel->add_option("--ticks", tunnel_ticks, "tick budget");

  // analyze
  auto* analyze =
      app.add_subcommand("analyze", "compute metrics from a frame dump");
  std::string frames_dir;
  pwave::cli::AnalyzeOptions analyze_options;
  std::optional<std::uint32_t> origin_x;
  std::optional<std::uint32_t> origin_y;
  analyze->add_option("--frames", frames_dir, "directory of frame_*.txt files")
      ->required();
  analyze->add_option("--gap", analyze_options.gap,
                      "silent ticks separating emissions");
  analyze->add_option("--band", analyze_options.band,
                      "self-excitation activity fraction");
  analyze->add_option("--sustain", analyze_options.sustain,
                      "consecutive ticks above the band");
  analyze->add_option("--origin-x", origin_x, "front-speed origin x");
  analyze->add_option("--origin-y", origin_y, "front-speed origin y");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? pwave::cli::kOk : pwave::cli::kConfigError;
  }

  try {
    if (*trap) {
      auto cfg = load_config(config_path, seed_override, out_override);
      if (k_max) cfg.k_max = *k_max;
      if (trials) {
        if (*trials < 1) {
          std::cerr << "error: --trials must be >= 1\n";
          return pwave::cli::kConfigError;
        }
        cfg.trials = *trials;
      }
      if (cfg.k_max > cfg.n_trap) {
        std::cerr << "error: --k-max must not exceed n_trap\n";
        return pwave::cli::kConfigError;
      }
      pwave::cli::cmd_trap_stats(cfg, analytic_only, cfg.out);
      const pwave::trapstats::TrapParams params =
          pwave::config::trap_params_of(cfg);
      std::cout << "suggested p_in = p_exact(k_limit=" << cfg.k_limit
                << ") = "
                << pwave::io::format_double(
                       pwave::trapstats::p_exact_k(params, cfg.k_limit))
                << "\n";
    } else if (*simulate) {
      auto cfg = load_config(config_path, seed_override, out_override);
      pwave::cli::SimulateOptions options;
      options.ticks = ticks.value_or(0);
      options.train = do_train;
      options.dump_frames = dump_frames;
      if (!save_state.empty()) options.save_state = save_state;
      if (!load_state.empty()) options.load_state = load_state;
      pwave::cli::cmd_simulate(cfg, options, cfg.out);
    } else if (*tunnel) {
      auto cfg_a = load_config(config_a, seed_override, out_override);
      auto cfg_b = load_config(config_b, std::nullopt, std::nullopt);
      auto spec = pwave::config::parse_config(
          pwave::io::read_text_file(tunnel_spec_path));
      pwave::cli::cmd_tunnel(cfg_a, cfg_b, spec, tunnel_ticks.value_or(0),
                             cfg_a.out);
    } else if (*analyze) {
      auto cfg = load_config(config_path, seed_override, out_override);
      analyze_options.origin_x = origin_x;
      analyze_options.origin_y = origin_y;
      pwave::cli::cmd_analyze(frames_dir, analyze_options, cfg.out);
    }
  } catch (const pwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return pwave::cli::kConfigError;
  } catch (const pwave::WaveDamped& e) {
    std::cerr << "wave damped: " << e.what() << "\n";
    return pwave::cli::kDamped;
  } catch (const pwave::NotConverged& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return pwave::cli::kNotConverged;
  } catch (const pwave::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pwave::cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return pwave::cli::kInternalError;
  }
  return pwave::cli::kOk;
}
