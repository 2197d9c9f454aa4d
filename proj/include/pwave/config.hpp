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

#ifndef PWAVE_CONFIG_HPP
#define PWAVE_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pwave/cortex.hpp"
#include "pwave/errors.hpp"
#include "pwave/frame_io.hpp"
#include "pwave/trapstats.hpp"
#include "pwave/wavesim.hpp"

// Experiment configuration: flat `key = value` lines, `#` comments,
// booleans true/false, lists space-separated. Every key is optional and
// defaulted; unknown and duplicate keys are rejected with the offending
// line number. parse_config(emit_config(c)) == c.

namespace pwave::config {

struct DiscPattern {
  std::uint32_t cx = 0;
  std::uint32_t cy = 0;
  double radius = 0.0;
  std::uint32_t count = 0;
  std::uint64_t seed = 0;

  bool operator==(const DiscPattern&) const = default;
};

using CoordList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
using PatternSpec = std::variant<std::monostate, DiscPattern, CoordList>;

struct RunConfig {
  // Grid.
  std::uint32_t width = 100;
  std::uint32_t height = 100;
  double r_obs = 8.0;
  cortex::Boundary boundary = cortex::Boundary::kWalls;

  // Simulation. a_min and k_act default to `auto`: derived from the
  // expected wavefront population n_front = round(p_in * mean field size)
  // as a_min = ceil(0.2 n_front) and k_act = a_min - 1. A cell ahead of the
  // front only ever sees part of it, so the activation threshold must sit
  // well below n_front or waves stall instead of propagating.
  double p_in = 0.08;
  std::optional<std::uint32_t> a_min;
  std::optional<std::uint32_t> k_act;
  std::uint32_t t_relax = 80;
  std::uint64_t seed = 1;
  std::uint32_t memory_capacity = 65536;

  // Trap statistics.
  std::uint32_t n_neuron = 650;
  std::uint32_t n_source = 25000;
  std::uint32_t n_trap = 15;
  std::uint32_t n_sig = 10;
  std::uint32_t n_dict = 10000;
  std::uint32_t k_limit = 5;
  trapstats::MapMode map_mode = trapstats::MapMode::kUniform;
  std::uint32_t min_gap = 10;
  trapstats::Comparison comparison = trapstats::Comparison::kAtLeast;
  std::uint64_t trials = 10000;
  std::uint32_t k_max = 10;

  // Run control.
  std::uint64_t ticks = 200;
  std::uint32_t max_emissions = 20;
  bool dump_frames = false;
  PatternSpec pattern;
  PatternSpec pattern_alt;
  std::string out = "out";

  // Tunnel.
  std::uint32_t tunnel_src_cx = 50;
  std::uint32_t tunnel_src_cy = 50;
  std::uint32_t tunnel_dst_cx = 50;
  std::uint32_t tunnel_dst_cy = 50;
  double tunnel_radius = 8.0;
  wavesim::PermutationMode tunnel_permutation = wavesim::PermutationMode::kIdentity;
  std::uint64_t tunnel_perm_seed = 1;
  double tunnel_dropout = 0.0;
  std::uint64_t tunnel_dropout_seed = 1;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) tokens.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline std::uint64_t parse_u64(std::string_view value, std::string_view key,
                               int line) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw TypeError(std::string(key) + " expects an unsigned integer, got '" +
                        std::string(value) + "'",
                    line);
  }
  return out;
}

inline std::uint32_t parse_u32(std::string_view value, std::string_view key,
                               int line) {
  const std::uint64_t wide = parse_u64(value, key, line);
  if (wide > 0xffffffffULL) {
    throw RangeError(std::string(key) + " does not fit in 32 bits", line);
  }
  return static_cast<std::uint32_t>(wide);
}

inline double parse_double(std::string_view value, std::string_view key,
                           int line) {
  double out = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw TypeError(std::string(key) + " expects a number, got '" +
                        std::string(value) + "'",
                    line);
  }
  return out;
}

inline bool parse_bool(std::string_view value, std::string_view key,
                       int line) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw TypeError(std::string(key) + " expects true or false, got '" +
                      std::string(value) + "'",
                  line);
}

inline PatternSpec parse_pattern(std::string_view value, std::string_view key,
                                 int line) {
  const std::vector<std::string> tokens = split_ws(value);
  if (tokens.empty()) {
    throw TypeError(std::string(key) + " must not be empty", line);
  }
  if (tokens[0] == "disc") {
    if (tokens.size() != 6) {
      throw TypeError(std::string(key) + " disc form is: disc cx cy r n seed",
                      line);
    }
    DiscPattern disc;
    disc.cx = parse_u32(tokens[1], key, line);
    disc.cy = parse_u32(tokens[2], key, line);
    disc.radius = parse_double(tokens[3], key, line);
    disc.count = parse_u32(tokens[4], key, line);
    disc.seed = parse_u64(tokens[5], key, line);
    return disc;
  }
  if (tokens.size() % 2 != 0) {
    throw TypeError(std::string(key) + " needs an even list of x y pairs",
                    line);
  }
  CoordList coords;
  for (std::size_t i = 0; i < tokens.size(); i += 2) {
    coords.emplace_back(parse_u32(tokens[i], key, line),
                        parse_u32(tokens[i + 1], key, line));
  }
  return coords;
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::map<std::string, int> seen;  // key -> line of first occurrence
  int line_no = 0;
  std::size_t pos = 0;

  auto check_range = [](bool ok, std::string_view message, int line) {
    if (!ok) throw RangeError(std::string(message), line);
  };

  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = detail::trim(raw);
    if (raw.empty()) continue;

    const std::size_t eq = raw.find('=');
    if (eq == std::string_view::npos) {
      throw TypeError("expected `key = value`, got '" + std::string(raw) + "'",
                      line_no);
    }
    const std::string key{detail::trim(raw.substr(0, eq))};
    const std::string_view value = detail::trim(raw.substr(eq + 1));
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      throw DuplicateKey("key '" + key + "' already set on line " +
                             std::to_string(it->second),
                         line_no);
    }

    if (key == "width") {
      config.width = detail::parse_u32(value, key, line_no);
      check_range(config.width >= 1, "width must be >= 1", line_no);
    } else if (key == "height") {
      config.height = detail::parse_u32(value, key, line_no);
      check_range(config.height >= 1, "height must be >= 1", line_no);
    } else if (key == "r_obs") {
      config.r_obs = detail::parse_double(value, key, line_no);
      check_range(config.r_obs > 0.0, "r_obs must be positive", line_no);
    } else if (key == "boundary") {
      if (value == "walls") {
        config.boundary = cortex::Boundary::kWalls;
      } else if (value == "torus") {
        config.boundary = cortex::Boundary::kTorus;
      } else {
        throw TypeError("boundary must be walls or torus", line_no);
      }
    } else if (key == "p_in") {
      config.p_in = detail::parse_double(value, key, line_no);
      check_range(config.p_in > 0.0 && config.p_in <= 1.0,
                  "p_in must be in (0, 1]", line_no);
    } else if (key == "a_min") {
      if (value == "auto") {
        config.a_min.reset();
      } else {
        config.a_min = detail::parse_u32(value, key, line_no);
        check_range(*config.a_min >= 1, "a_min must be >= 1", line_no);
      }
    } else if (key == "k_act") {
      if (value == "auto") {
        config.k_act.reset();
      } else {
        config.k_act = detail::parse_u32(value, key, line_no);
        check_range(*config.k_act >= 1, "k_act must be >= 1", line_no);
      }
    } else if (key == "t_relax") {
      config.t_relax = detail::parse_u32(value, key, line_no);
      check_range(config.t_relax >= 1 && config.t_relax <= 65535,
                  "t_relax must be in [1, 65535]", line_no);
    } else if (key == "seed") {
      config.seed = detail::parse_u64(value, key, line_no);
    } else if (key == "memory_capacity") {
      config.memory_capacity = detail::parse_u32(value, key, line_no);
      check_range(config.memory_capacity >= 1, "memory_capacity must be >= 1",
                  line_no);
    } else if (key == "n_neuron") {
      config.n_neuron = detail::parse_u32(value, key, line_no);
      check_range(config.n_neuron >= 1, "n_neuron must be >= 1", line_no);
    } else if (key == "n_source") {
      config.n_source = detail::parse_u32(value, key, line_no);
      check_range(config.n_source >= 1, "n_source must be >= 1", line_no);
    } else if (key == "n_trap") {
      config.n_trap = detail::parse_u32(value, key, line_no);
      check_range(config.n_trap >= 1, "n_trap must be >= 1", line_no);
    } else if (key == "n_sig") {
      config.n_sig = detail::parse_u32(value, key, line_no);
      check_range(config.n_sig >= 1, "n_sig must be >= 1", line_no);
    } else if (key == "n_dict") {
      config.n_dict = detail::parse_u32(value, key, line_no);
      check_range(config.n_dict >= 1, "n_dict must be >= 1", line_no);
    } else if (key == "k_limit") {
      config.k_limit = detail::parse_u32(value, key, line_no);
      check_range(config.k_limit >= 1, "k_limit must be >= 1", line_no);
    } else if (key == "map_mode") {
      if (value == "uniform") {
        config.map_mode = trapstats::MapMode::kUniform;
      } else if (value == "min_spacing") {
        config.map_mode = trapstats::MapMode::kMinSpacing;
      } else {
        throw TypeError("map_mode must be uniform or min_spacing", line_no);
      }
    } else if (key == "min_gap") {
      config.min_gap = detail::parse_u32(value, key, line_no);
      check_range(config.min_gap >= 1, "min_gap must be >= 1", line_no);
    } else if (key == "comparison") {
      if (value == "at_least") {
        config.comparison = trapstats::Comparison::kAtLeast;
      } else if (value == "exactly") {
        config.comparison = trapstats::Comparison::kExactly;
      } else {
        throw TypeError("comparison must be at_least or exactly", line_no);
      }
    } else if (key == "trials") {
      config.trials = detail::parse_u64(value, key, line_no);
      check_range(config.trials >= 1, "trials must be >= 1", line_no);
    } else if (key == "k_max") {
      config.k_max = detail::parse_u32(value, key, line_no);
    } else if (key == "ticks") {
      config.ticks = detail::parse_u64(value, key, line_no);
      check_range(config.ticks >= 1, "ticks must be >= 1", line_no);
    } else if (key == "max_emissions") {
      config.max_emissions = detail::parse_u32(value, key, line_no);
      check_range(config.max_emissions >= 2, "max_emissions must be >= 2",
                  line_no);
    } else if (key == "dump_frames") {
      config.dump_frames = detail::parse_bool(value, key, line_no);
    } else if (key == "pattern") {
      config.pattern = detail::parse_pattern(value, key, line_no);
    } else if (key == "pattern_alt") {
      config.pattern_alt = detail::parse_pattern(value, key, line_no);
    } else if (key == "out") {
      config.out = std::string(value);
    } else if (key == "tunnel_src_cx") {
      config.tunnel_src_cx = detail::parse_u32(value, key, line_no);
    } else if (key == "tunnel_src_cy") {
      config.tunnel_src_cy = detail::parse_u32(value, key, line_no);
    } else if (key == "tunnel_dst_cx") {
      config.tunnel_dst_cx = detail::parse_u32(value, key, line_no);
    } else if (key == "tunnel_dst_cy") {
      config.tunnel_dst_cy = detail::parse_u32(value, key, line_no);
    } else if (key == "tunnel_radius") {
      config.tunnel_radius = detail::parse_double(value, key, line_no);
      check_range(config.tunnel_radius > 0.0, "tunnel_radius must be positive",
                  line_no);
    } else if (key == "tunnel_permutation") {
      if (value == "identity") {
        config.tunnel_permutation = wavesim::PermutationMode::kIdentity;
      } else if (value == "random") {
        config.tunnel_permutation = wavesim::PermutationMode::kRandom;
      } else {
        throw TypeError("tunnel_permutation must be identity or random",
                        line_no);
      }
    } else if (key == "tunnel_perm_seed") {
      config.tunnel_perm_seed = detail::parse_u64(value, key, line_no);
    } else if (key == "tunnel_dropout") {
      config.tunnel_dropout = detail::parse_double(value, key, line_no);
      check_range(config.tunnel_dropout >= 0.0 && config.tunnel_dropout < 1.0,
                  "tunnel_dropout must be in [0, 1)", line_no);
    } else if (key == "tunnel_dropout_seed") {
      config.tunnel_dropout_seed = detail::parse_u64(value, key, line_no);
    } else {
      throw UnknownKey("unknown key '" + key + "'", line_no);
    }
  }

  // Cross-key checks only after everything parsed; order must not matter.
  if (config.n_trap > config.n_source) {
    throw RangeError("n_trap must not exceed n_source");
  }
  if (config.n_sig > config.n_neuron) {
    throw RangeError("n_sig must not exceed n_neuron");
  }
  if (config.k_limit > config.n_trap) {
    throw RangeError("k_limit must not exceed n_trap");
  }
  if (config.k_max > config.n_trap) {
    throw RangeError("k_max must not exceed n_trap");
  }
  if (config.boundary == cortex::Boundary::kTorus &&
      (2.0 * config.r_obs > config.width ||
       2.0 * config.r_obs > config.height)) {
    throw RangeError("torus mode requires 2*r_obs <= width and height");
  }
  return config;
}

namespace detail {

inline std::string pattern_value(const PatternSpec& spec) {
  if (const auto* disc = std::get_if<DiscPattern>(&spec)) {
    return "disc " + std::to_string(disc->cx) + ' ' + std::to_string(disc->cy) +
           ' ' + io::format_double(disc->radius) + ' ' +
           std::to_string(disc->count) + ' ' + std::to_string(disc->seed);
  }
  const auto& coords = std::get<CoordList>(spec);
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(coords[i].first) + ' ' +
           std::to_string(coords[i].second);
  }
  return out;
}

}  // namespace detail

inline std::string emit_config(const RunConfig& c) {
  std::string out;
  auto kv = [&](std::string_view key, const std::string& value) {
    out += std::string(key) + " = " + value + '\n';
  };
  kv("width", std::to_string(c.width));
  kv("height", std::to_string(c.height));
  kv("r_obs", io::format_double(c.r_obs));
  kv("boundary", c.boundary == cortex::Boundary::kWalls ? "walls" : "torus");
  kv("p_in", io::format_double(c.p_in));
  kv("a_min", c.a_min ? std::to_string(*c.a_min) : "auto");
  kv("k_act", c.k_act ? std::to_string(*c.k_act) : "auto");
  kv("t_relax", std::to_string(c.t_relax));
  kv("seed", std::to_string(c.seed));
  kv("memory_capacity", std::to_string(c.memory_capacity));
  kv("n_neuron", std::to_string(c.n_neuron));
  kv("n_source", std::to_string(c.n_source));
  kv("n_trap", std::to_string(c.n_trap));
  kv("n_sig", std::to_string(c.n_sig));
  kv("n_dict", std::to_string(c.n_dict));
  kv("k_limit", std::to_string(c.k_limit));
  kv("map_mode", c.map_mode == trapstats::MapMode::kUniform ? "uniform"
                                                            : "min_spacing");
  kv("min_gap", std::to_string(c.min_gap));
  kv("comparison", c.comparison == trapstats::Comparison::kAtLeast
                       ? "at_least"
                       : "exactly");
  kv("trials", std::to_string(c.trials));
  kv("k_max", std::to_string(c.k_max));
  kv("ticks", std::to_string(c.ticks));
  kv("max_emissions", std::to_string(c.max_emissions));
  kv("dump_frames", c.dump_frames ? "true" : "false");
  if (!std::holds_alternative<std::monostate>(c.pattern)) {
    kv("pattern", detail::pattern_value(c.pattern));
  }
  if (!std::holds_alternative<std::monostate>(c.pattern_alt)) {
    kv("pattern_alt", detail::pattern_value(c.pattern_alt));
  }
  kv("out", c.out);
  kv("tunnel_src_cx", std::to_string(c.tunnel_src_cx));
  kv("tunnel_src_cy", std::to_string(c.tunnel_src_cy));
  kv("tunnel_dst_cx", std::to_string(c.tunnel_dst_cx));
  kv("tunnel_dst_cy", std::to_string(c.tunnel_dst_cy));
  kv("tunnel_radius", io::format_double(c.tunnel_radius));
  kv("tunnel_permutation",
     c.tunnel_permutation == wavesim::PermutationMode::kIdentity ? "identity"
                                                                 : "random");
  kv("tunnel_perm_seed", std::to_string(c.tunnel_perm_seed));
  kv("tunnel_dropout", io::format_double(c.tunnel_dropout));
  kv("tunnel_dropout_seed", std::to_string(c.tunnel_dropout_seed));
  return out;
}

inline cortex::GridGeometry geometry_of(const RunConfig& c) {
  cortex::GridGeometry g;
  g.width = c.width;
  g.height = c.height;
  g.r_obs = c.r_obs;
  g.boundary = c.boundary;
  g.validate();
  return g;
}

// Resolves the auto calibration: thresholds follow the expected wavefront
// population inside one tracking field. k_act < a_min so a replayed trace
// of size a_min still clears the overlap threshold.
inline cortex::SimParams sim_params_of(const RunConfig& c) {
  const cortex::GridGeometry g = geometry_of(c);
  cortex::SimParams p;
  p.p_in = c.p_in;
  p.t_relax = c.t_relax;
  p.seed = c.seed;
  p.memory_capacity = c.memory_capacity;
  const double n_front = std::round(c.p_in * cortex::mean_field_size(g));
  p.a_min = c.a_min ? *c.a_min
                    : std::max<std::uint32_t>(
                          1, static_cast<std::uint32_t>(
                                 std::ceil(0.2 * n_front)));
  p.k_act = c.k_act ? *c.k_act
                    : std::max<std::uint32_t>(1, p.a_min > 1 ? p.a_min - 1 : 1);
  p.validate();
  return p;
}

inline trapstats::TrapParams trap_params_of(const RunConfig& c) {
  trapstats::TrapParams p;
  p.n_neuron = c.n_neuron;
  p.n_source = c.n_source;
  p.n_trap = c.n_trap;
  p.n_sig = c.n_sig;
  p.n_dict = c.n_dict;
  p.k_limit = c.k_limit;
  p.validate();
  return p;
}

inline trapstats::MapOptions map_options_of(const RunConfig& c) {
  trapstats::MapOptions options;
  options.mode = c.map_mode;
  options.gap = c.min_gap;
  return options;
}

// Materializes a pattern spec against a geometry. Empty spec -> no cells.
inline std::vector<std::uint32_t> resolve_pattern(
    const PatternSpec& spec, const cortex::GridGeometry& geometry) {
  if (std::holds_alternative<std::monostate>(spec)) return {};
  if (const auto* disc = std::get_if<DiscPattern>(&spec)) {
    return wavesim::disc_pattern(geometry, disc->cx, disc->cy, disc->radius,
                                 disc->count, disc->seed);
  }
  std::vector<std::uint32_t> cells;
  for (const auto& [x, y] : std::get<CoordList>(spec)) {
    if (x >= geometry.width || y >= geometry.height) {
      throw RangeError("pattern coordinate (" + std::to_string(x) + ", " +
                       std::to_string(y) + ") outside grid");
    }
    cells.push_back(geometry.index_of(x, y));
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

// Builds the tunnel named by the tunnel_* keys of `spec` between the two
// zone geometries.
inline wavesim::Tunnel tunnel_of(const RunConfig& spec,
                                 const cortex::GridGeometry& geom_a,
                                 const cortex::GridGeometry& geom_b) {
  if (spec.tunnel_src_cx >= geom_a.width || spec.tunnel_src_cy >= geom_a.height) {
    throw RangeError("tunnel source center outside zone A");
  }
  if (spec.tunnel_dst_cx >= geom_b.width || spec.tunnel_dst_cy >= geom_b.height) {
    throw RangeError("tunnel target center outside zone B");
  }
  return wavesim::make_tunnel(geom_a, spec.tunnel_src_cx, spec.tunnel_src_cy,
                              geom_b, spec.tunnel_dst_cx, spec.tunnel_dst_cy,
                              spec.tunnel_radius, spec.tunnel_permutation,
                              spec.tunnel_perm_seed, spec.tunnel_dropout,
                              spec.tunnel_dropout_seed);
}

}  // namespace pwave::config

#endif  // PWAVE_CONFIG_HPP
