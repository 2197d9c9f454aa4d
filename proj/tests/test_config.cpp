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

#include <doctest.h>

#include <cmath>
#include <string>

#include "pwave/config.hpp"

using namespace pwave;
using namespace pwave::config;

TEST_CASE("an empty config is all defaults") {
  const RunConfig cfg = parse_config("");
  CHECK(cfg == RunConfig{});
  CHECK(cfg.width == 100);
  CHECK(cfg.r_obs == 8.0);
  CHECK(cfg.p_in == 0.08);
  CHECK(!cfg.a_min.has_value());
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
  const RunConfig cfg = parse_config(
      "# reference run\n"
      "\n"
      "width = 50   # narrow\n"
      "\theight=60\n"
      "p_in =0.1\n");
  CHECK(cfg.width == 50);
  CHECK(cfg.height == 60);
  CHECK(cfg.p_in == 0.1);
}

TEST_CASE("range violations name the line") {
  try {
    parse_config("width = 100\np_in = 1.5\n");
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_config("t_relax = 0\n"), RangeError);
  CHECK_THROWS_AS(parse_config("tunnel_dropout = 1.0\n"), RangeError);
}

TEST_CASE("unknown, duplicate, and mistyped keys are rejected") {
  CHECK_THROWS_AS(parse_config("wdith = 100\n"), UnknownKey);
  CHECK_THROWS_AS(parse_config("width = 10\nwidth = 20\n"), DuplicateKey);
  CHECK_THROWS_AS(parse_config("width = ten\n"), TypeError);
  CHECK_THROWS_AS(parse_config("just some words\n"), TypeError);
  CHECK_THROWS_AS(parse_config("dump_frames = yes\n"), TypeError);
}

TEST_CASE("cross-key invariants hold regardless of key order") {
  CHECK_THROWS_AS(parse_config("n_sig = 700\n"), RangeError);
  CHECK_NOTHROW(parse_config("n_sig = 700\nn_neuron = 1000\n"));
  CHECK_THROWS_AS(parse_config("n_trap = 30\nn_source = 20\n"), RangeError);
  CHECK_THROWS_AS(parse_config("boundary = torus\nr_obs = 60\n"), RangeError);
}

TEST_CASE("emitting defaults and re-parsing is the identity") {
  const RunConfig defaults;
  CHECK(parse_config(emit_config(defaults)) == defaults);

  RunConfig custom;
  custom.width = 64;
  custom.r_obs = 5.25;
  custom.a_min = 4;
  custom.boundary = cortex::Boundary::kTorus;
  custom.pattern = DiscPattern{10, 12, 3.0, 8, 21};
  custom.pattern_alt = CoordList{{1, 2}, {3, 4}};
  custom.map_mode = trapstats::MapMode::kMinSpacing;
  custom.comparison = trapstats::Comparison::kExactly;
  custom.tunnel_permutation = wavesim::PermutationMode::kRandom;
  custom.tunnel_dropout = 0.3;
  custom.dump_frames = true;
  CHECK(parse_config(emit_config(custom)) == custom);
}

TEST_CASE("pattern specs parse both forms") {
  const RunConfig disc = parse_config("pattern = disc 50 50 4 10 7\n");
  const auto* d = std::get_if<DiscPattern>(&disc.pattern);
  REQUIRE(d != nullptr);
  CHECK(d->cx == 50);
  CHECK(d->count == 10);
  const RunConfig coords = parse_config("pattern = 1 2 3 4 5 6\n");
  const auto* c = std::get_if<CoordList>(&coords.pattern);
  REQUIRE(c != nullptr);
  CHECK(c->size() == 3);
  CHECK_THROWS_AS(parse_config("pattern = 1 2 3\n"), TypeError);
  CHECK_THROWS_AS(parse_config("pattern = disc 1 2\n"), TypeError);
}

TEST_CASE("patterns resolve against the geometry") {
  RunConfig cfg = parse_config("width = 20\nheight = 20\nr_obs = 3\n");
  cfg.pattern = CoordList{{19, 19}};
  const auto cells = resolve_pattern(cfg.pattern, geometry_of(cfg));
  CHECK(cells == std::vector<std::uint32_t>{19 * 20 + 19});
  cfg.pattern = CoordList{{20, 0}};
  CHECK_THROWS_AS(resolve_pattern(cfg.pattern, geometry_of(cfg)), RangeError);
  CHECK(resolve_pattern(PatternSpec{}, geometry_of(cfg)).empty());
}

TEST_CASE("auto thresholds follow the expected front population") {
  const RunConfig cfg;  // 100x100, r_obs 8, p_in 0.08
  const cortex::GridGeometry g = geometry_of(cfg);
  const cortex::SimParams p = sim_params_of(cfg);
  const double n_front = std::round(cfg.p_in * cortex::mean_field_size(g));
  CHECK(n_front == 14.0);
  CHECK(p.a_min == static_cast<std::uint32_t>(std::ceil(0.2 * n_front)));
  CHECK(p.a_min == 3);
  CHECK(p.k_act == p.a_min - 1);
  // Explicit values win over the derivation.
  RunConfig manual = cfg;
  manual.a_min = 2;
  manual.k_act = 9;
  const cortex::SimParams q = sim_params_of(manual);
  CHECK(q.a_min == 2);
  CHECK(q.k_act == 9);
}
