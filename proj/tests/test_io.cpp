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

#include <string>

#include "pwave/cortex.hpp"
#include "pwave/frame_io.hpp"
#include "pwave/snapshot.hpp"
#include "pwave/wavesim.hpp"

using namespace pwave;
using namespace pwave::cortex;

TEST_CASE("frame format is byte-exact") {
  GridGeometry g{3, 2, 1.5, Boundary::kWalls};
  Frame f;
  f.tick = 42;
  f.modes.assign(6, {});
  f.modes[g.index_of(1, 0)] = {Mode::kEvoked, 0};
  f.modes[g.index_of(2, 0)] = {Mode::kEndogenous, 0};
  f.modes[g.index_of(0, 1)] = {Mode::kRelaxing, 3};
  const std::string expected =
      "P-WAVE 1\n"
      "42 3 2\n"
      ".ES\n"
      "r..\n";
  CHECK(io::format_frame(g, f) == expected);
}

TEST_CASE("frame files parse back to the same activity") {
  GridGeometry g{5, 4, 2.0, Boundary::kWalls};
  Frame f;
  f.tick = 7;
  f.modes.assign(g.cell_count(), {});
  f.modes[3] = {Mode::kEndogenous, 0};
  f.modes[11] = {Mode::kEvoked, 0};
  f.modes[17] = {Mode::kRelaxing, 5};
  const io::ParsedFrame parsed = io::parse_frame(io::format_frame(g, f));
  CHECK(parsed.width == 5);
  CHECK(parsed.height == 4);
  CHECK(parsed.frame.tick == 7);
  for (std::uint32_t i = 0; i < g.cell_count(); ++i) {
    CHECK(parsed.frame.modes[i].kind == f.modes[i].kind);
  }
  CHECK_THROWS_AS(io::parse_frame("HELLO\n"), InvalidArgument);
}

TEST_CASE("frame filenames are zero-padded by tick") {
  CHECK(io::frame_filename(0) == "frame_000000.txt");
  CHECK(io::frame_filename(123456) == "frame_123456.txt");
}

TEST_CASE("format_double is locale-free shortest form") {
  CHECK(io::format_double(0.05) == "0.05");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(38.4615) == "38.4615");
}

TEST_CASE("snapshots round-trip a mid-run state exactly") {
  GridGeometry g{14, 14, 2.5, Boundary::kWalls};
  SimParams p{0.7, 2, 1, 4, 11, 5000};
  wavesim::CortexState state(g, p);
  state.set_evoked(wavesim::disc_pattern(g, 7, 7, 2.0, 4, 3));
  state.run(9);  // accumulates spikes, relaxation countdowns, and traces

  const std::string text = snapshot::save_state(state);
  wavesim::CortexState loaded = snapshot::load_state(text);
  CHECK(loaded.equal_state(state));
  CHECK(loaded.params().p_in == state.params().p_in);
  CHECK(loaded.params().seed == state.params().seed);
  CHECK(loaded.tick() == state.tick());
  CHECK(snapshot::save_state(loaded) == text);

  // The loaded state continues exactly like the original.
  state.run(5);
  loaded.run(5);
  CHECK(loaded.equal_state(state));
  CHECK_THROWS_AS(snapshot::load_state("garbage"), InvalidArgument);
}
