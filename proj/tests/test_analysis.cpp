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

#include <vector>

#include "pwave/analysis.hpp"
#include "pwave/cortex.hpp"

using namespace pwave;
using namespace pwave::analysis;
using namespace pwave::cortex;

namespace {

const GridGeometry kGrid{16, 16, 3.0, Boundary::kWalls};

Frame make_frame(std::uint64_t tick, const std::vector<std::uint32_t>& endo) {
  Frame f;
  f.tick = tick;
  f.modes.assign(kGrid.cell_count(), {});
  for (auto i : endo) f.modes[i] = {Mode::kEndogenous, 0};
  return f;
}

std::vector<Frame> quiet_frames(std::uint64_t from, std::uint64_t count) {
  std::vector<Frame> frames;
  for (std::uint64_t t = 0; t < count; ++t) frames.push_back(make_frame(from + t, {}));
  return frames;
}

}  // namespace

TEST_CASE("segment_emissions: quiet frames produce nothing") {
  CHECK(segment_emissions(quiet_frames(0, 30), 3).empty());
}

TEST_CASE("segment_emissions: one burst is one record") {
  std::vector<Frame> frames = quiet_frames(0, 2);
  frames.push_back(make_frame(2, {5}));
  frames.push_back(make_frame(3, {6, 7}));
  frames.push_back(make_frame(4, {8}));
  auto tail = quiet_frames(5, 10);
  frames.insert(frames.end(), tail.begin(), tail.end());
  const auto emissions = segment_emissions(frames, 4);
  REQUIRE(emissions.size() == 1);
  CHECK(emissions[0].start_tick == 2);
  CHECK(emissions[0].end_tick == 4);
  REQUIRE(emissions[0].sets.size() == 3);
  CHECK(emissions[0].sets[1] == std::vector<std::uint32_t>{6, 7});
}

TEST_CASE("segment_emissions: a gap of exactly the threshold splits") {
  const std::uint32_t gap = 5;
  std::vector<Frame> frames;
  frames.push_back(make_frame(0, {1}));
  auto silence = quiet_frames(1, gap);
  frames.insert(frames.end(), silence.begin(), silence.end());
  frames.push_back(make_frame(gap + 1, {1}));
  CHECK(segment_emissions(frames, gap).size() == 2);
  // One tick less of silence keeps it a single emission.
  std::vector<Frame> joined;
  joined.push_back(make_frame(0, {1}));
  auto shorter = quiet_frames(1, gap - 1);
  joined.insert(joined.end(), shorter.begin(), shorter.end());
  joined.push_back(make_frame(gap, {1}));
  const auto merged = segment_emissions(joined, gap);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].sets.size() == gap + 1);  // internal silence kept as empties
}

TEST_CASE("reproducibility: an emission equals itself") {
  EmissionRecord e;
  e.start_tick = 3;
  e.end_tick = 5;
  e.sets = {{1, 2}, {}, {9}};
  const auto report = reproducibility(e, e);
  CHECK(report.identical);
  for (auto h : report.hamming) CHECK(h == 0);
}

TEST_CASE("reproducibility: one flipped cell is hamming 1 at that tick") {
  EmissionRecord a;
  a.sets = {{1, 2}, {4}, {9}};
  EmissionRecord b;
  b.sets = {{1, 2}, {4, 5}, {9}};
  const auto report = reproducibility(a, b);
  CHECK_FALSE(report.identical);
  CHECK(report.hamming == std::vector<std::uint64_t>{0, 1, 0});
  // Different lengths are never identical, even with matching prefixes.
  EmissionRecord c;
  c.sets = {{1, 2}, {4}, {9}, {}};
  CHECK_FALSE(reproducibility(a, c).identical);
}

TEST_CASE("uniqueness: identical active runs score 1, disjoint score 0") {
  std::vector<Frame> run_a = {make_frame(0, {100, 101}), make_frame(1, {110})};
  CHECK(uniqueness(kGrid, run_a, run_a, 0, 1.0) == 1.0);
  std::vector<Frame> run_b = {make_frame(0, {200, 201}), make_frame(1, {210})};
  CHECK(uniqueness(kGrid, run_a, run_b, 0, 1.0) == 0.0);
  std::vector<Frame> dead = {make_frame(0, {}), make_frame(1, {})};
  CHECK(uniqueness(kGrid, dead, dead, 0, 1.0) == 0.0);
}

TEST_CASE("uniqueness ignores the exclusion disc") {
  // Identical near the center, different far away.
  const std::uint32_t center = kGrid.index_of(8, 8);
  std::vector<Frame> run_a = {make_frame(0, {center, kGrid.index_of(1, 1)})};
  std::vector<Frame> run_b = {make_frame(0, {center, kGrid.index_of(14, 14)})};
  CHECK(uniqueness(kGrid, run_a, run_b, center, 2.0) == 0.0);
  // A zero-radius exclusion disc covers nothing: the shared center cell
  // counts, scoring 1 of 3 union cells.
  CHECK(uniqueness(kGrid, run_a, run_b, center, 0.0) ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("uniqueness validates the geometry") {
  std::vector<Frame> run_a = {make_frame(0, {1})};
  std::vector<Frame> tiny(1);
  tiny[0].tick = 0;
  tiny[0].modes.assign(4, {});
  CHECK_THROWS_AS(uniqueness(kGrid, run_a, tiny, 0, 1.0), GeometryMismatch);
}

TEST_CASE("front_speed: static activity has slope 0") {
  std::vector<Frame> frames;
  for (std::uint64_t t = 0; t < 8; ++t) {
    frames.push_back(make_frame(t, {kGrid.index_of(4, 4)}));
  }
  CHECK(front_speed(kGrid, frames, kGrid.index_of(2, 2)) ==
        doctest::Approx(0.0));
}

TEST_CASE("front_speed: a ring expanding one cell per tick has slope 1") {
  const std::uint32_t ox = 8;
  const std::uint32_t oy = 8;
  std::vector<Frame> frames;
  for (std::uint64_t t = 1; t <= 7; ++t) {
    // Two cells exactly t away along the axes.
    frames.push_back(make_frame(
        t, {kGrid.index_of(ox + static_cast<std::uint32_t>(t), oy),
            kGrid.index_of(ox - static_cast<std::uint32_t>(t), oy)}));
  }
  CHECK(front_speed(kGrid, frames, kGrid.index_of(ox, oy)) ==
        doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("front_speed needs five active ticks") {
  std::vector<Frame> frames;
  for (std::uint64_t t = 0; t < 4; ++t) {
    frames.push_back(make_frame(t, {kGrid.index_of(4, 4)}));
  }
  auto padding = quiet_frames(4, 20);
  frames.insert(frames.end(), padding.begin(), padding.end());
  CHECK_THROWS_AS(front_speed(kGrid, frames, 0), InvalidArgument);
}

TEST_CASE("activity_fraction counts only endogenous cells") {
  CHECK(activity_fraction(make_frame(0, {})) == 0.0);
  Frame all;
  all.modes.assign(kGrid.cell_count(), {Mode::kEndogenous, 0});
  CHECK(activity_fraction(all) == 1.0);
  Frame mixed = make_frame(0, {1, 2});
  mixed.modes[3] = {Mode::kEvoked, 0};  // evoked does not count
  CHECK(activity_fraction(mixed) ==
        doctest::Approx(2.0 / kGrid.cell_count()));
}

TEST_CASE("detect_self_excitation finds the first sustained crossing") {
  CHECK(!detect_self_excitation(quiet_frames(0, 20), 0.5, 3));
  std::vector<Frame> frames = quiet_frames(0, 7);
  Frame loud;
  loud.modes.assign(kGrid.cell_count(), {Mode::kEndogenous, 0});
  for (std::uint64_t t = 7; t < 12; ++t) {
    Frame f = loud;
    f.tick = t;
    frames.push_back(f);
  }
  const auto hit = detect_self_excitation(frames, 0.5, 3);
  REQUIRE(hit.has_value());
  CHECK(*hit == 7);
  // A crossing shorter than `sustain` does not count.
  std::vector<Frame> blip = quiet_frames(0, 5);
  Frame f = loud;
  f.tick = 5;
  blip.push_back(f);
  auto rest = quiet_frames(6, 5);
  blip.insert(blip.end(), rest.begin(), rest.end());
  CHECK(!detect_self_excitation(blip, 0.5, 2));
}
