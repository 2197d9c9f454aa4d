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

#include <algorithm>
#include <set>
#include <vector>

#include "pwave/cortex.hpp"
#include "pwave/rng.hpp"

using namespace pwave;
using namespace pwave::cortex;

namespace {

GridGeometry walls_grid(std::uint32_t w, std::uint32_t h, double r) {
  return GridGeometry{w, h, r, Boundary::kWalls};
}

Frame frame_with_active(const GridGeometry& g,
                        const std::vector<std::uint32_t>& active,
                        std::uint64_t tick = 0) {
  Frame f;
  f.tick = tick;
  f.modes.assign(g.cell_count(), {});
  for (auto i : active) f.modes[i] = {Mode::kEndogenous, 0};
  return f;
}

// Direct lattice enumeration, independent of field_offsets.
std::set<std::uint32_t> field_by_enumeration(const GridGeometry& g,
                                             std::uint32_t i) {
  std::set<std::uint32_t> out;
  const double r2 = g.r_obs * g.r_obs;
  for (std::uint32_t j = 0; j < g.cell_count(); ++j) {
    if (j == i) continue;
    double dx = std::abs(static_cast<double>(g.x_of(i)) - g.x_of(j));
    double dy = std::abs(static_cast<double>(g.y_of(i)) - g.y_of(j));
    if (g.boundary == Boundary::kTorus) {
      dx = std::min(dx, g.width - dx);
      dy = std::min(dy, g.height - dy);
    }
    if (dx * dx + dy * dy < r2) out.insert(j);
  }
  return out;
}

}  // namespace

TEST_CASE("tracking_field: r_obs = 1 sees nothing") {
  const GridGeometry g = walls_grid(5, 5, 1.0);
  CHECK(tracking_field(g, g.index_of(2, 2)).empty());
}

TEST_CASE("tracking_field: r_obs = 1.5 sees the 8 surrounding cells") {
  const GridGeometry g = walls_grid(5, 5, 1.5);
  const auto field = tracking_field(g, g.index_of(2, 2));
  CHECK(field.size() == 8);
  const auto expected = field_by_enumeration(g, g.index_of(2, 2));
  CHECK(std::set<std::uint32_t>(field.begin(), field.end()) == expected);
}

TEST_CASE("tracking_field: interior size is translation invariant") {
  const GridGeometry g = walls_grid(20, 20, 3.7);
  const std::size_t interior = tracking_field(g, g.index_of(10, 10)).size();
  for (std::uint32_t x = 4; x <= 15; ++x) {
    for (std::uint32_t y = 4; y <= 15; ++y) {
      CHECK(tracking_field(g, g.index_of(x, y)).size() == interior);
    }
  }
  CHECK(tracking_field(g, g.index_of(0, 0)).size() < interior);
}

TEST_CASE("tracking_field matches enumeration in both boundary modes") {
  for (Boundary boundary : {Boundary::kWalls, Boundary::kTorus}) {
    GridGeometry g{11, 9, 2.5, boundary};
    for (std::uint32_t i : {0U, 5U, 40U, 60U, 98U}) {
      const auto field = tracking_field(g, i);
      CHECK(std::set<std::uint32_t>(field.begin(), field.end()) ==
            field_by_enumeration(g, i));
    }
  }
}

TEST_CASE("tracking_field symmetry: j in O_i iff i in O_j") {
  for (Boundary boundary : {Boundary::kWalls, Boundary::kTorus}) {
    GridGeometry g{12, 10, 3.0, boundary};
    for (std::uint64_t draw = 0; draw < 40; ++draw) {
      const auto i = static_cast<std::uint32_t>(
          rng::bounded(rng::hash(1, rng::Stream::kPattern, draw, 0),
                       g.cell_count()));
      const auto j = static_cast<std::uint32_t>(
          rng::bounded(rng::hash(1, rng::Stream::kPattern, draw, 1),
                       g.cell_count()));
      const auto fi = tracking_field(g, i);
      const auto fj = tracking_field(g, j);
      const bool j_in_i = std::find(fi.begin(), fi.end(), j) != fi.end();
      const bool i_in_j = std::find(fj.begin(), fj.end(), i) != fj.end();
      CHECK(j_in_i == i_in_j);
    }
  }
}

TEST_CASE("tracking_field rejects out-of-range indices") {
  const GridGeometry g = walls_grid(4, 4, 2.0);
  CHECK_THROWS_AS(tracking_field(g, 16), IndexOutOfRange);
}

TEST_CASE("mean_field_size equals the brute-force average") {
  const GridGeometry g = walls_grid(9, 7, 2.2);
  double total = 0.0;
  for (std::uint32_t i = 0; i < g.cell_count(); ++i) {
    total += static_cast<double>(tracking_field(g, i).size());
  }
  CHECK(mean_field_size(g) ==
        doctest::Approx(total / g.cell_count()).epsilon(1e-12));
}

TEST_CASE("overlap_match counts strictly above the threshold") {
  const GridGeometry g = walls_grid(4, 4, 4.0);
  const Frame two_active = frame_with_active(g, {1, 2});
  MemoryTrace trace{{1, 2, 3}};
  CHECK(overlap_match(two_active, trace, 1));
  CHECK_FALSE(overlap_match(frame_with_active(g, {}), trace, 0));
  const Frame all_active = frame_with_active(g, {1, 2, 3});
  CHECK_FALSE(overlap_match(all_active, trace, 3));  // 3 > 3 fails
  CHECK(overlap_match(all_active, trace, 2));
}

TEST_CASE("overlap_match is monotone in the active set") {
  const GridGeometry g = walls_grid(6, 6, 6.0);
  for (std::uint64_t draw = 0; draw < 30; ++draw) {
    std::vector<std::uint32_t> active;
    MemoryTrace trace;
    for (std::uint32_t c = 0; c < g.cell_count(); ++c) {
      if (rng::to_unit(rng::hash(2, rng::Stream::kPattern, draw, c)) < 0.3) {
        active.push_back(c);
      }
      if (rng::to_unit(rng::hash(3, rng::Stream::kPattern, draw, c)) < 0.2) {
        trace.members.push_back(c);
      }
    }
    if (trace.members.empty()) continue;
    const Frame base = frame_with_active(g, active);
    auto larger = active;
    larger.push_back((draw * 7) % g.cell_count());
    const Frame grown = frame_with_active(g, larger);
    for (std::uint32_t k_act = 1; k_act <= 4; ++k_act) {
      if (overlap_match(base, trace, k_act)) {
        CHECK(overlap_match(grown, trace, k_act));
      }
    }
  }
}

TEST_CASE("recognize: precedence truth table") {
  const GridGeometry g = walls_grid(4, 4, 4.0);
  const Frame frame = frame_with_active(g, {1, 2, 5});
  const MemoryTrace matching{{1, 2}};     // 2 active > k_act = 1
  const MemoryTrace missing{{10, 11}};    // 0 active

  NeuronMemory none;
  CHECK(recognize(frame, none, 1) == Recognition::kNovel);

  NeuronMemory pos_only;
  pos_only.positive = {matching};
  CHECK(recognize(frame, pos_only, 1) == Recognition::kFire);

  NeuronMemory neg_only;
  neg_only.negative = {matching};
  CHECK(recognize(frame, neg_only, 1) == Recognition::kSuppress);

  NeuronMemory both;
  both.positive = {matching};
  both.negative = {matching};
  CHECK(recognize(frame, both, 1) == Recognition::kFire);

  NeuronMemory no_match;
  no_match.positive = {missing};
  no_match.negative = {missing};
  CHECK(recognize(frame, no_match, 1) == Recognition::kNovel);
}

TEST_CASE("recognize only sees the tracking field") {
  const GridGeometry g = walls_grid(10, 10, 2.0);
  const std::uint32_t i = g.index_of(5, 5);
  const auto field = tracking_field(g, i);
  NeuronMemory memory;
  memory.positive.push_back(MemoryTrace{{field[0], field[1]}});
  const Frame near = frame_with_active(g, {field[0], field[1]});
  Frame with_far = near;
  with_far.modes[g.index_of(0, 0)] = {Mode::kEndogenous, 0};
  CHECK(recognize(near, memory, 1) == recognize(with_far, memory, 1));
}

TEST_CASE("record_trace appends to the right collection") {
  const GridGeometry g = walls_grid(6, 6, 2.0);
  const std::uint32_t i = g.index_of(3, 3);
  const auto field = tracking_field(g, i);
  const Frame frame = frame_with_active(g, {field[0], field[2]});
  NeuronMemory memory;
  record_trace(frame, field, true, memory, 10);
  REQUIRE(memory.positive.size() == 1);
  CHECK(memory.positive[0].members ==
        std::vector<std::uint32_t>{std::min(field[0], field[2]),
                                   std::max(field[0], field[2])});
  record_trace(frame, field, false, memory, 10);
  CHECK(memory.negative.size() == 1);
  CHECK(memory.trace_count() == 2);
}

TEST_CASE("record_trace enforces capacity and a non-empty field view") {
  const GridGeometry g = walls_grid(6, 6, 2.0);
  const std::uint32_t i = g.index_of(3, 3);
  const auto field = tracking_field(g, i);
  const Frame frame = frame_with_active(g, {field[0]});
  NeuronMemory memory;
  record_trace(frame, field, true, memory, 1);
  CHECK_THROWS_AS(record_trace(frame, field, false, memory, 1),
                  MemoryCapacityExceeded);
  const Frame quiet = frame_with_active(g, {});
  NeuronMemory fresh;
  CHECK_THROWS_AS(record_trace(quiet, field, true, fresh, 4), InvalidArgument);
}
