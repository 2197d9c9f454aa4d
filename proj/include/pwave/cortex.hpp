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

#ifndef PWAVE_CORTEX_HPP
#define PWAVE_CORTEX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pwave/errors.hpp"

// Grid geometry, per-neuron state, and the pattern memory. A neuron only
// ever observes its tracking field: the cells within Euclidean distance
// r_obs. What it remembers is a trace, the set of field cells that were
// active the first time it faced a pattern; traces are split into a
// positive collection (the neuron fired) and a negative one (it stayed
// quiet).

namespace pwave::cortex {

enum class Boundary { kWalls, kTorus };

struct GridGeometry {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double r_obs = 0.0;
  Boundary boundary = Boundary::kWalls;

  std::uint32_t cell_count() const { return width * height; }
  std::uint32_t index_of(std::uint32_t x, std::uint32_t y) const {
    return y * width + x;
  }
  std::uint32_t x_of(std::uint32_t index) const { return index % width; }
  std::uint32_t y_of(std::uint32_t index) const { return index / width; }

  void validate() const {
    if (width < 1 || height < 1) {
      throw InvalidArgument("grid must have at least one cell");
    }
    if (!(r_obs > 0.0)) {
      throw InvalidArgument("r_obs must be positive");
    }
    if (boundary == Boundary::kTorus &&
        (2.0 * r_obs > width || 2.0 * r_obs > height)) {
      // Wrapped fields must not reach the same cell twice.
      throw InvalidArgument("torus mode requires 2*r_obs <= width and height");
    }
  }

  bool operator==(const GridGeometry&) const = default;
};

enum class Mode : std::uint8_t { kQuiet, kEvoked, kEndogenous, kRelaxing };

struct NeuronMode {
  Mode kind = Mode::kQuiet;
  std::uint16_t ticks_remaining = 0;  // Relaxing only, in [1, t_relax]

  bool operator==(const NeuronMode&) const = default;
};

struct Frame {
  std::uint64_t tick = 0;
  std::vector<NeuronMode> modes;

  bool active(std::uint32_t i) const {
    const Mode m = modes[i].kind;
    return m == Mode::kEvoked || m == Mode::kEndogenous;
  }

  bool operator==(const Frame&) const = default;
};

// Relative offsets of the tracking field of an interior cell: all (dx, dy)
// with 0 < dx^2 + dy^2 < r_obs^2. The strict inequality and self-exclusion
// match tracking_field below; the engine scatters through this table.
inline std::vector<std::pair<int, int>> field_offsets(double r_obs) {
  const int reach = static_cast<int>(std::ceil(r_obs));
  const double r2 = r_obs * r_obs;
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx == 0 && dy == 0) continue;
      if (dx * dx + dy * dy < r2) offsets.emplace_back(dx, dy);
    }
  }
  return offsets;
}

// The set of cells neuron i can observe. Strict Euclidean disc, self
// excluded; torus mode wraps coordinate differences.
inline std::vector<std::uint32_t> tracking_field(const GridGeometry& geometry,
                                                 std::uint32_t i) {
  geometry.validate();
  if (i >= geometry.cell_count()) {
    throw IndexOutOfRange("neuron index " + std::to_string(i) +
                          " outside grid");
  }
  const int xi = static_cast<int>(geometry.x_of(i));
  const int yi = static_cast<int>(geometry.y_of(i));
  const int w = static_cast<int>(geometry.width);
  const int h = static_cast<int>(geometry.height);
  std::vector<std::uint32_t> field;
  for (const auto& [dx, dy] : field_offsets(geometry.r_obs)) {
    int x = xi + dx;
    int y = yi + dy;
    if (geometry.boundary == Boundary::kTorus) {
      x = ((x % w) + w) % w;
      y = ((y % h) + h) % h;
    } else if (x < 0 || x >= w || y < 0 || y >= h) {
      continue;
    }
    field.push_back(geometry.index_of(static_cast<std::uint32_t>(x),
                                      static_cast<std::uint32_t>(y)));
  }
  return field;
}

inline double mean_field_size(const GridGeometry& geometry) {
  geometry.validate();
  const auto offsets = field_offsets(geometry.r_obs);
  if (geometry.boundary == Boundary::kTorus) {
    return static_cast<double>(offsets.size());
  }
  const int w = static_cast<int>(geometry.width);
  const int h = static_cast<int>(geometry.height);
  // Sum over offsets of the number of cells where the offset stays inside.
  std::uint64_t total = 0;
  for (const auto& [dx, dy] : offsets) {
    const std::uint64_t nx = static_cast<std::uint64_t>(std::max(0, w - std::abs(dx)));
    const std::uint64_t ny = static_cast<std::uint64_t>(std::max(0, h - std::abs(dy)));
    total += nx * ny;
  }
  return static_cast<double>(total) / geometry.cell_count();
}

struct MemoryTrace {
  std::vector<std::uint32_t> members;  // subset of the owner's field

  bool operator==(const MemoryTrace&) const = default;
};

struct NeuronMemory {
  std::vector<MemoryTrace> positive;  // traces the neuron fired on
  std::vector<MemoryTrace> negative;  // traces it stayed quiet on

  std::size_t trace_count() const { return positive.size() + negative.size(); }

  bool operator==(const NeuronMemory&) const = default;
};

struct SimParams {
  double p_in = 0.05;           // endogenous spike chance per eligible tick
  std::uint32_t a_min = 6;      // active-count threshold to enter the procedure
  std::uint32_t k_act = 5;      // overlap threshold of trace matching
  std::uint32_t t_relax = 50;   // refractory ticks after an endogenous spike
  std::uint64_t seed = 0;
  std::uint32_t memory_capacity = 65536;  // max traces per neuron

  void validate() const {
    if (!(p_in > 0.0) || p_in > 1.0) {
      throw InvalidArgument("p_in must be in (0, 1]");
    }
    if (a_min < 1) throw InvalidArgument("a_min must be >= 1");
    if (k_act < 1) throw InvalidArgument("k_act must be >= 1");
    if (t_relax < 1) throw InvalidArgument("t_relax must be >= 1");
    if (memory_capacity < 1) {
      throw InvalidArgument("memory_capacity must be >= 1");
    }
  }
};

// True iff strictly more than k_act trace members are active in the frame.
inline bool overlap_match(const Frame& frame, const MemoryTrace& trace,
                          std::uint32_t k_act) {
  std::uint32_t hits = 0;
  std::uint32_t left = static_cast<std::uint32_t>(trace.members.size());
  for (std::uint32_t member : trace.members) {
    if (frame.active(member)) {
      if (++hits > k_act) return true;
    }
    if (hits + --left <= k_act) return false;  // cannot reach the threshold
  }
  return false;
}

enum class Recognition { kFire, kSuppress, kNovel };

// Positive traces take precedence: any positive match fires regardless of
// negative matches, negative matches suppress, and only a pattern matching
// nothing is novel.
inline Recognition recognize(const Frame& frame, const NeuronMemory& memory,
                             std::uint32_t k_act) {
  for (const MemoryTrace& trace : memory.positive) {
    if (overlap_match(frame, trace, k_act)) return Recognition::kFire;
  }
  for (const MemoryTrace& trace : memory.negative) {
    if (overlap_match(frame, trace, k_act)) return Recognition::kSuppress;
  }
  return Recognition::kNovel;
}

// The active cells of the field, sorted: what the neuron would remember of
// this frame.
inline MemoryTrace trace_of(const Frame& frame,
                            const std::vector<std::uint32_t>& field) {
  MemoryTrace trace;
  for (std::uint32_t j : field) {
    if (frame.active(j)) trace.members.push_back(j);
  }
  if (trace.members.empty()) {
    throw InvalidArgument("record_trace: no active neuron in the field");
  }
  std::sort(trace.members.begin(), trace.members.end());
  return trace;
}

// Appends a trace to the positive or negative collection. No deduplication;
// identical traces may repeat. Throws once the neuron would exceed its
// capacity: the run must abort rather than silently forget.
inline void append_trace(MemoryTrace trace, bool fired, NeuronMemory& memory,
                         std::uint32_t capacity) {
  if (memory.trace_count() + 1 > capacity) {
    throw MemoryCapacityExceeded("neuron memory capacity " +
                                 std::to_string(capacity) + " exhausted");
  }
  (fired ? memory.positive : memory.negative).push_back(std::move(trace));
}

inline void record_trace(const Frame& frame,
                         const std::vector<std::uint32_t>& field, bool fired,
                         NeuronMemory& memory, std::uint32_t capacity) {
  append_trace(trace_of(frame, field), fired, memory, capacity);
}

}  // namespace pwave::cortex

#endif  // PWAVE_CORTEX_HPP
