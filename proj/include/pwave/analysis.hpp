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

#ifndef PWAVE_ANALYSIS_HPP
#define PWAVE_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "pwave/cortex.hpp"
#include "pwave/errors.hpp"

// Pure metrics over frame sequences: emission segmentation, reproducibility
// and uniqueness of wave patterns, front speed, activity level, and the
// self-excitation detector. Everything here recomputes bit-stably from the
// frames alone.

namespace pwave::analysis {

using cortex::Frame;
using cortex::GridGeometry;
using cortex::Mode;

inline std::vector<std::uint32_t> endogenous_set(const Frame& frame) {
  std::vector<std::uint32_t> cells;
  for (std::uint32_t i = 0; i < frame.modes.size(); ++i) {
    if (frame.modes[i].kind == Mode::kEndogenous) cells.push_back(i);
  }
  return cells;
}

// One wave cycle: per-tick endogenous sets from the first spike to the last
// one before the separating silence.
struct EmissionRecord {
  std::uint64_t start_tick = 0;
  std::uint64_t end_tick = 0;
  std::vector<std::vector<std::uint32_t>> sets;  // one per tick in range
};

// Splits endogenous activity into emissions: a silent run of at least
// `min_gap` ticks separates two emissions. Internal silent runs shorter
// than the gap stay inside one record as empty sets.
inline std::vector<EmissionRecord> segment_emissions(
    const std::vector<Frame>& frames, std::uint32_t min_gap) {
  if (min_gap < 1) throw InvalidArgument("min_gap must be >= 1");
  std::vector<EmissionRecord> emissions;
  EmissionRecord current;
  std::vector<std::vector<std::uint32_t>> pending_silence;
  bool open = false;

  for (const Frame& frame : frames) {
    std::vector<std::uint32_t> endo = endogenous_set(frame);
    if (endo.empty()) {
      if (open) {
        pending_silence.emplace_back();
        if (pending_silence.size() >= min_gap) {
          emissions.push_back(std::move(current));
          current = {};
          pending_silence.clear();
          open = false;
        }
      }
      continue;
    }
    if (!open) {
      current.start_tick = frame.tick;
      open = true;
    } else {
      // The silence was shorter than the gap; it belongs to this emission.
      for (auto& empty : pending_silence) current.sets.push_back(std::move(empty));
    }
    pending_silence.clear();
    current.end_tick = frame.tick;
    current.sets.push_back(std::move(endo));
  }
  if (open) emissions.push_back(std::move(current));
  return emissions;
}

struct ReproReport {
  bool identical = false;
  std::vector<std::uint64_t> hamming;  // per aligned tick offset
};

// Tick-aligned comparison of two emissions (offset from each start). The
// emissions are identical iff they have equal length and every aligned
// pair of endogenous sets is equal; otherwise the per-offset Hamming
// distances are reported, with missing ticks counted as empty sets.
inline ReproReport reproducibility(const EmissionRecord& e1,
                                   const EmissionRecord& e2) {
  ReproReport report;
  const std::size_t n = std::max(e1.sets.size(), e2.sets.size());
  report.hamming.resize(n, 0);
  static const std::vector<std::uint32_t> kEmpty;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = i < e1.sets.size() ? e1.sets[i] : kEmpty;
    const auto& b = i < e2.sets.size() ? e2.sets[i] : kEmpty;
    std::size_t ia = 0;
    std::size_t ib = 0;
    std::uint64_t diff = 0;
    while (ia < a.size() && ib < b.size()) {
      if (a[ia] == b[ib]) {
        ++ia;
        ++ib;
      } else if (a[ia] < b[ib]) {
        ++diff;
        ++ia;
      } else {
        ++diff;
        ++ib;
      }
    }
    diff += (a.size() - ia) + (b.size() - ib);
    report.hamming[i] = diff;
  }
  report.identical =
      e1.sets.size() == e2.sets.size() &&
      std::all_of(report.hamming.begin(), report.hamming.end(),
                  [](std::uint64_t h) { return h == 0; });
  return report;
}

namespace detail {

inline std::uint64_t grid_dist2(const GridGeometry& g, std::uint32_t a,
                                std::uint32_t b) {
  std::uint64_t dx = g.x_of(a) > g.x_of(b) ? g.x_of(a) - g.x_of(b)
                                           : g.x_of(b) - g.x_of(a);
  std::uint64_t dy = g.y_of(a) > g.y_of(b) ? g.y_of(a) - g.y_of(b)
                                           : g.y_of(b) - g.y_of(a);
  if (g.boundary == cortex::Boundary::kTorus) {
    dx = std::min<std::uint64_t>(dx, g.width - dx);
    dy = std::min<std::uint64_t>(dy, g.height - dy);
  }
  return dx * dx + dy * dy;
}

}  // namespace detail

// Maximum over aligned ticks of the Jaccard index of the two runs'
// endogenous sets, restricted to cells outside the exclusion disc. A tick
// where both restricted sets are empty contributes 0, so dead runs do not
// score as similar.
inline double uniqueness(const GridGeometry& geometry,
                         const std::vector<Frame>& run_a,
                         const std::vector<Frame>& run_b,
                         std::uint32_t exclusion_center,
                         double exclusion_radius) {
  const std::size_t n = std::max(run_a.size(), run_b.size());
  const double r2 = exclusion_radius * exclusion_radius;
  auto outside = [&](std::uint32_t cell) {
    return static_cast<double>(
               detail::grid_dist2(geometry, exclusion_center, cell)) >= r2;
  };
  double max_jaccard = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> a;
    std::vector<std::uint32_t> b;
    if (i < run_a.size()) {
      if (run_a[i].modes.size() != geometry.cell_count()) {
        throw GeometryMismatch("run A frames do not match the geometry");
      }
      for (std::uint32_t cell : endogenous_set(run_a[i])) {
        if (outside(cell)) a.push_back(cell);
      }
    }
    if (i < run_b.size()) {
      if (run_b[i].modes.size() != geometry.cell_count()) {
        throw GeometryMismatch("run B frames do not match the geometry");
      }
      for (std::uint32_t cell : endogenous_set(run_b[i])) {
        if (outside(cell)) b.push_back(cell);
      }
    }
    std::size_t ia = 0;
    std::size_t ib = 0;
    std::size_t inter = 0;
    while (ia < a.size() && ib < b.size()) {
      if (a[ia] == b[ib]) {
        ++inter;
        ++ia;
        ++ib;
      } else if (a[ia] < b[ib]) {
        ++ia;
      } else {
        ++ib;
      }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    if (uni > 0) {
      max_jaccard = std::max(
          max_jaccard, static_cast<double>(inter) / static_cast<double>(uni));
    }
  }
  return max_jaccard;
}

// Least-squares slope of (tick, farthest endogenous cell from the origin),
// in cells per tick. Ticks without endogenous activity contribute no point;
// fewer than 5 points is an error.
inline double front_speed(const GridGeometry& geometry,
                          const std::vector<Frame>& frames,
                          std::uint32_t origin) {
  geometry.validate();
  if (origin >= geometry.cell_count()) {
    throw IndexOutOfRange("origin outside grid");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const Frame& frame : frames) {
    double max_dist = -1.0;
    for (std::uint32_t cell : endogenous_set(frame)) {
      max_dist = std::max(max_dist,
                          std::sqrt(static_cast<double>(
                              detail::grid_dist2(geometry, origin, cell))));
    }
    if (max_dist >= 0.0) {
      xs.push_back(static_cast<double>(frame.tick));
      ys.push_back(max_dist);
    }
  }
  if (xs.size() < 5) {
    throw InvalidArgument(
        "front_speed: needs at least 5 ticks of endogenous activity");
  }
  const double n = static_cast<double>(xs.size());
  const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
  }
  return sxy / sxx;
}

inline double activity_fraction(const Frame& frame) {
  std::size_t endo = 0;
  for (const cortex::NeuronMode& m : frame.modes) {
    if (m.kind == Mode::kEndogenous) ++endo;
  }
  return static_cast<double>(endo) / static_cast<double>(frame.modes.size());
}

// First tick whose endogenous activity fraction exceeds `band` for
// `sustain` consecutive ticks, or nothing.
inline std::optional<std::uint64_t> detect_self_excitation(
    const std::vector<Frame>& frames, double band, std::uint32_t sustain) {
  if (!(band > 0.0)) throw InvalidArgument("band must be positive");
  if (sustain < 1) throw InvalidArgument("sustain must be >= 1");
  std::uint32_t run = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (activity_fraction(frames[i]) > band) {
      if (++run >= sustain) return frames[i + 1 - run].tick;
    } else {
      run = 0;
    }
  }
  return std::nullopt;
}

}  // namespace pwave::analysis

#endif  // PWAVE_ANALYSIS_HPP
