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

#ifndef PWAVE_WAVESIM_HPP
#define PWAVE_WAVESIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwave/cortex.hpp"
#include "pwave/errors.hpp"
#include "pwave/rng.hpp"

// The discrete-time engine. Each tick is a synchronous two-phase update
// computed entirely from the previous frame:
//
//   1. endogenous cells enter relaxation for t_relax ticks;
//   2. relaxing cells count down, reaching quiet after t_relax ticks;
//   3. a quiet, unclamped cell whose tracking field holds at least a_min
//      active cells recognizes the local pattern: a positive-trace match
//      fires, a negative-trace match stays quiet, and a novel pattern
//      draws u = prf(seed, cell, local-pattern-hash) and fires iff
//      u < p_in, recording the outcome either way. Keying the draw on the
//      observed pattern instead of the tick makes a cell's endogenous
//      response a fixed property of (cell, surround signal): the same cell
//      answers the same local pattern the same way forever, and distinct
//      waves make independent draws even on the same cortex seed;
//   4. clamped (evoked) cells are reapplied;
//   5. tunnel targets are overwritten from the paired source cells of the
//      coupled zone, one tick delayed.
//
// Randomness is counter-based, so the frame sequence is a pure function of
// (initial state, seed, evoked schedule, tunnel definition).

namespace pwave::wavesim {

using cortex::Boundary;
using cortex::Frame;
using cortex::GridGeometry;
using cortex::Mode;
using cortex::NeuronMemory;
using cortex::SimParams;

namespace detail {

// Canonical fingerprint of a local activity pattern (sorted member list).
inline std::uint64_t local_pattern_hash(
    const std::vector<std::uint32_t>& members) {
  std::uint64_t h = 0x70776176ULL;
  for (std::uint32_t m : members) h = rng::fold(h, m);
  return h;
}

inline std::uint64_t wrapped_dist2(const GridGeometry& g, std::uint32_t a,
                                   std::uint32_t b) {
  std::uint64_t dx = g.x_of(a) > g.x_of(b) ? g.x_of(a) - g.x_of(b)
                                           : g.x_of(b) - g.x_of(a);
  std::uint64_t dy = g.y_of(a) > g.y_of(b) ? g.y_of(a) - g.y_of(b)
                                           : g.y_of(b) - g.y_of(a);
  if (g.boundary == Boundary::kTorus) {
    dx = std::min<std::uint64_t>(dx, g.width - dx);
    dy = std::min<std::uint64_t>(dy, g.height - dy);
  }
  return dx * dx + dy * dy;
}

}  // namespace detail

// True iff every cell fits inside one disc of radius r_obs (strict, like a
// tracking field). Candidate centers are grid cells.
inline bool is_compact(const GridGeometry& geometry,
                       const std::vector<std::uint32_t>& cells) {
  if (cells.size() <= 1) return true;
  const double r2 = geometry.r_obs * geometry.r_obs;
  for (std::uint32_t center = 0; center < geometry.cell_count(); ++center) {
    bool ok = true;
    for (std::uint32_t cell : cells) {
      if (static_cast<double>(detail::wrapped_dist2(geometry, center, cell)) >=
          r2) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Cells within distance `radius` of (cx, cy), sorted by index.
inline std::vector<std::uint32_t> disc_cells(const GridGeometry& geometry,
                                             std::uint32_t cx, std::uint32_t cy,
                                             double radius) {
  geometry.validate();
  if (cx >= geometry.width || cy >= geometry.height) {
    throw IndexOutOfRange("disc center outside grid");
  }
  const std::uint32_t center = geometry.index_of(cx, cy);
  const double r2 = radius * radius;
  std::vector<std::uint32_t> cells;
  for (std::uint32_t i = 0; i < geometry.cell_count(); ++i) {
    if (static_cast<double>(detail::wrapped_dist2(geometry, center, i)) < r2) {
      cells.push_back(i);
    }
  }
  return cells;
}

// n distinct cells of a disc, drawn by a seeded partial shuffle.
inline std::vector<std::uint32_t> disc_pattern(const GridGeometry& geometry,
                                               std::uint32_t cx,
                                               std::uint32_t cy, double radius,
                                               std::uint32_t n,
                                               std::uint64_t seed) {
  std::vector<std::uint32_t> pool = disc_cells(geometry, cx, cy, radius);
  if (n > pool.size()) {
    throw InvalidArgument("disc holds " + std::to_string(pool.size()) +
                          " cells, cannot pick " + std::to_string(n));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint64_t r = rng::bounded(
        rng::hash(seed, rng::Stream::kPattern, i), pool.size() - i);
    std::swap(pool[i], pool[i + r]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

// Per-tick external overwrite of a set of cells (used by tunnels).
struct Injection {
  const std::vector<std::uint8_t>* excluded = nullptr;  // skip in rule 3
  std::vector<std::pair<std::uint32_t, bool>> writes;   // cell -> active?
};

class CortexState {
 public:
  CortexState() = default;

  CortexState(GridGeometry geometry, SimParams params)
      : geometry_(geometry), params_(params) {
    geometry_.validate();
    params_.validate();
    if (params_.t_relax > 65535) {
      throw InvalidArgument("t_relax must fit in 16 bits");
    }
    const std::uint32_t n = geometry_.cell_count();
    frame_.tick = 0;
    frame_.modes.assign(n, {});
    memories_.assign(n, {});
    evoked_mask_.assign(n, 0);
    offsets_ = cortex::field_offsets(geometry_.r_obs);
  }

  const GridGeometry& geometry() const { return geometry_; }
  const SimParams& params() const { return params_; }
  const Frame& frame() const { return frame_; }
  std::uint64_t tick() const { return frame_.tick; }
  const std::vector<NeuronMemory>& memories() const { return memories_; }
  const std::vector<std::uint32_t>& evoked_set() const { return evoked_; }

  std::uint64_t total_trace_count() const {
    std::uint64_t total = 0;
    for (const NeuronMemory& m : memories_) total += m.trace_count();
    return total;
  }

  // Clamps the pattern to evoked mode, effective immediately in the current
  // frame and every subsequent one until clear_evoked. The pattern must fit
  // inside one tracking-field-sized disc.
  void set_evoked(const std::vector<std::uint32_t>& pattern) {
    for (std::uint32_t cell : pattern) {
      if (cell >= geometry_.cell_count()) {
        throw IndexOutOfRange("evoked cell outside grid");
      }
    }
    if (!is_compact(geometry_, pattern)) {
      throw NonCompactPattern(
          "evoked pattern does not fit in a disc of radius r_obs");
    }
    for (std::uint32_t cell : pattern) {
      if (!evoked_mask_[cell]) {
        evoked_mask_[cell] = 1;
        evoked_.push_back(cell);
      }
      frame_.modes[cell] = {Mode::kEvoked, 0};
    }
    std::sort(evoked_.begin(), evoked_.end());
  }

  void clear_evoked() {
    for (std::uint32_t cell : evoked_) evoked_mask_[cell] = 0;
    evoked_.clear();
  }

  // One synchronous tick. The optional injection implements tunnel copies.
  void step(const Injection* injection = nullptr) {
    const std::uint32_t n = geometry_.cell_count();
    next_modes_.assign(n, {});

    // Rules 1-2: relaxation bookkeeping from the previous frame.
    for (std::uint32_t i = 0; i < n; ++i) {
      const cortex::NeuronMode prev = frame_.modes[i];
      switch (prev.kind) {
        case Mode::kEndogenous:
          next_modes_[i] = {Mode::kRelaxing,
                            static_cast<std::uint16_t>(params_.t_relax)};
          break;
        case Mode::kRelaxing:
          if (prev.ticks_remaining > 1) {
            next_modes_[i] = {Mode::kRelaxing,
                              static_cast<std::uint16_t>(prev.ticks_remaining -
                                                         1)};
          }
          break;
        default:
          break;  // quiet stays quiet; evoked decays unless reclamped
      }
    }

    scatter_active_counts();

    // Rule 3: activation and memorization for eligible quiet cells.
    for (std::uint32_t i = 0; i < n; ++i) {
      if (frame_.modes[i].kind != Mode::kQuiet) continue;
      if (evoked_mask_[i]) continue;
      if (injection && injection->excluded && (*injection->excluded)[i]) {
        continue;
      }
      if (counts_[i] < params_.a_min) continue;
      switch (cortex::recognize(frame_, memories_[i], params_.k_act)) {
        case cortex::Recognition::kFire:
          next_modes_[i] = {Mode::kEndogenous, 0};
          break;
        case cortex::Recognition::kSuppress:
          break;
        case cortex::Recognition::kNovel: {
          field_into(i, field_scratch_);
          cortex::MemoryTrace trace = cortex::trace_of(frame_, field_scratch_);
          const double u = rng::to_unit(
              rng::hash(params_.seed, rng::Stream::kStep, i,
                        detail::local_pattern_hash(trace.members)));
          const bool fired = u < params_.p_in;
          cortex::append_trace(std::move(trace), fired, memories_[i],
                               params_.memory_capacity);
          if (fired) next_modes_[i] = {Mode::kEndogenous, 0};
          break;
        }
      }
    }

    // Rule 4: evoked clamps.
    for (std::uint32_t cell : evoked_) {
      next_modes_[cell] = {Mode::kEvoked, 0};
    }

    // Rule 5: tunnel copies overwrite last.
    if (injection) {
      for (const auto& [cell, active] : injection->writes) {
        next_modes_[cell] = active ? cortex::NeuronMode{Mode::kEvoked, 0}
                                   : cortex::NeuronMode{};
      }
    }

    frame_.modes.swap(next_modes_);
    ++frame_.tick;
  }

  std::vector<Frame> run(std::uint64_t ticks) {
    if (ticks < 1) throw InvalidArgument("run: ticks must be >= 1");
    std::vector<Frame> frames;
    frames.reserve(ticks);
    for (std::uint64_t t = 0; t < ticks; ++t) {
      step();
      frames.push_back(frame_);
    }
    return frames;
  }

  bool equal_state(const CortexState& other) const {
    return geometry_ == other.geometry_ && frame_ == other.frame_ &&
           memories_ == other.memories_ && evoked_ == other.evoked_;
  }

  // Restores a snapshot. Inputs must already be mutually consistent.
  void restore(Frame frame, std::vector<NeuronMemory> memories,
               std::vector<std::uint32_t> evoked) {
    const std::uint32_t n = geometry_.cell_count();
    if (frame.modes.size() != n || memories.size() != n) {
      throw DimensionMismatch("snapshot does not match the grid");
    }
    frame_ = std::move(frame);
    memories_ = std::move(memories);
    evoked_ = std::move(evoked);
    evoked_mask_.assign(n, 0);
    for (std::uint32_t cell : evoked_) {
      if (cell >= n) throw IndexOutOfRange("evoked cell outside grid");
      evoked_mask_[cell] = 1;
    }
  }

 private:
  void scatter_active_counts() {
    const int w = static_cast<int>(geometry_.width);
    const int h = static_cast<int>(geometry_.height);
    counts_.assign(geometry_.cell_count(), 0);
    const bool torus = geometry_.boundary == Boundary::kTorus;
    for (std::uint32_t i = 0; i < frame_.modes.size(); ++i) {
      if (!frame_.active(i)) continue;
      const int xi = static_cast<int>(geometry_.x_of(i));
      const int yi = static_cast<int>(geometry_.y_of(i));
      for (const auto& [dx, dy] : offsets_) {
        int x = xi + dx;
        int y = yi + dy;
        if (torus) {
          x = ((x % w) + w) % w;
          y = ((y % h) + h) % h;
        } else if (x < 0 || x >= w || y < 0 || y >= h) {
          continue;
        }
        ++counts_[static_cast<std::uint32_t>(y) * geometry_.width +
                  static_cast<std::uint32_t>(x)];
      }
    }
  }

  void field_into(std::uint32_t i, std::vector<std::uint32_t>& out) const {
    out.clear();
    const int w = static_cast<int>(geometry_.width);
    const int h = static_cast<int>(geometry_.height);
    const int xi = static_cast<int>(geometry_.x_of(i));
    const int yi = static_cast<int>(geometry_.y_of(i));
    const bool torus = geometry_.boundary == Boundary::kTorus;
    for (const auto& [dx, dy] : offsets_) {
      int x = xi + dx;
      int y = yi + dy;
      if (torus) {
        x = ((x % w) + w) % w;
        y = ((y % h) + h) % h;
      } else if (x < 0 || x >= w || y < 0 || y >= h) {
        continue;
      }
      out.push_back(static_cast<std::uint32_t>(y) * geometry_.width +
                    static_cast<std::uint32_t>(x));
    }
  }

  GridGeometry geometry_;
  SimParams params_;
  Frame frame_;
  std::vector<NeuronMemory> memories_;
  std::vector<std::uint32_t> evoked_;
  std::vector<std::uint8_t> evoked_mask_;

  // Scratch, not part of the value.
  std::vector<std::pair<int, int>> offsets_;
  std::vector<cortex::NeuronMode> next_modes_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> field_scratch_;
};

inline bool any_endogenous(const Frame& frame) {
  for (const cortex::NeuronMode& m : frame.modes) {
    if (m.kind == Mode::kEndogenous) return true;
  }
  return false;
}

inline bool endogenous_sets_equal(const Frame& a, const Frame& b) {
  if (a.modes.size() != b.modes.size()) return false;
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    if ((a.modes[i].kind == Mode::kEndogenous) !=
        (b.modes[i].kind == Mode::kEndogenous)) {
      return false;
    }
  }
  return true;
}

struct TrainResult {
  std::uint32_t emissions = 0;       // wave starts observed, converged last
  std::vector<Frame> canonical;      // one full period of the stable wave
};

// Clamps the pattern and steps until two consecutive emissions replay the
// same endogenous activity tick for tick. An emission starts at the first
// endogenous spike after at least one silent tick; the recorded chunk runs
// from one start to the next, so equality of chunks is exact periodicity.
//
// Damping: t_relax consecutive endogenous-silent ticks while clamped means
// no wave is coming back (a healthy replay restarts after a gap of
// t_relax + 2 - duration < t_relax ticks).
inline TrainResult train(CortexState& state,
                         const std::vector<std::uint32_t>& pattern,
                         std::uint32_t max_emissions) {
  if (max_emissions < 2) {
    throw InvalidArgument("train: max_emissions must be >= 2");
  }
  state.set_evoked(pattern);

  const GridGeometry& g = state.geometry();
  const std::uint32_t t_relax = state.params().t_relax;
  const std::uint64_t period_bound =
      static_cast<std::uint64_t>(
          std::ceil(std::hypot(static_cast<double>(g.width),
                               static_cast<double>(g.height)))) +
      2ULL * t_relax + 8;
  const std::uint64_t tick_budget =
      (static_cast<std::uint64_t>(max_emissions) + 2) * period_bound;

  std::vector<Frame> previous_chunk;
  std::vector<Frame> current_chunk;
  bool chunk_open = false;
  std::uint32_t emissions = 0;
  std::uint32_t silent = 0;
  bool silent_since_spike = true;

  auto chunks_equal = [](const std::vector<Frame>& a,
                         const std::vector<Frame>& b) {
    if (a.empty() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!endogenous_sets_equal(a[i], b[i])) return false;
    }
    return true;
  };

  for (std::uint64_t elapsed = 0; elapsed < tick_budget; ++elapsed) {
    state.step();
    const bool endo = any_endogenous(state.frame());
    if (endo) {
      if (silent_since_spike) {
        // Wave start: close the previous chunk and compare.
        if (chunk_open) {
          if (chunks_equal(previous_chunk, current_chunk)) {
            TrainResult result;
            result.emissions = emissions;
            result.canonical = std::move(current_chunk);
            return result;
          }
          previous_chunk = std::move(current_chunk);
          current_chunk.clear();
        }
        chunk_open = true;
        ++emissions;
        if (emissions > max_emissions) {
          throw NotConverged("no stable wave within " +
                             std::to_string(max_emissions) + " emissions");
        }
      }
      silent = 0;
      silent_since_spike = false;
    } else {
      ++silent;
      silent_since_spike = true;
      if (silent >= t_relax) {
        throw WaveDamped("the wave is damped: " + std::to_string(silent) +
                         " endogenous-silent ticks while clamped");
      }
    }
    if (chunk_open) current_chunk.push_back(state.frame());
  }
  throw NotConverged("tick budget exhausted before a stable wave");
}

// Index mapping that copies a compact source region's activity into a
// target region of another zone each tick. Pair k couples
// source[k] -> target[perm[k]]; dropped pairs leave the target cell to its
// own dynamics.
struct Tunnel {
  std::vector<std::uint32_t> source;
  std::vector<std::uint32_t> target;
  std::vector<std::uint32_t> perm;
  std::vector<std::uint8_t> dropped;
  double dropout = 0.0;
};

enum class PermutationMode { kIdentity, kRandom };

inline Tunnel make_tunnel(const GridGeometry& geom_a, std::uint32_t src_cx,
                          std::uint32_t src_cy, const GridGeometry& geom_b,
                          std::uint32_t dst_cx, std::uint32_t dst_cy,
                          double radius, PermutationMode mode,
                          std::uint64_t perm_seed, double dropout,
                          std::uint64_t dropout_seed) {
  Tunnel tunnel;
  tunnel.source = disc_cells(geom_a, src_cx, src_cy, radius);
  tunnel.target = disc_cells(geom_b, dst_cx, dst_cy, radius);
  if (tunnel.source.size() != tunnel.target.size()) {
    throw GeometryMismatch(
        "tunnel regions have different sizes (clipped by a boundary?)");
  }
  const std::size_t n = tunnel.source.size();
  tunnel.perm.resize(n);
  std::iota(tunnel.perm.begin(), tunnel.perm.end(), 0);
  if (mode == PermutationMode::kRandom) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::uint64_t r = rng::bounded(
          rng::hash(perm_seed, rng::Stream::kPermutation, i), n - i);
      std::swap(tunnel.perm[i], tunnel.perm[i + r]);
    }
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw InvalidArgument("dropout must be in [0, 1)");
  }
  tunnel.dropout = dropout;
  tunnel.dropped.assign(n, 0);
  const std::size_t n_drop =
      static_cast<std::size_t>(std::llround(dropout * static_cast<double>(n)));
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < n_drop; ++i) {
    const std::uint64_t r =
        rng::bounded(rng::hash(dropout_seed, rng::Stream::kDropout, i), n - i);
    std::swap(order[i], order[i + r]);
    tunnel.dropped[order[i]] = 1;
  }
  return tunnel;
}

// Two zones advanced in lock step, with the tunnel copied each tick.
class CoupledCortex {
 public:
  CoupledCortex(CortexState zone_a, CortexState zone_b, Tunnel tunnel)
      : a_(std::move(zone_a)), b_(std::move(zone_b)), tunnel_(std::move(tunnel)) {
    const std::size_t n = tunnel_.source.size();
    if (tunnel_.target.size() != n || tunnel_.perm.size() != n ||
        tunnel_.dropped.size() != n) {
      throw GeometryMismatch("tunnel pair lists have mismatched lengths");
    }
    for (std::uint32_t cell : tunnel_.source) {
      if (cell >= a_.geometry().cell_count()) {
        throw GeometryMismatch("tunnel source cell outside zone A");
      }
    }
    for (std::uint32_t cell : tunnel_.target) {
      if (cell >= b_.geometry().cell_count()) {
        throw GeometryMismatch("tunnel target cell outside zone B");
      }
    }
    std::vector<std::uint8_t> seen(tunnel_.source.size(), 0);
    for (std::uint32_t p : tunnel_.perm) {
      if (p >= n || seen[p]) {
        throw GeometryMismatch("tunnel permutation is not a bijection");
      }
      seen[p] = 1;
    }
    if (!is_compact(a_.geometry(), tunnel_.source) ||
        !is_compact(b_.geometry(), tunnel_.target)) {
      throw GeometryMismatch("tunnel regions must be compact");
    }
    excluded_.assign(b_.geometry().cell_count(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      if (tunnel_.dropped[k]) continue;
      live_pairs_.emplace_back(tunnel_.source[k],
                               tunnel_.target[tunnel_.perm[k]]);
      excluded_[tunnel_.target[tunnel_.perm[k]]] = 1;
    }
  }

  CortexState& a() { return a_; }
  CortexState& b() { return b_; }
  const CortexState& a() const { return a_; }
  const CortexState& b() const { return b_; }
  const Tunnel& tunnel() const { return tunnel_; }

  void step() {
    Injection injection;
    injection.excluded = &excluded_;
    injection.writes.reserve(live_pairs_.size());
    for (const auto& [src, dst] : live_pairs_) {
      injection.writes.emplace_back(dst, a_.frame().active(src));
    }
    a_.step();
    b_.step(&injection);
  }

  std::pair<std::vector<Frame>, std::vector<Frame>> run(std::uint64_t ticks) {
    if (ticks < 1) throw InvalidArgument("run: ticks must be >= 1");
    std::vector<Frame> frames_a;
    std::vector<Frame> frames_b;
    frames_a.reserve(ticks);
    frames_b.reserve(ticks);
    for (std::uint64_t t = 0; t < ticks; ++t) {
      step();
      frames_a.push_back(a_.frame());
      frames_b.push_back(b_.frame());
    }
    return {std::move(frames_a), std::move(frames_b)};
  }

 private:
  CortexState a_;
  CortexState b_;
  Tunnel tunnel_;
  std::vector<std::uint8_t> excluded_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> live_pairs_;
};

inline CoupledCortex attach_tunnel(CortexState zone_a, CortexState zone_b,
                                   Tunnel tunnel) {
  return CoupledCortex(std::move(zone_a), std::move(zone_b), std::move(tunnel));
}

}  // namespace pwave::wavesim

#endif  // PWAVE_WAVESIM_HPP
