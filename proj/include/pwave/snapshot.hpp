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

#ifndef PWAVE_SNAPSHOT_HPP
#define PWAVE_SNAPSHOT_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pwave/cortex.hpp"
#include "pwave/errors.hpp"
#include "pwave/frame_io.hpp"
#include "pwave/wavesim.hpp"

// Versioned text snapshot of a full cortex state: geometry, parameters,
// current frame (including relaxation countdowns), clamped cells, and every
// memory trace. save/load round-trips exactly; doubles are written with
// shortest round-trip formatting.

namespace pwave::snapshot {

inline constexpr std::string_view kMagic = "PWAVE-STATE 1";

inline std::string save_state(const wavesim::CortexState& state) {
  const cortex::GridGeometry& g = state.geometry();
  const cortex::SimParams& p = state.params();
  std::string out;
  out += kMagic;
  out += '\n';
  out += "grid " + std::to_string(g.width) + ' ' + std::to_string(g.height) +
         ' ' + io::format_double(g.r_obs) + ' ' +
         (g.boundary == cortex::Boundary::kWalls ? "walls" : "torus") + '\n';
  out += "params " + io::format_double(p.p_in) + ' ' +
         std::to_string(p.a_min) + ' ' + std::to_string(p.k_act) + ' ' +
         std::to_string(p.t_relax) + ' ' + std::to_string(p.seed) + ' ' +
         std::to_string(p.memory_capacity) + '\n';
  out += "tick " + std::to_string(state.tick()) + '\n';
  out += "evoked " + std::to_string(state.evoked_set().size());
  for (std::uint32_t cell : state.evoked_set()) {
    out += ' ';
    out += std::to_string(cell);
  }
  out += '\n';
  const cortex::Frame& frame = state.frame();
  for (std::uint32_t y = 0; y < g.height; ++y) {
    for (std::uint32_t x = 0; x < g.width; ++x) {
      out += io::mode_char(frame.modes[g.index_of(x, y)].kind);
    }
    out += '\n';
  }
  // Relaxation countdowns, cell:remaining for every relaxing cell.
  std::string relax;
  std::uint32_t relax_count = 0;
  for (std::uint32_t i = 0; i < frame.modes.size(); ++i) {
    if (frame.modes[i].kind == cortex::Mode::kRelaxing) {
      relax += ' ' + std::to_string(i) + ':' +
               std::to_string(frame.modes[i].ticks_remaining);
      ++relax_count;
    }
  }
  out += "relax " + std::to_string(relax_count) + relax + '\n';
  for (std::uint32_t i = 0; i < state.memories().size(); ++i) {
    const cortex::NeuronMemory& memory = state.memories()[i];
    auto emit = [&](const cortex::MemoryTrace& trace, char sign) {
      out += "trace " + std::to_string(i) + ' ' + sign + ' ' +
             std::to_string(trace.members.size());
      for (std::uint32_t m : trace.members) {
        out += ' ';
        out += std::to_string(m);
      }
      out += '\n';
    };
    for (const auto& trace : memory.positive) emit(trace, '+');
    for (const auto& trace : memory.negative) emit(trace, '-');
  }
  out += "end\n";
  return out;
}

inline wavesim::CortexState load_state(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw InvalidArgument("not a state snapshot (bad magic)");
  }

  cortex::GridGeometry geometry;
  cortex::SimParams params;
  std::string word;
  std::string boundary;
  if (!(in >> word >> geometry.width >> geometry.height >> geometry.r_obs >>
        boundary) ||
      word != "grid") {
    throw InvalidArgument("snapshot grid line is malformed");
  }
  if (boundary == "walls") {
    geometry.boundary = cortex::Boundary::kWalls;
  } else if (boundary == "torus") {
    geometry.boundary = cortex::Boundary::kTorus;
  } else {
    throw InvalidArgument("snapshot boundary must be walls or torus");
  }
  if (!(in >> word >> params.p_in >> params.a_min >> params.k_act >>
        params.t_relax >> params.seed >> params.memory_capacity) ||
      word != "params") {
    throw InvalidArgument("snapshot params line is malformed");
  }
  std::uint64_t tick = 0;
  if (!(in >> word >> tick) || word != "tick") {
    throw InvalidArgument("snapshot tick line is malformed");
  }
  std::size_t evoked_count = 0;
  if (!(in >> word >> evoked_count) || word != "evoked") {
    throw InvalidArgument("snapshot evoked line is malformed");
  }
  std::vector<std::uint32_t> evoked(evoked_count);
  for (auto& cell : evoked) {
    if (!(in >> cell)) throw InvalidArgument("snapshot evoked list truncated");
  }
  std::getline(in, line);

  cortex::Frame frame;
  frame.tick = tick;
  frame.modes.resize(static_cast<std::size_t>(geometry.width) *
                     geometry.height);
  for (std::uint32_t y = 0; y < geometry.height; ++y) {
    if (!std::getline(in, line) || line.size() != geometry.width) {
      throw InvalidArgument("snapshot mode row is malformed");
    }
    for (std::uint32_t x = 0; x < geometry.width; ++x) {
      cortex::NeuronMode mode;
      switch (line[x]) {
        case '.': mode = {cortex::Mode::kQuiet, 0}; break;
        case 'E': mode = {cortex::Mode::kEvoked, 0}; break;
        case 'S': mode = {cortex::Mode::kEndogenous, 0}; break;
        case 'r': mode = {cortex::Mode::kRelaxing, 1}; break;
        default:
          throw InvalidArgument("snapshot mode row has unknown character");
      }
      frame.modes[static_cast<std::size_t>(y) * geometry.width + x] = mode;
    }
  }
  std::size_t relax_count = 0;
  if (!(in >> word >> relax_count) || word != "relax") {
    throw InvalidArgument("snapshot relax line is malformed");
  }
  for (std::size_t i = 0; i < relax_count; ++i) {
    std::string pair;
    if (!(in >> pair)) throw InvalidArgument("snapshot relax list truncated");
    const std::size_t colon = pair.find(':');
    if (colon == std::string::npos) {
      throw InvalidArgument("snapshot relax entry is malformed");
    }
    const std::uint32_t cell =
        static_cast<std::uint32_t>(std::stoul(pair.substr(0, colon)));
    const std::uint32_t remaining =
        static_cast<std::uint32_t>(std::stoul(pair.substr(colon + 1)));
    if (cell >= frame.modes.size() ||
        frame.modes[cell].kind != cortex::Mode::kRelaxing) {
      throw InvalidArgument("snapshot relax entry does not match the grid");
    }
    frame.modes[cell].ticks_remaining = static_cast<std::uint16_t>(remaining);
  }

  std::vector<cortex::NeuronMemory> memories(frame.modes.size());
  while (in >> word) {
    if (word == "end") break;
    if (word != "trace") {
      throw InvalidArgument("snapshot expected a trace line, got " + word);
    }
    std::uint32_t neuron = 0;
    char sign = 0;
    std::size_t count = 0;
    if (!(in >> neuron >> sign >> count) || neuron >= memories.size() ||
        (sign != '+' && sign != '-')) {
      throw InvalidArgument("snapshot trace line is malformed");
    }
    cortex::MemoryTrace trace;
    trace.members.resize(count);
    for (auto& m : trace.members) {
      if (!(in >> m)) throw InvalidArgument("snapshot trace truncated");
    }
    (sign == '+' ? memories[neuron].positive : memories[neuron].negative)
        .push_back(std::move(trace));
  }
  if (word != "end") {
    throw InvalidArgument("snapshot missing end marker");
  }

  wavesim::CortexState state(geometry, params);
  state.restore(std::move(frame), std::move(memories), std::move(evoked));
  return state;
}

}  // namespace pwave::snapshot

#endif  // PWAVE_SNAPSHOT_HPP
