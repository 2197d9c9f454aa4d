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

#ifndef PWAVE_FRAME_IO_HPP
#define PWAVE_FRAME_IO_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pwave/cortex.hpp"
#include "pwave/errors.hpp"

// Text formats with bit-exact output: the per-tick frame file and numeric
// formatting for the CSV writers. Newlines are always LF and numbers are
// rendered with std::to_chars, so output bytes never depend on locale.
//
// Frame file layout:
//   P-WAVE 1
//   <tick> <width> <height>
//   <height> rows of <width> characters:
//     '.' quiet, 'E' evoked, 'S' endogenous, 'r' relaxing

namespace pwave::io {

using cortex::Frame;
using cortex::GridGeometry;
using cortex::Mode;

inline constexpr std::string_view kFrameMagic = "P-WAVE 1";

inline char mode_char(Mode mode) {
  switch (mode) {
    case Mode::kQuiet:
      return '.';
    case Mode::kEvoked:
      return 'E';
    case Mode::kEndogenous:
      return 'S';
    case Mode::kRelaxing:
      return 'r';
  }
  return '?';
}

// Shortest decimal form that round-trips; integers drop the exponent.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string format_frame(const GridGeometry& geometry,
                                const Frame& frame) {
  if (frame.modes.size() != geometry.cell_count()) {
    throw GeometryMismatch("frame does not match the geometry");
  }
  std::string out;
  out.reserve(frame.modes.size() + geometry.height + 48);
  out += kFrameMagic;
  out += '\n';
  out += std::to_string(frame.tick);
  out += ' ';
  out += std::to_string(geometry.width);
  out += ' ';
  out += std::to_string(geometry.height);
  out += '\n';
  for (std::uint32_t y = 0; y < geometry.height; ++y) {
    for (std::uint32_t x = 0; x < geometry.width; ++x) {
      out += mode_char(frame.modes[geometry.index_of(x, y)].kind);
    }
    out += '\n';
  }
  return out;
}

struct ParsedFrame {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  Frame frame;
};

// Parses a frame file. Relaxing cells come back with ticks_remaining 1:
// the countdown is not part of the interchange format.
inline ParsedFrame parse_frame(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kFrameMagic) {
    throw InvalidArgument("not a frame file (bad magic)");
  }
  ParsedFrame parsed;
  std::uint64_t tick = 0;
  if (!(in >> tick >> parsed.width >> parsed.height)) {
    throw InvalidArgument("frame header is malformed");
  }
  std::getline(in, line);  // consume the rest of the header line
  parsed.frame.tick = tick;
  parsed.frame.modes.resize(static_cast<std::size_t>(parsed.width) *
                            parsed.height);
  for (std::uint32_t y = 0; y < parsed.height; ++y) {
    if (!std::getline(in, line) || line.size() != parsed.width) {
      throw InvalidArgument("frame row " + std::to_string(y) +
                            " is malformed");
    }
    for (std::uint32_t x = 0; x < parsed.width; ++x) {
      cortex::NeuronMode mode;
      switch (line[x]) {
        case '.':
          mode = {Mode::kQuiet, 0};
          break;
        case 'E':
          mode = {Mode::kEvoked, 0};
          break;
        case 'S':
          mode = {Mode::kEndogenous, 0};
          break;
        case 'r':
          mode = {Mode::kRelaxing, 1};
          break;
        default:
          throw InvalidArgument("unknown cell character in frame row");
      }
      parsed.frame.modes[static_cast<std::size_t>(y) * parsed.width + x] = mode;
    }
  }
  return parsed;
}

inline std::string frame_filename(std::uint64_t tick) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06llu.txt",
                static_cast<unsigned long long>(tick));
  return buf;
}

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error("write failed: " + path.string());
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_frame_file(const std::filesystem::path& dir,
                             const GridGeometry& geometry,
                             const Frame& frame) {
  write_text_file(dir / frame_filename(frame.tick),
                  format_frame(geometry, frame));
}

}  // namespace pwave::io

#endif  // PWAVE_FRAME_IO_HPP
