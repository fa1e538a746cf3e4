// Copyright 2026 The rawbench Authors. All Rights Reserved.
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

#ifndef RAWBENCH_WAV_HPP_
#define RAWBENCH_WAV_HPP_

// RIFF/WAVE reader and writer. Reads 16/24/32-bit PCM and 32/64-bit IEEE
// float (plain or WAVE_FORMAT_EXTENSIBLE); writes 16-bit, 24-bit PCM or
// 32-bit float. Multichannel input is mixed down to mono by unweighted mean.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "rawbench/audio_clip.hpp"
#include "rawbench/error.hpp"
#include "rawbench/log.hpp"

namespace rawbench {

enum class WavDepth { kPcm16 = 16, kPcm24 = 24, kFloat32 = 32 };

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  bool is_float = false;
  std::size_t frames = 0;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

inline std::uint32_t read_u32(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
         (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

struct ParsedWav {
  WavInfo info;
  std::size_t data_offset = 0;
  std::uint32_t data_chunk_size = 0;
};

[[noreturn]] inline void unsupported(const std::filesystem::path& path,
                                     const std::string& why) {
  throw IoError("unsupported encoding: " + path.string() + " (" + why + ")");
}

inline ParsedWav parse_wav_header(const std::vector<unsigned char>& bytes,
                                  const std::filesystem::path& path) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    unsupported(path, "not a RIFF/WAVE file");
  }
  ParsedWav parsed;
  bool have_fmt = false;
  int format_tag = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > bytes.size()) {
        unsupported(path, "truncated fmt chunk");
      }
      const unsigned char* f = bytes.data() + body;
      format_tag = read_u16(f);
      parsed.info.channels = read_u16(f + 2);
      parsed.info.sample_rate = static_cast<int>(read_u32(f + 4));
      parsed.info.bits_per_sample = read_u16(f + 14);
      if (format_tag == 0xFFFE) {
        if (chunk_size < 40 || body + 40 > bytes.size()) {
          unsupported(path, "truncated extensible fmt chunk");
        }
        format_tag = read_u16(f + 24);  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) unsupported(path, "data chunk before fmt chunk");
      parsed.data_offset = body;
      parsed.data_chunk_size = chunk_size;
      const std::size_t available = bytes.size() - body;
      const std::size_t declared =
          chunk_size == 0xFFFFFFFFu ? available : std::min<std::size_t>(chunk_size, available);
      const int bytes_per_sample = parsed.info.bits_per_sample / 8;
      if (parsed.info.channels <= 0 || bytes_per_sample <= 0) {
        unsupported(path, "invalid channel count or sample width");
      }
      parsed.info.frames =
          declared / (static_cast<std::size_t>(bytes_per_sample) * parsed.info.channels);
      break;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!have_fmt || parsed.data_offset == 0) unsupported(path, "missing fmt or data chunk");
  if (parsed.info.sample_rate <= 0) unsupported(path, "invalid sample rate");

  const int bits = parsed.info.bits_per_sample;
  if (format_tag == 1 && (bits == 16 || bits == 24 || bits == 32)) {
    parsed.info.is_float = false;
  } else if (format_tag == 3 && (bits == 32 || bits == 64)) {
    parsed.info.is_float = true;
  } else {
    unsupported(path, "format tag " + std::to_string(format_tag) + " with " +
                          std::to_string(bits) + " bits");
  }
  return parsed;
}

inline std::vector<unsigned char> read_file(const std::filesystem::path& path,
                                            std::size_t limit = 0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file: " + path.string());
  std::vector<unsigned char> bytes;
  if (limit > 0) {
    bytes.resize(limit);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(limit));
    bytes.resize(static_cast<std::size_t>(in.gcount()));
  } else {
    bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return bytes;
}

inline double decode_sample(const unsigned char* p, const WavInfo& info) {
  switch (info.bits_per_sample) {
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      if (info.is_float) {
        float f;
        std::memcpy(&f, p, 4);
        return f;
      }
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
    case 64: {
      double d;
      std::memcpy(&d, p, 8);
      return d;
    }
  }
  return 0.0;
}

inline void append_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline void append_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

}  // namespace detail

// Reads the header region only; the frame count comes from the declared data
// size, capped by the file size.
inline WavInfo probe_wav(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("missing audio file: " + path.string());
  }
  const auto bytes = detail::read_file(path, 1 << 16);
  auto parsed = detail::parse_wav_header(bytes, path);
  const std::size_t file_size = std::filesystem::file_size(path);
  const std::size_t available = file_size - std::min(file_size, parsed.data_offset);
  const std::size_t declared = parsed.data_chunk_size == 0xFFFFFFFFu
                                   ? available
                                   : std::min<std::size_t>(parsed.data_chunk_size, available);
  parsed.info.frames = declared / (static_cast<std::size_t>(parsed.info.bits_per_sample / 8) *
                                   static_cast<std::size_t>(parsed.info.channels));
  return parsed.info;
}

inline AudioClip load_wav(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("missing audio file: " + path.string());
  }
  const auto bytes = detail::read_file(path);
  const auto parsed = detail::parse_wav_header(bytes, path);
  const WavInfo& info = parsed.info;
  if (info.frames == 0) throw IoError("zero-length audio: " + path.string());

  const std::size_t width = static_cast<std::size_t>(info.bits_per_sample / 8);
  const std::size_t stride = width * info.channels;
  std::vector<double> mono(info.frames);
  const unsigned char* data = bytes.data() + parsed.data_offset;
  for (std::size_t frame = 0; frame < info.frames; ++frame) {
    double sum = 0.0;
    for (int ch = 0; ch < info.channels; ++ch) {
      sum += detail::decode_sample(data + frame * stride + ch * width, info);
    }
    const double v = sum / info.channels;
    mono[frame] = std::isfinite(v) ? v : 0.0;
  }
  return AudioClip(std::move(mono), info.sample_rate, info.bits_per_sample);
}

// Integer depths hard-clip at +-(1 - 1 LSB); the clip count is logged.
inline void save_wav(const AudioClip& clip, const std::filesystem::path& path,
                     WavDepth depth) {
  const int bits = static_cast<int>(depth);
  const std::size_t width = static_cast<std::size_t>(bits / 8);
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.size() * width);

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  const auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  tag("RIFF");
  detail::append_u32(out, 36 + data_bytes);
  tag("WAVE");
  tag("fmt ");
  detail::append_u32(out, 16);
  detail::append_u16(out, depth == WavDepth::kFloat32 ? 3 : 1);
  detail::append_u16(out, 1);
  detail::append_u32(out, static_cast<std::uint32_t>(clip.sample_rate()));
  detail::append_u32(out, static_cast<std::uint32_t>(clip.sample_rate() * width));
  detail::append_u16(out, static_cast<std::uint16_t>(width));
  detail::append_u16(out, static_cast<std::uint16_t>(bits));
  tag("data");
  detail::append_u32(out, data_bytes);

  std::size_t clipped = 0;
  if (depth == WavDepth::kFloat32) {
    for (double v : clip.samples()) {
      const float f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      detail::append_u32(out, u);
    }
  } else {
    const double scale = std::ldexp(1.0, bits - 1);
    const long max_code = static_cast<long>(scale) - 1;
    for (double v : clip.samples()) {
      long code = std::lround(v * scale);
      if (code > max_code || code < -max_code) {
        if (std::abs(v) * scale > max_code + 0.5) ++clipped;
        code = std::clamp(code, -max_code, max_code);
      }
      const auto u = static_cast<std::uint32_t>(static_cast<std::int32_t>(code));
      for (std::size_t b = 0; b < width; ++b) {
        out.push_back(static_cast<unsigned char>(u >> (8 * b)));
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write audio file: " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("failed writing audio file: " + path.string());
  if (clipped > 0) {
    log_warning("save_wav: " + std::to_string(clipped) +
                " samples clipped while writing " + path.string());
  }
}

}  // namespace rawbench

#endif  // RAWBENCH_WAV_HPP_
