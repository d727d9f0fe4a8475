// Copyright 2026 The SAQAM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "saqam/audio/wav.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "saqam/audio/resample.hpp"

namespace saqam::audio {

namespace {

struct FmtChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
};

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

}  // namespace

BinauralSignal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError("not a RIFF/WAVE file: " + path);

  FmtChunk fmt;
  const uint8_t* data = nullptr;
  uint32_t data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* hdr = bytes.data() + pos;
    uint32_t len = read_u32(hdr + 4);
    if (pos + 8 + len > bytes.size()) throw IoError("truncated chunk in " + path);
    if (std::memcmp(hdr, "fmt ", 4) == 0 && len >= 16) {
      fmt.format = read_u16(hdr + 8);
      fmt.channels = read_u16(hdr + 10);
      fmt.sample_rate = read_u32(hdr + 12);
      fmt.bits = read_u16(hdr + 22);
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = hdr + 8;
      data_len = len;
    }
    pos += 8 + len + (len & 1);
  }
  if (fmt.channels == 0 || data == nullptr) throw IoError("missing fmt/data chunk in " + path);
  if (fmt.channels > 2)
    throw FormatError("expected 1 or 2 channels, got " + std::to_string(fmt.channels));

  const int nch = fmt.channels;
  std::array<std::vector<float>, 2> ch;
  if (fmt.format == kFormatPcm && fmt.bits == 16) {
    int64_t frames = data_len / (2 * nch);
    for (auto& c : ch) c.resize(static_cast<size_t>(frames));
    for (int64_t i = 0; i < frames; ++i)
      for (int c = 0; c < nch; ++c) {
        int16_t s;
        std::memcpy(&s, data + (i * nch + c) * 2, 2);
        ch[static_cast<size_t>(c)][static_cast<size_t>(i)] = static_cast<float>(s) / 32768.0f;
      }
  } else if (fmt.format == kFormatFloat && fmt.bits == 32) {
    int64_t frames = data_len / (4 * nch);
    for (auto& c : ch) c.resize(static_cast<size_t>(frames));
    for (int64_t i = 0; i < frames; ++i)
      for (int c = 0; c < nch; ++c) {
        float s;
        std::memcpy(&s, data + (i * nch + c) * 4, 4);
        ch[static_cast<size_t>(c)][static_cast<size_t>(i)] = s;
      }
  } else {
    throw FormatError("unsupported encoding (format=" + std::to_string(fmt.format) +
                      ", bits=" + std::to_string(fmt.bits) + ") in " + path);
  }
  if (nch == 1) ch[1] = ch[0];

  BinauralSignal out;
  out.sample_rate = static_cast<int>(fmt.sample_rate);
  out.ch = std::move(ch);
  for (auto& c : out.ch)
    for (float& v : c) v = std::clamp(v, -1.0f, 1.0f);
  if (out.sample_rate != kSampleRate) out = resample(out, kSampleRate);
  return out;
}

void write_wav(const std::string& path, const BinauralSignal& signal) {
  signal.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  const uint32_t frames = static_cast<uint32_t>(signal.frames());
  const uint32_t data_len = frames * 4;  // 2 ch x 16 bit
  auto put_u32 = [&](uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_u16 = [&](uint16_t v) { os.write(reinterpret_cast<const char*>(&v), 2); };
  os.write("RIFF", 4);
  put_u32(36 + data_len);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(2);
  put_u32(static_cast<uint32_t>(signal.sample_rate));
  put_u32(static_cast<uint32_t>(signal.sample_rate) * 4);
  put_u16(4);
  put_u16(16);
  os.write("data", 4);
  put_u32(data_len);
  for (uint32_t i = 0; i < frames; ++i)
    for (int c = 0; c < 2; ++c) {
      float v = std::clamp(signal.ch[static_cast<size_t>(c)][i], -1.0f, 1.0f);
      auto s = static_cast<int16_t>(std::lround(v * 32767.0f));
      os.write(reinterpret_cast<const char*>(&s), 2);
    }
  if (!os) throw IoError("short write to " + path);
}

}  // namespace saqam::audio
