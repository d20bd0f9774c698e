// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/signal/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "dereverb/common/error.h"

namespace dereverb {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t ReadU32(const std::uint8_t* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<std::uint8_t>* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((v >> (8 * i)) & 0xFF);
}
void PutU16(std::vector<std::uint8_t>* out, std::uint16_t v) {
  out->push_back(v & 0xFF);
  out->push_back((v >> 8) & 0xFF);
}
void PutTag(std::vector<std::uint8_t>* out, const char* tag) {
  out->insert(out->end(), tag, tag + 4);
}

}  // namespace

std::vector<AudioBuffer> ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open wav file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw DataError(name + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw DataError(name + ": truncated chunk");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw DataError(name + ": short fmt chunk");
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      sample_rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
      if (format == kFormatExtensible && size >= 40) {
        format = ReadU16(chunk + 8 + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0) throw DataError(name + ": missing fmt chunk");
  if (data == nullptr) throw DataError(name + ": missing data chunk");
  if (sample_rate != static_cast<std::uint32_t>(kSampleRate)) {
    throw DataError(name + ": sample rate " + std::to_string(sample_rate) +
                    " Hz is not supported (expected 16000 Hz)");
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw DataError(name + ": only 16-bit PCM and 32-bit float are supported");
  }

  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  std::vector<std::vector<double>> samples(channels,
                                           std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + (i * channels + c) * width;
      if (pcm16) {
        samples[c][i] = static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
      } else {
        const std::uint32_t raw = ReadU32(p);
        float v;
        std::memcpy(&v, &raw, sizeof(v));
        samples[c][i] = v;
      }
    }
  }
  std::vector<AudioBuffer> out;
  out.reserve(channels);
  for (auto& s : samples) {
    if (!std::all_of(s.begin(), s.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw DataError(name + ": non-finite samples");
    }
    out.emplace_back(std::move(s), static_cast<int>(sample_rate));
  }
  return out;
}

void WriteWav(const std::filesystem::path& path,
              const std::vector<AudioBuffer>& channels, WavFormat format) {
  DEREVERB_CHECK(!channels.empty(), "WriteWav: no channels");
  const std::size_t frames = channels[0].size();
  const int rate = channels[0].sample_rate();
  for (const auto& ch : channels) {
    DEREVERB_CHECK(ch.size() == frames && ch.sample_rate() == rate,
                   "WriteWav: channels differ in length or rate");
  }
  const std::uint16_t num_channels = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
  const std::uint32_t block = num_channels * bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * block);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(&out, "RIFF");
  PutU32(&out, 36 + data_size);
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  PutU32(&out, 16);
  PutU16(&out, format == WavFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(&out, num_channels);
  PutU32(&out, static_cast<std::uint32_t>(rate));
  PutU32(&out, static_cast<std::uint32_t>(rate) * block);
  PutU16(&out, static_cast<std::uint16_t>(block));
  PutU16(&out, bits);
  PutTag(&out, "data");
  PutU32(&out, data_size);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& ch : channels) {
      if (format == WavFormat::kPcm16) {
        const double v = std::clamp(ch[i], -1.0, 32767.0 / 32768.0);
        const auto q = static_cast<std::int16_t>(std::lround(v * 32768.0));
        PutU16(&out, static_cast<std::uint16_t>(q));
      } else {
        const float v = static_cast<float>(ch[i]);
        std::uint32_t raw;
        std::memcpy(&raw, &v, sizeof(raw));
        PutU32(&out, raw);
      }
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write wav file " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw DataError("write failed for " + path.string());
}

}  // namespace dereverb
