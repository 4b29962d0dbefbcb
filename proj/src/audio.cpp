// Copyright 2026 The FogSpeech Authors
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

#include "fogspeech/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>
#include <string>

#include "fogspeech/error.hpp"

namespace fogspeech {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FormatChunk parse_format(std::span<const std::uint8_t> body) {
  if (body.size() < 16) {
    throw Error(ErrorCode::kMalformedContainer, "fmt chunk shorter than 16 bytes");
  }
  FormatChunk fmt;
  fmt.format = read_u16(body, 0);
  fmt.channels = read_u16(body, 2);
  fmt.sample_rate = read_u32(body, 4);
  fmt.block_align = read_u16(body, 12);
  fmt.bits = read_u16(body, 14);
  if (fmt.format == kFormatExtensible) {
    // WAVE_FORMAT_EXTENSIBLE: the sub-format GUID starts with the real tag.
    if (body.size() < 26) {
      throw Error(ErrorCode::kMalformedContainer, "truncated extensible fmt chunk");
    }
    fmt.format = read_u16(body, 24);
  }
  return fmt;
}

}  // namespace

AudioClip::AudioClip(Eigen::ArrayXd samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ < kMinSampleRate || sample_rate_ > kMaxSampleRate) {
    throw Error(ErrorCode::kUnsupportedRate,
                "sample rate " + std::to_string(sample_rate_) + " Hz outside [8000, 48000]");
  }
  if (samples_.size() == 0) {
    throw Error(ErrorCode::kEmptyAudio, "clip has no samples");
  }
  if (!samples_.isFinite().all() || samples_.abs().maxCoeff() > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "samples must be finite and within [-1, 1]");
  }
}

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw Error(ErrorCode::kMalformedContainer, "missing RIFF/WAVE header");
  }

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t declared = read_u32(bytes, pos + 4);
    const std::size_t body_at = pos + 8;
    // Streaming writers leave 0xFFFFFFFF or an oversized length in the data
    // chunk; clamp to what is actually present.
    const std::size_t body_len = std::min<std::size_t>(declared, bytes.size() - body_at);
    const auto body = bytes.subspan(body_at, body_len);
    if (tag_is(bytes, pos, "fmt ")) {
      fmt = parse_format(body);
    } else if (tag_is(bytes, pos, "data")) {
      data = body;
      if (fmt) break;
    }
    pos = body_at + body_len + (body_len & 1U);
  }
  if (!fmt) throw Error(ErrorCode::kMalformedContainer, "no fmt chunk");
  if (!data) throw Error(ErrorCode::kMalformedContainer, "no data chunk");

  if (fmt->format != kFormatPcm) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "audio format " + std::to_string(fmt->format) + " is not integer PCM");
  }
  if (fmt->bits != 16) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                std::to_string(fmt->bits) + "-bit samples; only 16-bit PCM is supported");
  }
  if (fmt->channels != 1 && fmt->channels != 2) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                std::to_string(fmt->channels) + " channels; only mono or stereo is supported");
  }
  if (fmt->sample_rate < kMinSampleRate || fmt->sample_rate > kMaxSampleRate) {
    throw Error(ErrorCode::kUnsupportedRate,
                "sample rate " + std::to_string(fmt->sample_rate) + " Hz outside [8000, 48000]");
  }

  const std::size_t frame_bytes = 2U * fmt->channels;
  const std::size_t frames = data->size() / frame_bytes;
  if (frames == 0) throw Error(ErrorCode::kEmptyAudio, "data chunk holds no samples");

  Eigen::ArrayXd samples(static_cast<Eigen::Index>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t at = i * frame_bytes;
    double value = static_cast<std::int16_t>(read_u16(*data, at));
    if (fmt->channels == 2) {
      value = (value + static_cast<std::int16_t>(read_u16(*data, at + 2))) / 2.0;
    }
    samples[static_cast<Eigen::Index>(i)] = value / 32768.0;
  }
  return AudioClip(std::move(samples), static_cast<int>(fmt->sample_rate));
}

std::vector<std::uint8_t> encode_wav_pcm16(std::span<const std::int16_t> interleaved,
                                           int channels, int sample_rate) {
  if (channels < 1 || interleaved.size() % static_cast<std::size_t>(channels) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample count is not a multiple of channels");
  }
  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate * channels * 2));
  put_u16(out, static_cast<std::uint16_t>(channels * 2));
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (std::int16_t s : interleaved) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  std::vector<std::int16_t> pcm(clip.size());
  for (std::size_t i = 0; i < pcm.size(); ++i) {
    const double code = std::round(clip.samples()[static_cast<Eigen::Index>(i)] * 32768.0);
    pcm[i] = static_cast<std::int16_t>(std::clamp(code, -32768.0, 32767.0));
  }
  return encode_wav_pcm16(pcm, 1, clip.sample_rate());
}

std::size_t frame_count(double duration_s, const FrameSpec& spec) {
  const double slack = 1e-9 * std::max(1.0, duration_s);
  const double room = duration_s - spec.frame_length_s;
  if (room < -slack) return 0;
  return static_cast<std::size_t>(std::floor(std::max(0.0, room) / spec.hop_length_s + 1e-9)) + 1;
}

std::vector<Frame> frame_signal(const AudioClip& clip, const FrameSpec& spec) {
  if (!(spec.hop_length_s > 0.0) || spec.hop_length_s > spec.frame_length_s) {
    throw Error(ErrorCode::kInvalidArgument, "frame geometry requires 0 < hop <= frame length");
  }
  const std::size_t count = frame_count(clip.duration_s(), spec);
  if (count == 0) {
    throw Error(ErrorCode::kClipTooShort, "clip of " + std::to_string(clip.duration_s()) +
                                              " s is shorter than one " +
                                              std::to_string(spec.frame_length_s) + " s frame");
  }
  const double rate = clip.sample_rate();
  const auto length = static_cast<std::size_t>(
      std::min<long long>(std::llround(spec.frame_length_s * rate),
                          static_cast<long long>(clip.size())));

  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double start_s = static_cast<double>(i) * spec.hop_length_s;
    const auto first = static_cast<std::size_t>(std::llround(start_s * rate));
    // Rounding of non-integral sample geometries can push the last frame one
    // sample past the end; such a frame does not fit and is dropped.
    if (first + length > clip.size()) break;
    frames.push_back(Frame{start_s + spec.frame_length_s / 2.0, first, length});
  }
  return frames;
}

}  // namespace fogspeech
