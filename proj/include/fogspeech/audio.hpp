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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fogspeech {

inline constexpr int kMinSampleRate = 8000;
inline constexpr int kMaxSampleRate = 48000;

/// Mono PCM audio with samples in [-1, 1]. Immutable after construction.
class AudioClip {
 public:
  /// Throws Error(kUnsupportedRate) for rates outside [8000, 48000],
  /// kEmptyAudio for no samples and kInvalidArgument for out-of-range samples.
  AudioClip(Eigen::ArrayXd samples, int sample_rate);

  const Eigen::ArrayXd& samples() const noexcept { return samples_; }
  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(samples_.size()); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  Eigen::ArrayXd samples_;
  int sample_rate_;
};

struct FrameSpec {
  double frame_length_s = 0.040;
  double hop_length_s = 0.010;
};

/// One analysis frame: samples [first, first + length) of the clip.
struct Frame {
  double center_s = 0.0;
  std::size_t first = 0;
  std::size_t length = 0;
};

/// Decodes a RIFF/WAVE container holding 16-bit integer PCM (mono or stereo).
/// Stereo is averaged to mono before scaling by 1/32768.
AudioClip decode_wav(std::span<const std::uint8_t> bytes);

/// Encodes a clip as 16-bit mono PCM. Samples are rounded to the nearest
/// integer code, so decode(encode(decode(x))) reproduces decode(x) exactly.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

/// Encodes interleaved int16 channels; used for stereo fixtures and corpora.
std::vector<std::uint8_t> encode_wav_pcm16(std::span<const std::int16_t> interleaved,
                                           int channels, int sample_rate);

/// Number of frames for a geometry: floor((duration - frame) / hop) + 1, or 0
/// when the clip is shorter than one frame. A relative slack of 1e-9 absorbs
/// binary rounding of decimal second values.
std::size_t frame_count(double duration_s, const FrameSpec& spec);

/// Splits a clip into frames every hop. Throws Error(kClipTooShort) when the
/// clip is shorter than one frame and kInvalidArgument for a bad geometry.
std::vector<Frame> frame_signal(const AudioClip& clip, const FrameSpec& spec);

}  // namespace fogspeech
