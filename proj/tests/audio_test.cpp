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

#include <doctest.h>

#include <random>

#include "fogspeech/audio.hpp"
#include "fogspeech/synth.hpp"
#include "oracles.hpp"

using namespace fogspeech;

namespace {

ErrorCode decode_error(const std::vector<std::uint8_t>& bytes) {
  try {
    (void)decode_wav(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decode_wav accepted the input");
  return ErrorCode::kIo;
}

void put16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = static_cast<std::uint8_t>(v);
  b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

}  // namespace

TEST_CASE("silent mono clip decodes to zeros") {
  const std::vector<std::int16_t> pcm(16000, 0);
  const AudioClip clip = decode_wav(encode_wav_pcm16(pcm, 1, 16000));
  CHECK(clip.sample_rate() == 16000);
  CHECK(clip.duration_s() == doctest::Approx(1.0));
  CHECK((clip.samples() == 0.0).all());
}

TEST_CASE("opposite stereo channels cancel") {
  std::vector<std::int16_t> pcm;
  for (int i = 0; i < 1600; ++i) {
    pcm.push_back(16384);
    pcm.push_back(-16384);
  }
  const AudioClip clip = decode_wav(encode_wav_pcm16(pcm, 2, 16000));
  CHECK(clip.size() == 1600);
  CHECK((clip.samples() == 0.0).all());
}

TEST_CASE("stereo is averaged then scaled") {
  const std::vector<std::int16_t> pcm{1000, 3000, -32768, -32768};
  const AudioClip clip = decode_wav(encode_wav_pcm16(pcm, 2, 8000));
  REQUIRE(clip.size() == 2);
  CHECK(clip.samples()[0] == 2000.0 / 32768.0);
  CHECK(clip.samples()[1] == -1.0);
}

TEST_CASE("header of a 3 s 44.1 kHz file matches an independent parser") {
  const AudioClip source = synth::sine(220.0, 0.5, 3.0, 44100);
  const auto bytes = encode_wav(source);
  const auto header = oracle::parse_wav_header(bytes);
  REQUIRE(header);
  CHECK(header->format == 1);
  CHECK(header->bits == 16);
  CHECK(header->channels == 1);

  const AudioClip clip = decode_wav(bytes);
  CHECK(clip.sample_rate() == header->sample_rate);
  CHECK(clip.size() == header->data_bytes / 2);
  CHECK(clip.duration_s() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("decode, encode, decode is lossless") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> dist(-32768, 32767);
  std::vector<std::int16_t> pcm(4000);
  for (auto& s : pcm) s = static_cast<std::int16_t>(dist(rng));
  const AudioClip first = decode_wav(encode_wav_pcm16(pcm, 1, 22050));
  const AudioClip second = decode_wav(encode_wav(first));
  CHECK(second.sample_rate() == 22050);
  CHECK((first.samples() == second.samples()).all());
}

TEST_CASE("decode errors carry their codes") {
  const std::vector<std::int16_t> pcm(100, 0);
  const auto good = encode_wav_pcm16(pcm, 1, 16000);

  CHECK(decode_error({'R', 'I', 'F', 'X', 0, 0, 0, 0}) == ErrorCode::kMalformedContainer);
  CHECK(decode_error({}) == ErrorCode::kMalformedContainer);

  auto truncated = good;
  truncated.resize(30);
  CHECK(decode_error(truncated) == ErrorCode::kMalformedContainer);

  auto float_format = good;
  put16(float_format, 20, 3);
  CHECK(decode_error(float_format) == ErrorCode::kUnsupportedEncoding);

  auto eight_bit = good;
  put16(eight_bit, 34, 8);
  CHECK(decode_error(eight_bit) == ErrorCode::kUnsupportedEncoding);

  CHECK(decode_error(encode_wav_pcm16(pcm, 1, 96000)) == ErrorCode::kUnsupportedRate);
  CHECK(decode_error(encode_wav_pcm16(pcm, 1, 4000)) == ErrorCode::kUnsupportedRate);
  CHECK(decode_error(encode_wav_pcm16({}, 1, 16000)) == ErrorCode::kEmptyAudio);
}

TEST_CASE("frame counts") {
  const FrameSpec spec{0.04, 0.01};
  CHECK(frame_count(1.0, spec) == 97);
  CHECK(frame_signal(synth::silence(1.0, 16000), spec).size() == 97);
  CHECK(frame_signal(synth::silence(0.04, 16000), spec).size() == 1);
  try {
    (void)frame_signal(synth::silence(0.02, 16000), spec);
    FAIL("expected ClipTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kClipTooShort);
  }
}

TEST_CASE("frame count property over random sample-exact geometries") {
  std::mt19937 rng(11);
  const int rate = 16000;
  for (int trial = 0; trial < 300; ++trial) {
    const int frame = std::uniform_int_distribution<int>(16, 2000)(rng);
    const int hop = std::uniform_int_distribution<int>(1, frame)(rng);
    const int n = std::uniform_int_distribution<int>(frame, 40000)(rng);
    const FrameSpec spec{static_cast<double>(frame) / rate, static_cast<double>(hop) / rate};

    // Counting oracle: how many hops fit.
    std::size_t expected = 0;
    for (long start = 0; start + frame <= n; start += hop) ++expected;

    const AudioClip clip(Eigen::ArrayXd::Zero(n), rate);
    CHECK(frame_count(clip.duration_s(), spec) == expected);
    const auto frames = frame_signal(clip, spec);
    REQUIRE(frames.size() == expected);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      CHECK(frames[i].first + frames[i].length <= clip.size());
      CHECK(frames[i].first == i * static_cast<std::size_t>(hop));
    }
  }
}
