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

// Deterministic test signals and a synthetic sustained-vowel corpus, used by
// the tests, the bench workloads and `fogspeech synth`.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fogspeech/audio.hpp"

namespace fogspeech::synth {

AudioClip sine(double freq_hz, double amplitude, double duration_s, int sample_rate,
               double phase_rad = 0.0);

AudioClip silence(double duration_s, int sample_rate);

/// Uniform white noise in [-amplitude, amplitude].
AudioClip white_noise(double amplitude, double duration_s, int sample_rate, std::uint64_t seed);

struct VowelSpec {
  double f0_hz = 150.0;
  double peak_amplitude = 0.3;
  double duration_s = 1.0;
  int sample_rate = 16000;
  double vibrato_depth = 0.01;  // fraction of f0
  double vibrato_hz = 5.0;
  int harmonics = 12;
};

/// Harmonic series with 1/h roll-off, light vibrato and 20 ms onset/offset
/// ramps; peak-normalized to peak_amplitude.
AudioClip vowel(const VowelSpec& spec);

struct CorpusClip {
  std::string recording_id;
  std::string label;
  VowelSpec spec;
};

/// `count` clips drawn around four speaker profiles (pitch x loudness),
/// cycling through the five utterance labels.
std::vector<CorpusClip> corpus_plan(std::size_t count, std::uint64_t seed);

/// Writes <id>.wav files and manifest.csv (recording_id,file,label) into dir.
void write_corpus(const std::filesystem::path& dir, const std::vector<CorpusClip>& plan);

}  // namespace fogspeech::synth
