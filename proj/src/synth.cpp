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

#include "fogspeech/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "fogspeech/error.hpp"
#include "fogspeech/kmeans.hpp"

namespace fogspeech::synth {
namespace {

Eigen::Index sample_count(double duration_s, int sample_rate) {
  return static_cast<Eigen::Index>(std::llround(duration_s * sample_rate));
}

double unit(kmeans::SplitMix64& rng) {
  return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

}  // namespace

AudioClip sine(double freq_hz, double amplitude, double duration_s, int sample_rate,
               double phase_rad) {
  const Eigen::Index n = sample_count(duration_s, sample_rate);
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / sample_rate;
  return AudioClip((amplitude * (2.0 * std::numbers::pi * freq_hz * t + phase_rad).sin()).eval(),
                   sample_rate);
}

AudioClip silence(double duration_s, int sample_rate) {
  return AudioClip(Eigen::ArrayXd::Zero(sample_count(duration_s, sample_rate)), sample_rate);
}

AudioClip white_noise(double amplitude, double duration_s, int sample_rate, std::uint64_t seed) {
  kmeans::SplitMix64 rng(seed);
  Eigen::ArrayXd x(sample_count(duration_s, sample_rate));
  for (auto& s : x) s = amplitude * (2.0 * unit(rng) - 1.0);
  return AudioClip(std::move(x), sample_rate);
}

AudioClip vowel(const VowelSpec& spec) {
  const Eigen::Index n = sample_count(spec.duration_s, spec.sample_rate);
  const double rate = spec.sample_rate;
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
  double phase = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double f = spec.f0_hz *
                     (1.0 + spec.vibrato_depth * std::sin(2.0 * std::numbers::pi * spec.vibrato_hz * t));
    double s = 0.0;
    for (int h = 1; h <= spec.harmonics && h * spec.f0_hz < rate / 2.0; ++h) {
      s += std::sin(h * phase) / h;
    }
    x[i] = s;
    phase += 2.0 * std::numbers::pi * f / rate;
  }
  const Eigen::Index ramp = std::min<Eigen::Index>(static_cast<Eigen::Index>(0.02 * rate), n / 2);
  for (Eigen::Index i = 0; i < ramp; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(ramp);
    x[i] *= g;
    x[n - 1 - i] *= g;
  }
  const double peak = x.abs().maxCoeff();
  if (peak > 0.0) x *= spec.peak_amplitude / peak;
  return AudioClip(std::move(x), spec.sample_rate);
}

std::vector<CorpusClip> corpus_plan(std::size_t count, std::uint64_t seed) {
  struct Profile {
    double f0_hz;
    double amplitude;
  };
  // Low/high pitch crossed with soft/loud voice.
  constexpr Profile kProfiles[] = {{115.0, 0.04}, {125.0, 0.30}, {215.0, 0.05}, {230.0, 0.35}};
  constexpr const char* kLabels[] = {"short_a", "long_a", "high_a", "low_a", "phrase"};

  kmeans::SplitMix64 rng(seed);
  std::vector<CorpusClip> plan;
  plan.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Profile& p = kProfiles[i % 4];
    CorpusClip clip;
    char id[32];
    std::snprintf(id, sizeof(id), "clip%03zu", i);
    clip.recording_id = id;
    clip.label = kLabels[i % 5];
    clip.spec.f0_hz = p.f0_hz * (1.0 + 0.12 * (unit(rng) - 0.5));
    clip.spec.peak_amplitude = p.amplitude * std::pow(10.0, 0.15 * (unit(rng) - 0.5));
    clip.spec.duration_s = 0.6 + 0.6 * unit(rng);
    clip.spec.vibrato_depth = 0.005 + 0.01 * unit(rng);
    plan.push_back(std::move(clip));
  }
  return plan;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<CorpusClip>& plan) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.csv", std::ios::trunc);
  if (!manifest) throw Error(ErrorCode::kIo, "cannot write manifest in " + dir.string());
  manifest << "recording_id,file,label\n";
  for (const auto& clip : plan) {
    const auto bytes = encode_wav(vowel(clip.spec));
    const std::string file = clip.recording_id + ".wav";
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / file).string());
    manifest << clip.recording_id << "," << file << "," << clip.label << "\n";
  }
}

}  // namespace fogspeech::synth
