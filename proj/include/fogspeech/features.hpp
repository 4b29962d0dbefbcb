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

// Per-recording speech features: frame-level pitch (corrected
// autocorrelation) and intensity (Gaussian-weighted energy in dB), their
// two-number summary, and z-score normalization of summaries.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fogspeech/audio.hpp"
#include "fogspeech/error.hpp"

namespace fogspeech {

inline constexpr double kDefaultPitchFloorHz = 75.0;
inline constexpr double kDefaultPitchCeilingHz = 600.0;
inline constexpr double kIntensityClampDb = -300.0;
inline constexpr double kReferencePressurePa = 2e-5;

struct PitchOptions {
  double floor_hz = kDefaultPitchFloorHz;
  double ceiling_hz = kDefaultPitchCeilingHz;
  /// Minimum corrected autocorrelation peak for a voiced frame.
  double voicing_threshold = 0.45;
  /// Frames whose RMS (after mean removal) is below this are unvoiced.
  double silence_threshold = 1e-4;
  /// Per-octave penalty on candidate lags, favouring the shortest period
  /// among near-equal peaks (subharmonic guard).
  double octave_cost = 0.01;
};

/// Frame grid shared by both extractors: 40 ms frames every 10 ms, widened to
/// three periods of the floor when the floor is below 75 Hz.
FrameSpec analysis_frames(double floor_hz);

struct PitchFrame {
  double time_s = 0.0;
  std::optional<double> f0_hz;  // nullopt when unvoiced
  double periodicity = 0.0;     // in [0, 1]
};

struct PitchTrack {
  std::vector<PitchFrame> frames;
};

struct IntensityFrame {
  double time_s = 0.0;
  double intensity_db = kIntensityClampDb;
};

struct IntensityTrack {
  std::vector<IntensityFrame> frames;
};

struct FeatureVector {
  std::string recording_id;
  std::optional<double> mean_f0_hz;  // nullopt when no frame is voiced
  double mean_intensity_db = kIntensityClampDb;
  double voiced_ratio = 0.0;

  bool operator==(const FeatureVector&) const = default;
};

/// Thrown by summarize() when no frame is voiced. Carries the partial
/// summary so callers that keep such recordings still have the intensity.
class NoVoicedFramesError : public Error {
 public:
  explicit NoVoicedFramesError(FeatureVector partial)
      : Error(ErrorCode::kNoVoicedFrames,
              "recording '" + partial.recording_id + "' has no voiced frames"),
        partial_(std::move(partial)) {}
  const FeatureVector& partial() const noexcept { return partial_; }

 private:
  FeatureVector partial_;
};

PitchTrack extract_pitch(const AudioClip& clip, const PitchOptions& options = {});

/// Gaussian window of 3.2 / floor_hz seconds (sigma = window / 6, truncated at
/// +/- half a window and at the clip edges) centred on each analysis frame.
IntensityTrack extract_intensity(const AudioClip& clip, double floor_hz = kDefaultPitchFloorHz);

/// Summary that tolerates unvoiced recordings (mean_f0_hz = nullopt).
FeatureVector summarize_tracks(const PitchTrack& pitch, const IntensityTrack& intensity,
                               std::string recording_id);

/// As summarize_tracks but throws NoVoicedFramesError when nothing is voiced.
FeatureVector summarize(const PitchTrack& pitch, const IntensityTrack& intensity,
                        std::string recording_id);

/// decode-free pipeline: both extractors plus the lenient summary.
FeatureVector analyze_clip(const AudioClip& clip, std::string recording_id,
                           const PitchOptions& options = {});

struct NormalizationParams {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();    // (Hz, dB)
  Eigen::Vector2d stddev = Eigen::Vector2d::Ones();  // (Hz, dB), population
  /// True for a dimension whose spread was zero; its stddev was replaced by 1.
  std::array<bool, 2> degenerate{false, false};

  bool any_degenerate() const { return degenerate[0] || degenerate[1]; }
};

/// (mean F0, mean intensity) as a point; throws NoVoicedFrames without F0.
Eigen::Vector2d feature_point(const FeatureVector& v);

/// Population z-score parameters. Requires >= 2 vectors, all voiced.
NormalizationParams fit_normalization(std::span<const FeatureVector> vectors);

Eigen::Vector2d apply_normalization(const FeatureVector& v, const NormalizationParams& params);

}  // namespace fogspeech
