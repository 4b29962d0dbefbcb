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

#include "fogspeech/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fogspeech/dsp.hpp"

namespace fogspeech {
namespace {

using Eigen::Index;

void check_floor(double floor_hz) {
  if (!(floor_hz > 0.0) || !std::isfinite(floor_hz)) {
    throw Error(ErrorCode::kInvalidRange, "pitch floor must be a positive frequency");
  }
}

double intensity_window_s(double floor_hz) { return 3.2 / floor_hz; }

struct PeakCandidate {
  double lag = 0.0;       // samples, fractional
  double height = 0.0;    // corrected autocorrelation at the vertex
  double strength = -std::numeric_limits<double>::infinity();
};

}  // namespace

FrameSpec analysis_frames(double floor_hz) {
  check_floor(floor_hz);
  return FrameSpec{std::max(0.040, 3.0 / floor_hz), 0.010};
}

PitchTrack extract_pitch(const AudioClip& clip, const PitchOptions& options) {
  const double rate = clip.sample_rate();
  check_floor(options.floor_hz);
  if (!(options.floor_hz < options.ceiling_hz) || options.ceiling_hz > rate / 4.0) {
    throw Error(ErrorCode::kInvalidRange,
                "pitch range requires 0 < floor < ceiling <= sample_rate / 4");
  }

  const auto frames = frame_signal(clip, analysis_frames(options.floor_hz));
  const auto n = static_cast<Index>(frames.front().length);

  const double min_lag = rate / options.ceiling_hz;
  const double max_lag = rate / options.floor_hz;
  const Index lag_hi = std::min<Index>(static_cast<Index>(std::ceil(max_lag)), n - 2);
  const Index lag_lo = std::max<Index>(1, static_cast<Index>(std::floor(min_lag)));

  const dsp::Array<double> window = dsp::hann<double>(n);
  dsp::Array<double> window_ac = dsp::autocorrelation(window, lag_hi + 1);
  window_ac /= window_ac[0];

  PitchTrack track;
  track.frames.reserve(frames.size());
  for (const Frame& frame : frames) {
    PitchFrame out{frame.center_s, std::nullopt, 0.0};
    dsp::Array<double> x = clip.samples().segment(static_cast<Index>(frame.first), n);
    x -= x.mean();
    const double rms = std::sqrt(x.square().mean());
    if (rms < options.silence_threshold) {
      track.frames.push_back(out);
      continue;
    }

    const dsp::Array<double> ac = dsp::autocorrelation((x * window).eval(), lag_hi + 1);
    if (!(ac[0] > 0.0)) {
      track.frames.push_back(out);
      continue;
    }
    // Dividing by the window's own autocorrelation undoes the taper that
    // windowing imposes on longer lags.
    const dsp::Array<double> corrected = (ac / ac[0]) / window_ac;

    PeakCandidate best;
    for (Index lag = lag_lo; lag <= lag_hi; ++lag) {
      const double left = corrected[lag - 1];
      const double centre = corrected[lag];
      const double right = corrected[lag + 1];
      if (!(centre > left && centre >= right)) continue;
      const auto vertex = dsp::parabolic_peak(left, centre, right);
      const double refined = std::clamp(lag + vertex.offset, min_lag, max_lag);
      const double strength =
          vertex.height - options.octave_cost * std::log2(options.floor_hz * refined / rate);
      if (strength > best.strength) best = {refined, vertex.height, strength};
    }

    if (std::isfinite(best.strength)) {
      out.periodicity = std::clamp(best.height, 0.0, 1.0);
      if (out.periodicity >= options.voicing_threshold) {
        out.f0_hz = std::clamp(rate / best.lag, options.floor_hz, options.ceiling_hz);
      }
    }
    track.frames.push_back(out);
  }
  return track;
}

IntensityTrack extract_intensity(const AudioClip& clip, double floor_hz) {
  check_floor(floor_hz);
  const double window_s = intensity_window_s(floor_hz);
  if (clip.duration_s() < window_s) {
    throw Error(ErrorCode::kClipTooShort, "clip shorter than one " + std::to_string(window_s) +
                                              " s intensity window");
  }
  const auto frames = frame_signal(clip, analysis_frames(floor_hz));
  const double rate = clip.sample_rate();
  const double half = window_s / 2.0;
  const double sigma = window_s / 6.0;
  const auto last_sample = static_cast<Index>(clip.size()) - 1;
  const double ref_sq = kReferencePressurePa * kReferencePressurePa;

  IntensityTrack track;
  track.frames.reserve(frames.size());
  for (const Frame& frame : frames) {
    const Index first = std::max<Index>(0, static_cast<Index>(std::ceil((frame.center_s - half) * rate)));
    const Index last =
        std::min(last_sample, static_cast<Index>(std::floor((frame.center_s + half) * rate)));
    const Index count = last - first + 1;
    const dsp::Array<double> w =
        dsp::gaussian_weights(first, count, rate, frame.center_s, sigma);
    const double energy = (w * clip.samples().segment(first, count).square()).sum() / w.sum();

    double db = kIntensityClampDb;
    if (energy > 0.0) db = std::max(kIntensityClampDb, 10.0 * std::log10(energy / ref_sq));
    track.frames.push_back({frame.center_s, db});
  }
  return track;
}

FeatureVector summarize_tracks(const PitchTrack& pitch, const IntensityTrack& intensity,
                               std::string recording_id) {
  if (pitch.frames.size() != intensity.frames.size()) {
    throw Error(ErrorCode::kTrackMismatch,
                "pitch track has " + std::to_string(pitch.frames.size()) +
                    " frames, intensity track " + std::to_string(intensity.frames.size()));
  }
  if (pitch.frames.empty()) throw Error(ErrorCode::kTrackMismatch, "tracks are empty");

  FeatureVector out;
  out.recording_id = std::move(recording_id);

  double f0_sum = 0.0;
  std::size_t voiced = 0;
  for (const auto& f : pitch.frames) {
    if (f.f0_hz) {
      f0_sum += *f.f0_hz;
      ++voiced;
    }
  }
  if (voiced > 0) out.mean_f0_hz = f0_sum / static_cast<double>(voiced);
  out.voiced_ratio = static_cast<double>(voiced) / static_cast<double>(pitch.frames.size());

  double db_sum = 0.0;
  std::size_t loud = 0;
  for (const auto& f : intensity.frames) {
    if (f.intensity_db > kIntensityClampDb) {
      db_sum += f.intensity_db;
      ++loud;
    }
  }
  out.mean_intensity_db = loud > 0 ? db_sum / static_cast<double>(loud) : kIntensityClampDb;
  return out;
}

FeatureVector summarize(const PitchTrack& pitch, const IntensityTrack& intensity,
                        std::string recording_id) {
  FeatureVector out = summarize_tracks(pitch, intensity, std::move(recording_id));
  if (!out.mean_f0_hz) throw NoVoicedFramesError(std::move(out));
  return out;
}

FeatureVector analyze_clip(const AudioClip& clip, std::string recording_id,
                           const PitchOptions& options) {
  const PitchTrack pitch = extract_pitch(clip, options);
  const IntensityTrack intensity = extract_intensity(clip, options.floor_hz);
  return summarize_tracks(pitch, intensity, std::move(recording_id));
}

Eigen::Vector2d feature_point(const FeatureVector& v) {
  if (!v.mean_f0_hz) {
    throw Error(ErrorCode::kNoVoicedFrames,
                "recording '" + v.recording_id + "' has no F0 and cannot be placed");
  }
  return {*v.mean_f0_hz, v.mean_intensity_db};
}

NormalizationParams fit_normalization(std::span<const FeatureVector> vectors) {
  if (vectors.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "normalization needs at least two feature vectors");
  }
  Eigen::Matrix2Xd points(2, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    points.col(static_cast<Index>(i)) = feature_point(vectors[i]);
  }

  NormalizationParams params;
  params.mean = points.rowwise().mean();
  const Eigen::Matrix2Xd centred = points.colwise() - params.mean;
  params.stddev = (centred.rowwise().squaredNorm() / static_cast<double>(points.cols())).cwiseSqrt();
  for (Index d = 0; d < 2; ++d) {
    // Zero spread is decided on the raw values, so a constant column maps to
    // exactly zero rather than rounding noise.
    if (points.row(d).maxCoeff() == points.row(d).minCoeff()) {
      params.degenerate[static_cast<std::size_t>(d)] = true;
      params.mean[d] = points(d, 0);
      params.stddev[d] = 1.0;
    }
  }
  return params;
}

Eigen::Vector2d apply_normalization(const FeatureVector& v, const NormalizationParams& params) {
  return (feature_point(v) - params.mean).cwiseQuotient(params.stddev);
}

}  // namespace fogspeech
