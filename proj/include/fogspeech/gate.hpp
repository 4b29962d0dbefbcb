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

// Local-vs-cloud decision per recording. A recording is "abnormal" when
// either feature sits more than z_threshold rolling standard deviations from
// the patient's recent sessions.

#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <string_view>

#include "fogspeech/features.hpp"

namespace fogspeech {

struct GateConfig {
  double z_threshold = 2.0;
  std::size_t window = 20;       // sessions kept in the baseline (M)
  std::size_t min_history = 5;   // below this the gate is cold
  double std_floor = 1e-6;
};

enum class Verdict { kLocal, kUpload };

enum class GateReason {
  kColdStart,
  kThresholdExceeded,
  kWithinBaseline,
  /// No voiced frame, so no F0 to compare; forwarded for review.
  kNoVoicedFrames,
};

std::string_view verdict_name(Verdict v);
std::string_view reason_name(GateReason r);
Verdict parse_verdict(std::string_view s);
GateReason parse_reason(std::string_view s);

struct GateDecision {
  Verdict verdict = Verdict::kUpload;
  double f0_z = 0.0;
  double intensity_z = 0.0;
  GateReason reason = GateReason::kColdStart;

  bool operator==(const GateDecision&) const = default;
};

/// Rolling window of a patient's most recent voiced sessions.
class PatientBaseline {
 public:
  PatientBaseline(std::string patient_id, std::size_t capacity);

  const std::string& patient_id() const noexcept { return patient_id_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return window_.size(); }
  const std::deque<FeatureVector>& window() const noexcept { return window_; }

  /// Appends, evicting the oldest entry at capacity. Vectors without F0 are
  /// not part of the baseline and are ignored.
  void observe(const FeatureVector& v);

 private:
  std::string patient_id_;
  std::size_t capacity_;
  std::deque<FeatureVector> window_;
};

/// Pure: never mutates the baseline. Upload iff cold, unvoiced, or
/// max(f0_z, intensity_z) > z_threshold (strictly).
GateDecision decide(const PatientBaseline& baseline, const FeatureVector& v,
                    const GateConfig& config = {});

/// Value-returning form of PatientBaseline::observe.
PatientBaseline observe(PatientBaseline baseline, const FeatureVector& v);

}  // namespace fogspeech
