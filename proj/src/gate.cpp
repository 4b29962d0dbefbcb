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

#include "fogspeech/gate.hpp"

#include <algorithm>
#include <cmath>

namespace fogspeech {

std::string_view verdict_name(Verdict v) {
  return v == Verdict::kLocal ? "LOCAL" : "UPLOAD";
}

std::string_view reason_name(GateReason r) {
  switch (r) {
    case GateReason::kColdStart: return "COLD_START";
    case GateReason::kThresholdExceeded: return "THRESHOLD_EXCEEDED";
    case GateReason::kWithinBaseline: return "WITHIN_BASELINE";
    case GateReason::kNoVoicedFrames: return "NO_VOICED_FRAMES";
  }
  return "UNKNOWN";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "LOCAL") return Verdict::kLocal;
  if (s == "UPLOAD") return Verdict::kUpload;
  throw Error(ErrorCode::kInvalidArgument, "unknown verdict '" + std::string(s) + "'");
}

GateReason parse_reason(std::string_view s) {
  for (auto r : {GateReason::kColdStart, GateReason::kThresholdExceeded,
                 GateReason::kWithinBaseline, GateReason::kNoVoicedFrames}) {
    if (reason_name(r) == s) return r;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown gate reason '" + std::string(s) + "'");
}

PatientBaseline::PatientBaseline(std::string patient_id, std::size_t capacity)
    : patient_id_(std::move(patient_id)), capacity_(capacity) {
  if (capacity_ == 0) throw Error(ErrorCode::kInvalidArgument, "baseline capacity must be >= 1");
}

void PatientBaseline::observe(const FeatureVector& v) {
  if (!v.mean_f0_hz) return;
  if (window_.size() == capacity_) window_.pop_front();
  window_.push_back(v);
}

PatientBaseline observe(PatientBaseline baseline, const FeatureVector& v) {
  baseline.observe(v);
  return baseline;
}

GateDecision decide(const PatientBaseline& baseline, const FeatureVector& v,
                    const GateConfig& config) {
  if (!(config.z_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "z_threshold must be positive");
  }
  if (!v.mean_f0_hz) return {Verdict::kUpload, 0.0, 0.0, GateReason::kNoVoicedFrames};
  if (baseline.size() < config.min_history) {
    return {Verdict::kUpload, 0.0, 0.0, GateReason::kColdStart};
  }

  const auto& window = baseline.window();
  const double n = static_cast<double>(window.size());
  double f0_mean = 0.0;
  double db_mean = 0.0;
  for (const auto& s : window) {
    f0_mean += *s.mean_f0_hz;
    db_mean += s.mean_intensity_db;
  }
  f0_mean /= n;
  db_mean /= n;
  double f0_var = 0.0;
  double db_var = 0.0;
  for (const auto& s : window) {
    f0_var += (*s.mean_f0_hz - f0_mean) * (*s.mean_f0_hz - f0_mean);
    db_var += (s.mean_intensity_db - db_mean) * (s.mean_intensity_db - db_mean);
  }
  const double f0_std = std::max(std::sqrt(f0_var / n), config.std_floor);
  const double db_std = std::max(std::sqrt(db_var / n), config.std_floor);

  GateDecision d;
  d.f0_z = std::abs(*v.mean_f0_hz - f0_mean) / f0_std;
  d.intensity_z = std::abs(v.mean_intensity_db - db_mean) / db_std;
  if (std::max(d.f0_z, d.intensity_z) > config.z_threshold) {
    d.verdict = Verdict::kUpload;
    d.reason = GateReason::kThresholdExceeded;
  } else {
    d.verdict = Verdict::kLocal;
    d.reason = GateReason::kWithinBaseline;
  }
  return d;
}

}  // namespace fogspeech
