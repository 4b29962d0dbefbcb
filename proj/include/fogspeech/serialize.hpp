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

// JSON wire formats. Field names here are part of the public contract of the
// HTTP API, the session store and the CLI outputs.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fogspeech/features.hpp"
#include "fogspeech/gate.hpp"
#include "fogspeech/kmeans.hpp"

namespace fogspeech {

using Json = nlohmann::json;

enum class UploadStatus { kNotRequired, kPending, kAcknowledged };

std::string_view upload_status_name(UploadStatus s);
UploadStatus parse_upload_status(std::string_view s);

/// One ingested recording as persisted on the fog node. Never holds audio.
struct SessionRecord {
  std::string patient_id;
  std::string recording_id;
  std::string received_at;  // RFC 3339 UTC, millisecond resolution
  FeatureVector feature_vector;
  GateDecision gate;
  UploadStatus upload = UploadStatus::kNotRequired;

  bool uploaded() const { return upload == UploadStatus::kAcknowledged; }
  bool operator==(const SessionRecord&) const = default;
};

Json to_json(const FeatureVector& v);
FeatureVector feature_vector_from_json(const Json& j);

Json to_json(const GateDecision& d);
GateDecision gate_decision_from_json(const Json& j);

Json to_json(const SessionRecord& r);
SessionRecord session_record_from_json(const Json& j);

Json to_json(const NormalizationParams& p);

/// Centroids, per-recording assignments, J, k, seed and iteration count.
Json cluster_model_to_json(const kmeans::ClusterModel<double>& model,
                           std::span<const std::string> recording_ids);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Current time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp_now();

}  // namespace fogspeech
