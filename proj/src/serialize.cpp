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

#include "fogspeech/serialize.hpp"

#include <charconv>
#include <chrono>
#include <ctime>

namespace fogspeech {

std::string_view upload_status_name(UploadStatus s) {
  switch (s) {
    case UploadStatus::kNotRequired: return "not_required";
    case UploadStatus::kPending: return "pending";
    case UploadStatus::kAcknowledged: return "acknowledged";
  }
  return "unknown";
}

UploadStatus parse_upload_status(std::string_view s) {
  for (auto v : {UploadStatus::kNotRequired, UploadStatus::kPending, UploadStatus::kAcknowledged}) {
    if (upload_status_name(v) == s) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown upload status '" + std::string(s) + "'");
}

Json to_json(const FeatureVector& v) {
  Json j;
  j["recording_id"] = v.recording_id;
  j["mean_f0_hz"] = v.mean_f0_hz ? Json(*v.mean_f0_hz) : Json(nullptr);
  j["mean_intensity_db"] = v.mean_intensity_db;
  j["voiced_ratio"] = v.voiced_ratio;
  return j;
}

FeatureVector feature_vector_from_json(const Json& j) {
  FeatureVector v;
  v.recording_id = j.at("recording_id").get<std::string>();
  if (!j.at("mean_f0_hz").is_null()) v.mean_f0_hz = j.at("mean_f0_hz").get<double>();
  v.mean_intensity_db = j.at("mean_intensity_db").get<double>();
  v.voiced_ratio = j.at("voiced_ratio").get<double>();
  return v;
}

Json to_json(const GateDecision& d) {
  return Json{{"verdict", verdict_name(d.verdict)},
              {"f0_z", d.f0_z},
              {"intensity_z", d.intensity_z},
              {"reason", reason_name(d.reason)}};
}

GateDecision gate_decision_from_json(const Json& j) {
  GateDecision d;
  d.verdict = parse_verdict(j.at("verdict").get<std::string>());
  d.f0_z = j.at("f0_z").get<double>();
  d.intensity_z = j.at("intensity_z").get<double>();
  d.reason = parse_reason(j.at("reason").get<std::string>());
  return d;
}

Json to_json(const SessionRecord& r) {
  Json j;
  j["patient_id"] = r.patient_id;
  j["recording_id"] = r.recording_id;
  j["received_at"] = r.received_at;
  j["feature_vector"] = to_json(r.feature_vector);
  j["gate"] = to_json(r.gate);
  j["uploaded"] = r.uploaded();
  j["upload_status"] = upload_status_name(r.upload);
  return j;
}

SessionRecord session_record_from_json(const Json& j) {
  SessionRecord r;
  r.patient_id = j.at("patient_id").get<std::string>();
  r.recording_id = j.at("recording_id").get<std::string>();
  r.received_at = j.at("received_at").get<std::string>();
  r.feature_vector = feature_vector_from_json(j.at("feature_vector"));
  r.gate = gate_decision_from_json(j.at("gate"));
  r.upload = parse_upload_status(j.at("upload_status").get<std::string>());
  return r;
}

Json to_json(const NormalizationParams& p) {
  return Json{{"mean", {p.mean[0], p.mean[1]}},
              {"stddev", {p.stddev[0], p.stddev[1]}},
              {"degenerate", {p.degenerate[0], p.degenerate[1]}}};
}

Json cluster_model_to_json(const kmeans::ClusterModel<double>& model,
                           std::span<const std::string> recording_ids) {
  Json centroids = Json::array();
  for (Eigen::Index c = 0; c < model.centroids.rows(); ++c) {
    Json row = Json::array();
    for (Eigen::Index d = 0; d < model.centroids.cols(); ++d) row.push_back(model.centroids(c, d));
    centroids.push_back(std::move(row));
  }
  Json assignments = Json::array();
  for (std::size_t i = 0; i < model.assignment.size(); ++i) {
    assignments.push_back(
        {{"recording_id", i < recording_ids.size() ? recording_ids[i] : std::to_string(i)},
         {"cluster", model.assignment[i]}});
  }
  return Json{{"k", model.k},
              {"seed", model.seed},
              {"objective_j", model.objective_j},
              {"iterations", model.iterations},
              {"centroids", std::move(centroids)},
              {"assignments", std::move(assignments)}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp_now() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t secs = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof(out), "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

}  // namespace fogspeech
