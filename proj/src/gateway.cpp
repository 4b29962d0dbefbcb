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

#include "fogspeech/gateway.hpp"

#include <cmath>
#include <cstdlib>

#include "fogspeech/audio.hpp"

namespace fogspeech {
namespace {

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return (v != nullptr && *v != '\0') ? v : nullptr;
}

double env_double(const char* name, double fallback) {
  const char* v = env(name);
  if (v == nullptr) return fallback;
  char* end = nullptr;
  const double out = std::strtod(v, &end);
  if (end == v || *end != '\0') {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " is not a number: " + v);
  }
  return out;
}

std::size_t env_size(const char* name, std::size_t fallback) {
  const char* v = env(name);
  if (v == nullptr) return fallback;
  char* end = nullptr;
  const long long out = std::strtoll(v, &end, 10);
  if (end == v || *end != '\0' || out < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name) + " is not a non-negative integer: " + v);
  }
  return static_cast<std::size_t>(out);
}

}  // namespace

GatewayConfig gateway_config_from_env() {
  GatewayConfig config;
  if (const char* v = env("FOG_DATA_DIR")) config.data_dir = v;
  if (const char* v = env("FOG_CLOUD_URL")) config.cloud.base_url = v;
  if (const char* v = env("FOG_LISTEN_ADDR")) config.listen_addr = v;
  config.gate.z_threshold = env_double("FOG_GATE_Z", config.gate.z_threshold);
  config.gate.window = env_size("FOG_GATE_WINDOW", config.gate.window);
  config.gate.min_history = env_size("FOG_GATE_MIN", config.gate.min_history);
  config.cloud.max_retries = static_cast<int>(
      env_size("FOG_UPLOAD_RETRIES", static_cast<std::size_t>(config.cloud.max_retries)));
  config.cloud.backoff_base_s = env_double("FOG_UPLOAD_BACKOFF_S", config.cloud.backoff_base_s);
  const double flush_s =
      env_double("FOG_FLUSH_INTERVAL_S", static_cast<double>(config.flush_interval.count()) / 1000.0);
  if (!(flush_s > 0.0) || config.cloud.backoff_base_s < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "FOG_FLUSH_INTERVAL_S must be > 0 and FOG_UPLOAD_BACKOFF_S >= 0");
  }
  config.flush_interval = std::chrono::milliseconds(std::llround(flush_s * 1000.0));
  if (!(config.gate.z_threshold > 0.0) || config.gate.window == 0) {
    throw Error(ErrorCode::kInvalidArgument, "FOG_GATE_Z must be > 0 and FOG_GATE_WINDOW >= 1");
  }
  return config;
}

Json ClusterResult::to_json() const {
  Json j = cluster_model_to_json(model, recording_ids);
  for (std::size_t i = 0; i < patient_ids.size() && i < j["assignments"].size(); ++i) {
    j["assignments"][i]["patient_id"] = patient_ids[i];
  }
  j["normalization"] = fogspeech::to_json(normalization);
  j["patient_id"] = patient_filter ? Json(*patient_filter) : Json(nullptr);
  j["k_outside_validated_range"] = k_outside_validated_range;
  return j;
}

FogGateway::FogGateway(GatewayConfig config, std::shared_ptr<CloudTransport> transport,
                       Sleeper sleep)
    : config_(std::move(config)), store_(config_.data_dir, config_.sync_writes) {
  // Rebuild every baseline by replaying stored sessions in order.
  for (const auto& patient : store_.patients()) {
    auto state = patient_state(patient);
    for (const auto& record : store_.list(patient)) state->baseline.observe(record.feature_vector);
  }
  uploads_ = std::make_unique<UploadQueue>(config_.cloud, std::move(transport), store_,
                                           config_.flush_interval, std::move(sleep));
  uploads_->flush_pending();
}

FogGateway::~FogGateway() {
  if (uploads_) uploads_->stop();
}

std::shared_ptr<FogGateway::PatientState> FogGateway::patient_state(const std::string& patient_id) {
  std::lock_guard lock(patients_mutex_);
  auto& slot = patients_[patient_id];
  if (!slot) slot = std::make_shared<PatientState>(PatientBaseline(patient_id, config_.gate.window));
  return slot;
}

SessionRecord FogGateway::ingest_recording(const std::string& patient_id,
                                           const std::string& recording_id,
                                           std::span<const std::uint8_t> wav_bytes) {
  if (!valid_patient_id(patient_id)) {
    throw Error(ErrorCode::kInvalidPatientId, "invalid patient id '" + patient_id + "'");
  }
  if (recording_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "recording id must not be empty");
  }
  if (store_.contains(patient_id, recording_id)) {
    throw Error(ErrorCode::kDuplicateRecording,
                "recording '" + recording_id + "' already stored for patient '" + patient_id + "'");
  }

  // DSP runs outside the patient lock; only gate + persist are serialized.
  const AudioClip clip = decode_wav(wav_bytes);
  const FeatureVector features = analyze_clip(clip, recording_id, config_.pitch);

  auto state = patient_state(patient_id);
  std::lock_guard lock(state->mutex);
  SessionRecord record;
  record.patient_id = patient_id;
  record.recording_id = recording_id;
  record.received_at = utc_timestamp_now();
  record.feature_vector = features;
  record.gate = decide(state->baseline, features, config_.gate);
  record.upload =
      record.gate.verdict == Verdict::kUpload ? UploadStatus::kPending : UploadStatus::kNotRequired;
  store_.append(record);
  state->baseline.observe(features);

  if (record.upload == UploadStatus::kPending) uploads_->enqueue(patient_id, recording_id);
  return record;
}

ClusterResult FogGateway::run_clustering(const std::optional<std::string>& patient_id, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");

  std::vector<FeatureVector> vectors;
  std::vector<std::string> ids;
  std::vector<std::string> patients;
  for (const auto& r : store_.snapshot()) {
    if (patient_id && r.patient_id != *patient_id) continue;
    if (!r.feature_vector.mean_f0_hz) continue;
    vectors.push_back(r.feature_vector);
    ids.push_back(r.recording_id);
    patients.push_back(r.patient_id);
  }
  const std::size_t needed = std::max<std::size_t>(static_cast<std::size_t>(k), 2);
  if (vectors.size() < needed) {
    throw Error(ErrorCode::kNotEnoughSessions,
                std::to_string(vectors.size()) + " voiced sessions stored, need " +
                    std::to_string(needed) + " for k = " + std::to_string(k));
  }

  ClusterResult result;
  result.patient_filter = patient_id;
  result.k_outside_validated_range = k < 2 || k > 4;
  result.normalization = fit_normalization(vectors);
  kmeans::PointMatrix<double> points(static_cast<Eigen::Index>(vectors.size()), 2);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    points.row(static_cast<Eigen::Index>(i)) =
        apply_normalization(vectors[i], result.normalization).transpose();
  }
  kmeans::FitOptions options;
  options.k = k;
  options.seed = config_.cluster_seed;
  options.restarts = config_.cluster_restarts;
  result.model = kmeans::fit(points, options);
  result.recording_ids = std::move(ids);
  result.patient_ids = std::move(patients);
  result.snapshot_path = store_.write_model(result.to_json(), k, patient_id);
  return result;
}

std::vector<SessionRecord> FogGateway::list_sessions(const std::string& patient_id) const {
  return store_.list(patient_id);
}

void FogGateway::flush_uploads() { uploads_->flush_pending(); }

bool FogGateway::wait_for_uploads(std::chrono::milliseconds timeout) {
  return uploads_->wait_idle(timeout);
}

}  // namespace fogspeech
