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

// The fog node service: ingest -> features -> gate -> persist -> upload,
// plus on-demand clustering over stored sessions.
//
// Concurrency: ingestion for different patients runs in parallel; for one
// patient it is serialized so the gate observes sessions in ingest order.
// Clustering works on a store snapshot and never holds a patient lock.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fogspeech/cloud.hpp"
#include "fogspeech/features.hpp"
#include "fogspeech/gate.hpp"
#include "fogspeech/kmeans.hpp"
#include "fogspeech/store.hpp"

namespace fogspeech {

struct GatewayConfig {
  std::filesystem::path data_dir = "fog-data";
  GateConfig gate;
  PitchOptions pitch;
  CloudTarget cloud;
  std::chrono::milliseconds flush_interval{30000};
  int cluster_restarts = 10;
  std::uint64_t cluster_seed = 42;
  std::string listen_addr = "0.0.0.0:8080";
  bool sync_writes = true;
};

/// Reads FOG_DATA_DIR, FOG_CLOUD_URL, FOG_GATE_Z, FOG_GATE_WINDOW,
/// FOG_GATE_MIN and FOG_LISTEN_ADDR over the defaults. FOG_UPLOAD_RETRIES,
/// FOG_UPLOAD_BACKOFF_S and FOG_FLUSH_INTERVAL_S tune the uploader.
GatewayConfig gateway_config_from_env();

struct ClusterResult {
  kmeans::ClusterModel<double> model;
  std::vector<std::string> recording_ids;  // row order of the model
  std::vector<std::string> patient_ids;    // parallel to recording_ids
  NormalizationParams normalization;
  std::optional<std::string> patient_filter;
  bool k_outside_validated_range = false;
  std::filesystem::path snapshot_path;

  Json to_json() const;
};

class FogGateway {
 public:
  FogGateway(GatewayConfig config, std::shared_ptr<CloudTransport> transport,
             Sleeper sleep = real_sleeper());
  ~FogGateway();

  FogGateway(const FogGateway&) = delete;
  FogGateway& operator=(const FogGateway&) = delete;

  /// Audio errors propagate unchanged and nothing is stored. A recording
  /// with no voiced frame is stored with a null F0 and queued for upload.
  SessionRecord ingest_recording(const std::string& patient_id, const std::string& recording_id,
                                 std::span<const std::uint8_t> wav_bytes);

  /// Throws kNotEnoughSessions when fewer than k voiced sessions match.
  ClusterResult run_clustering(const std::optional<std::string>& patient_id, int k);

  std::vector<SessionRecord> list_sessions(const std::string& patient_id) const;

  void flush_uploads();
  bool wait_for_uploads(std::chrono::milliseconds timeout);

  const GatewayConfig& config() const noexcept { return config_; }
  SessionStore& store() noexcept { return store_; }

 private:
  struct PatientState {
    std::mutex mutex;
    PatientBaseline baseline;
    explicit PatientState(PatientBaseline b) : baseline(std::move(b)) {}
  };

  std::shared_ptr<PatientState> patient_state(const std::string& patient_id);

  GatewayConfig config_;
  SessionStore store_;
  std::mutex patients_mutex_;
  std::map<std::string, std::shared_ptr<PatientState>> patients_;
  std::unique_ptr<UploadQueue> uploads_;
};

}  // namespace fogspeech
