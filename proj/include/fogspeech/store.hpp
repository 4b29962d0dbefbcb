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

// Session persistence for the fog node.
//
// Layout under the data directory:
//   patients/<patient_id>.jsonl   one SessionRecord JSON per line, append-only
//   models/cluster_*.json         clustering snapshots
//
// A record whose upload state changes is appended again; on load the last
// line for a recording id wins while the first line fixes its position. A
// torn final line (crash mid-append) is truncated away during recovery.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogspeech/serialize.hpp"

namespace fogspeech {

/// Letters, digits, '.', '_' and '-', 1 to 128 chars, not starting with '.'.
bool valid_patient_id(std::string_view id);

struct RecoveryReport {
  std::size_t records = 0;
  std::size_t torn_tails_truncated = 0;
  std::size_t corrupt_lines_skipped = 0;
};

class SessionStore {
 public:
  /// Creates the directory layout if needed and loads every patient log.
  explicit SessionStore(std::filesystem::path data_dir, bool sync_writes = true);

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  /// Throws kDuplicateRecording if the recording id exists for the patient.
  void append(const SessionRecord& record);

  /// Persists a new version of an existing record (e.g. upload acknowledged).
  void update(const SessionRecord& record);

  bool has_patient(const std::string& patient_id) const;
  bool contains(const std::string& patient_id, const std::string& recording_id) const;

  /// Chronological. Throws kUnknownPatient.
  std::vector<SessionRecord> list(const std::string& patient_id) const;
  std::optional<SessionRecord> find(const std::string& patient_id,
                                    const std::string& recording_id) const;

  /// Consistent copy of all records, patients in lexical order.
  std::vector<SessionRecord> snapshot() const;
  std::vector<SessionRecord> pending_uploads() const;
  std::vector<std::string> patients() const;

  /// Writes a clustering snapshot atomically; returns its path.
  std::filesystem::path write_model(const Json& model, int k,
                                    const std::optional<std::string>& patient_filter);

  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }
  const RecoveryReport& recovery() const noexcept { return recovery_; }

 private:
  struct PatientLog {
    std::vector<SessionRecord> records;
    std::map<std::string, std::size_t> by_recording;
  };

  std::filesystem::path log_path(const std::string& patient_id) const;
  void load_patient(const std::filesystem::path& path);
  void append_line(const std::string& patient_id, const std::string& line);

  std::filesystem::path data_dir_;
  bool sync_writes_;
  mutable std::mutex mutex_;
  std::map<std::string, PatientLog> patients_;
  RecoveryReport recovery_;
  std::size_t model_counter_ = 0;
};

}  // namespace fogspeech
