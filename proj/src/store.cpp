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

#include "fogspeech/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fogspeech {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kLogSuffix = ".jsonl";

[[noreturn]] void throw_io(const std::string& what) {
  throw Error(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data, const fs::path& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_io("write " + path.string());
    }
    done += static_cast<std::size_t>(n);
  }
}

}  // namespace

bool valid_patient_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

SessionStore::SessionStore(fs::path data_dir, bool sync_writes)
    : data_dir_(std::move(data_dir)), sync_writes_(sync_writes) {
  std::error_code ec;
  fs::create_directories(data_dir_ / "patients", ec);
  fs::create_directories(data_dir_ / "models", ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create data dir " + data_dir_.string() + ": " + ec.message());

  for (const auto& entry : fs::directory_iterator(data_dir_ / "patients")) {
    if (entry.is_regular_file() && entry.path().extension() == kLogSuffix) load_patient(entry.path());
  }
}

fs::path SessionStore::log_path(const std::string& patient_id) const {
  return data_dir_ / "patients" / (patient_id + std::string(kLogSuffix));
}

void SessionStore::load_patient(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  in.close();

  const std::string patient_id = path.stem().string();
  PatientLog& log = patients_[patient_id];

  std::size_t pos = 0;
  std::size_t good_end = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    const bool complete = nl != std::string::npos;
    const std::string line = content.substr(pos, complete ? nl - pos : std::string::npos);
    const std::size_t next = complete ? nl + 1 : content.size();

    try {
      SessionRecord rec = session_record_from_json(Json::parse(line));
      if (!complete) {
        // Whole record but the newline never landed; finish the line.
        std::ofstream fix(path, std::ios::binary | std::ios::app);
        fix << '\n';
      }
      auto [it, inserted] = log.by_recording.try_emplace(rec.recording_id, log.records.size());
      if (inserted) {
        log.records.push_back(std::move(rec));
        ++recovery_.records;
      } else {
        log.records[it->second] = std::move(rec);
      }
      good_end = next;
    } catch (const std::exception&) {
      if (next == content.size()) {
        // Torn tail from an interrupted append: drop it so the next append
        // starts on a clean line.
        fs::resize_file(path, good_end);
        ++recovery_.torn_tails_truncated;
      } else {
        std::cerr << "warning: skipping corrupt line in " << path << "\n";
        ++recovery_.corrupt_lines_skipped;
        good_end = next;
      }
    }
    pos = next;
  }
}

void SessionStore::append_line(const std::string& patient_id, const std::string& line) {
  const fs::path path = log_path(patient_id);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw_io("open " + path.string());
  try {
    write_all(fd, line + "\n", path);
    if (sync_writes_ && ::fdatasync(fd) != 0) throw_io("fdatasync " + path.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

void SessionStore::append(const SessionRecord& record) {
  if (!valid_patient_id(record.patient_id)) {
    throw Error(ErrorCode::kInvalidPatientId, "invalid patient id '" + record.patient_id + "'");
  }
  std::lock_guard lock(mutex_);
  auto existing = patients_.find(record.patient_id);
  if (existing != patients_.end() && existing->second.by_recording.count(record.recording_id) != 0) {
    throw Error(ErrorCode::kDuplicateRecording, "recording '" + record.recording_id +
                                                    "' already stored for patient '" +
                                                    record.patient_id + "'");
  }
  append_line(record.patient_id, to_json(record).dump());
  auto& log = patients_[record.patient_id];
  log.by_recording.emplace(record.recording_id, log.records.size());
  log.records.push_back(record);
}

void SessionStore::update(const SessionRecord& record) {
  std::lock_guard lock(mutex_);
  auto pit = patients_.find(record.patient_id);
  if (pit == patients_.end()) {
    throw Error(ErrorCode::kUnknownPatient, "unknown patient '" + record.patient_id + "'");
  }
  auto rit = pit->second.by_recording.find(record.recording_id);
  if (rit == pit->second.by_recording.end()) {
    throw Error(ErrorCode::kInvalidArgument, "no stored recording '" + record.recording_id + "'");
  }
  append_line(record.patient_id, to_json(record).dump());
  pit->second.records[rit->second] = record;
}

bool SessionStore::has_patient(const std::string& patient_id) const {
  std::lock_guard lock(mutex_);
  return patients_.count(patient_id) != 0;
}

bool SessionStore::contains(const std::string& patient_id, const std::string& recording_id) const {
  std::lock_guard lock(mutex_);
  auto it = patients_.find(patient_id);
  return it != patients_.end() && it->second.by_recording.count(recording_id) != 0;
}

std::vector<SessionRecord> SessionStore::list(const std::string& patient_id) const {
  std::lock_guard lock(mutex_);
  auto it = patients_.find(patient_id);
  if (it == patients_.end()) {
    throw Error(ErrorCode::kUnknownPatient, "unknown patient '" + patient_id + "'");
  }
  return it->second.records;
}

std::optional<SessionRecord> SessionStore::find(const std::string& patient_id,
                                                const std::string& recording_id) const {
  std::lock_guard lock(mutex_);
  auto it = patients_.find(patient_id);
  if (it == patients_.end()) return std::nullopt;
  auto rit = it->second.by_recording.find(recording_id);
  if (rit == it->second.by_recording.end()) return std::nullopt;
  return it->second.records[rit->second];
}

std::vector<SessionRecord> SessionStore::snapshot() const {
  std::lock_guard lock(mutex_);
  std::vector<SessionRecord> out;
  for (const auto& [id, log] : patients_) out.insert(out.end(), log.records.begin(), log.records.end());
  return out;
}

std::vector<SessionRecord> SessionStore::pending_uploads() const {
  std::lock_guard lock(mutex_);
  std::vector<SessionRecord> out;
  for (const auto& [id, log] : patients_) {
    for (const auto& r : log.records) {
      if (r.upload == UploadStatus::kPending) out.push_back(r);
    }
  }
  return out;
}

std::vector<std::string> SessionStore::patients() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, log] : patients_) out.push_back(id);
  return out;
}

fs::path SessionStore::write_model(const Json& model, int k,
                                   const std::optional<std::string>& patient_filter) {
  std::size_t seq;
  {
    std::lock_guard lock(mutex_);
    seq = ++model_counter_;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  std::string name = "cluster_k" + std::to_string(k);
  if (patient_filter) name += "_" + *patient_filter;
  name += "_" + std::to_string(ms) + "_" + std::to_string(seq) + ".json";

  const fs::path final_path = data_dir_ / "models" / name;
  const fs::path tmp_path = final_path.string() + ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp_path.string());
    out << model.dump(2) << "\n";
  }
  fs::rename(tmp_path, final_path);
  return final_path;
}

}  // namespace fogspeech
