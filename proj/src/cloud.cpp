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

#include "fogspeech/cloud.hpp"

#include <cmath>
#include <iostream>

#include <httplib.h>

#include "fogspeech/store.hpp"

namespace fogspeech {

HttpCloudTransport::HttpCloudTransport(CloudTarget target) : target_(std::move(target)) {
  if (!(target_.timeout_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "timeout_s must be > 0");
  if (target_.max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
}

TransportResponse HttpCloudTransport::post_json(std::string_view path, const std::string& body) {
  httplib::Client client(target_.base_url);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(target_.timeout_s));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto res = client.Post(std::string(path), body, "application/json");
  if (!res) return {0, httplib::to_string(res.error())};
  return {res->status, res->status >= 300 ? res->body : std::string()};
}

Sleeper real_sleeper() {
  return [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
}

std::string upload_body(const SessionRecord& record) { return to_json(record).dump(); }

UploadOutcome upload_summary(const CloudTarget& target, const SessionRecord& record,
                             CloudTransport& transport, const Sleeper& sleep) {
  if (record.gate.verdict != Verdict::kUpload) {
    throw Error(ErrorCode::kInvalidArgument,
                "recording '" + record.recording_id + "' is not gated for upload");
  }
  const std::string body = upload_body(record);
  UploadOutcome outcome;
  for (int attempt = 0; attempt <= target.max_retries; ++attempt) {
    if (attempt > 0 && sleep) {
      sleep(std::chrono::duration<double>(target.backoff_base_s * std::ldexp(1.0, attempt - 1)));
    }
    ++outcome.attempts;
    outcome.last = transport.post_json(kUploadPath, body);
    if (outcome.last.ok()) {
      outcome.acknowledged = true;
      break;
    }
  }
  return outcome;
}

UploadQueue::UploadQueue(CloudTarget target, std::shared_ptr<CloudTransport> transport,
                         SessionStore& store, std::chrono::milliseconds flush_interval,
                         Sleeper sleep)
    : target_(std::move(target)),
      transport_(std::move(transport)),
      store_(store),
      flush_interval_(flush_interval),
      sleep_(std::move(sleep)) {
  worker_ = std::thread([this] { run(); });
}

UploadQueue::~UploadQueue() { stop(); }

void UploadQueue::stop() {
  {
    std::lock_guard lock(mutex_);
    if (stopping_ && !worker_.joinable()) return;
    stopping_ = true;
  }
  wake_.notify_all();
  if (worker_.joinable()) worker_.join();
  idle_.notify_all();
}

void UploadQueue::enqueue(const std::string& patient_id, const std::string& recording_id) {
  {
    std::lock_guard lock(mutex_);
    Key key{patient_id, recording_id};
    if (!queued_.insert(key).second) return;
    queue_.push_back(std::move(key));
  }
  wake_.notify_one();
}

void UploadQueue::flush_pending() {
  for (const auto& r : store_.pending_uploads()) enqueue(r.patient_id, r.recording_id);
}

bool UploadQueue::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  return idle_.wait_for(lock, timeout, [this] { return (queue_.empty() && !busy_) || stopping_; });
}

void UploadQueue::run() {
  auto next_flush = std::chrono::steady_clock::now() + flush_interval_;
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    if (queue_.empty()) {
      idle_.notify_all();
      wake_.wait_until(lock, next_flush, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) break;
      if (queue_.empty()) {
        lock.unlock();
        flush_pending();
        lock.lock();
        next_flush = std::chrono::steady_clock::now() + flush_interval_;
        continue;
      }
    }
    Key key = std::move(queue_.front());
    queue_.pop_front();
    busy_ = true;
    lock.unlock();
    process(key);
    lock.lock();
    queued_.erase(key);
    busy_ = false;
  }
}

void UploadQueue::process(const Key& key) {
  try {
    auto record = store_.find(key.first, key.second);
    if (!record || record->upload != UploadStatus::kPending) return;
    const UploadOutcome outcome = upload_summary(target_, *record, *transport_, sleep_);
    if (outcome.acknowledged) {
      record->upload = UploadStatus::kAcknowledged;
      store_.update(*record);
      ++acknowledged_;
    } else {
      // Stays pending; the next flush cycle picks it up again.
      ++failures_;
      std::cerr << "warning: " << code_name(ErrorCode::kCloudUnreachable) << " for "
                << key.first << "/" << key.second << " after " << outcome.attempts
                << " attempts: "
                << (outcome.last.status ? "HTTP " + std::to_string(outcome.last.status)
                                        : outcome.last.error)
                << "\n";
    }
  } catch (const std::exception& e) {
    ++failures_;
    std::cerr << "warning: upload of " << key.first << "/" << key.second
              << " failed: " << e.what() << "\n";
  }
}

}  // namespace fogspeech
