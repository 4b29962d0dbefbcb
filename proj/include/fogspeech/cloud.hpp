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

// Client side of the cloud backend: summary uploads with exponential
// backoff, and a background queue that keeps retrying pending records.

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "fogspeech/serialize.hpp"

namespace fogspeech {

inline constexpr std::string_view kUploadPath = "/v1/uploads";

struct CloudTarget {
  std::string base_url;
  double timeout_s = 5.0;
  int max_retries = 3;
  double backoff_base_s = 0.5;
};

/// HTTP status, or 0 when the request never got a response.
struct TransportResponse {
  int status = 0;
  std::string error;

  bool ok() const { return status >= 200 && status < 300; }
};

class CloudTransport {
 public:
  virtual ~CloudTransport() = default;
  virtual TransportResponse post_json(std::string_view path, const std::string& body) = 0;
};

/// cpp-httplib backed transport to CloudTarget::base_url.
class HttpCloudTransport : public CloudTransport {
 public:
  explicit HttpCloudTransport(CloudTarget target);
  TransportResponse post_json(std::string_view path, const std::string& body) override;

 private:
  CloudTarget target_;
};

/// Used when no cloud URL is configured: every upload stays pending.
class DisconnectedTransport : public CloudTransport {
 public:
  TransportResponse post_json(std::string_view, const std::string&) override {
    return {0, "no cloud endpoint configured"};
  }
};

using Sleeper = std::function<void(std::chrono::duration<double>)>;

/// std::this_thread::sleep_for.
Sleeper real_sleeper();

struct UploadOutcome {
  bool acknowledged = false;
  int attempts = 0;
  TransportResponse last;
};

/// The cloud's view of a session: the record JSON. Audio is never part of it.
std::string upload_body(const SessionRecord& record);

/// POSTs the summary; any non-2xx answer or transport failure is retried up
/// to max_retries times, sleeping backoff_base_s * 2^(r-1) before retry r.
/// Throws kInvalidArgument for a record whose verdict is not UPLOAD.
UploadOutcome upload_summary(const CloudTarget& target, const SessionRecord& record,
                             CloudTransport& transport, const Sleeper& sleep = real_sleeper());

class SessionStore;

/// Single worker draining pending uploads; at most one upload per record is
/// in flight. Pending records are re-queued every flush interval.
class UploadQueue {
 public:
  UploadQueue(CloudTarget target, std::shared_ptr<CloudTransport> transport,
              SessionStore& store, std::chrono::milliseconds flush_interval,
              Sleeper sleep = real_sleeper());
  ~UploadQueue();

  UploadQueue(const UploadQueue&) = delete;
  UploadQueue& operator=(const UploadQueue&) = delete;

  void enqueue(const std::string& patient_id, const std::string& recording_id);
  /// Queues every record the store marks pending.
  void flush_pending();
  /// Blocks until the queue is empty and the worker is idle.
  bool wait_idle(std::chrono::milliseconds timeout);
  void stop();

  std::size_t acknowledged() const { return acknowledged_.load(); }
  std::size_t failures() const { return failures_.load(); }

 private:
  using Key = std::pair<std::string, std::string>;

  void run();
  void process(const Key& key);

  CloudTarget target_;
  std::shared_ptr<CloudTransport> transport_;
  SessionStore& store_;
  std::chrono::milliseconds flush_interval_;
  Sleeper sleep_;

  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable idle_;
  std::deque<Key> queue_;
  std::set<Key> queued_;
  bool busy_ = false;
  bool stopping_ = false;
  std::atomic<std::size_t> acknowledged_{0};
  std::atomic<std::size_t> failures_{0};
  std::thread worker_;
};

}  // namespace fogspeech
