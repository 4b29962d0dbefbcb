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

// HTTP/JSON front end of the gateway:
//
//   POST /v1/patients/{patient_id}/recordings   WAV body, X-Recording-Id
//   GET  /v1/patients/{patient_id}/sessions
//   POST /v1/cluster?k=K[&patient_id=P]
//   GET  /healthz

#pragma once

#include <memory>
#include <string>
#include <utility>

namespace fogspeech {

class FogGateway;

/// Splits "host:port"; a bare port binds all interfaces.
std::pair<std::string, int> parse_listen_addr(const std::string& addr);

class HttpApi {
 public:
  explicit HttpApi(FogGateway& gateway);
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); then call serve().
  int bind_any_port(const std::string& host);
  bool serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fogspeech
