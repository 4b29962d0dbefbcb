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

#include "fogspeech/http_api.hpp"

#include <charconv>

// Eigen first: <resolv.h> from httplib defines _res.
#include "fogspeech/gateway.hpp"

#include <httplib.h>

namespace fogspeech {
namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send_json(res, status, Json{{"error", code}, {"message", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownPatient: return 404;
    case ErrorCode::kDuplicateRecording: return 409;
    case ErrorCode::kNotEnoughSessions:
    case ErrorCode::kTooManyClusters: return 422;
    case ErrorCode::kIo: return 500;
    default: return 400;
  }
}

}  // namespace

std::pair<std::string, int> parse_listen_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  const std::string host = colon == std::string::npos ? "0.0.0.0" : addr.substr(0, colon);
  const std::string port_text = colon == std::string::npos ? addr : addr.substr(colon + 1);
  int port = 0;
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "bad listen address '" + addr + "'");
  }
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') {
    return {host.substr(1, host.size() - 2), port};
  }
  return {host.empty() ? "0.0.0.0" : host, port};
}

struct HttpApi::Impl {
  FogGateway& gateway;
  httplib::Server server;

  explicit Impl(FogGateway& g) : gateway(g) { routes(); }

  void routes() {
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, Json{{"status", "ok"}});
    });

    server.Post(R"(/v1/patients/([^/]+)/recordings)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const std::string patient = req.matches[1];
                  const std::string recording = req.get_header_value("X-Recording-Id");
                  if (recording.empty()) {
                    send_error(res, 400, "MissingRecordingId", "X-Recording-Id header is required");
                    return;
                  }
                  const auto* data = reinterpret_cast<const std::uint8_t*>(req.body.data());
                  try {
                    const SessionRecord record = gateway.ingest_recording(
                        patient, recording, std::span<const std::uint8_t>(data, req.body.size()));
                    send_json(res, 201, to_json(record));
                  } catch (const Error& e) {
                    send_error(res, status_for(e.code()), e.name(), e.what());
                  }
                });

    server.Get(R"(/v1/patients/([^/]+)/sessions)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 try {
                   Json out = Json::array();
                   for (const auto& r : gateway.list_sessions(req.matches[1])) {
                     out.push_back(to_json(r));
                   }
                   send_json(res, 200, out);
                 } catch (const Error& e) {
                   send_error(res, status_for(e.code()), e.name(), e.what());
                 }
               });

    server.Post("/v1/cluster", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string k_text = req.get_param_value("k");
      int k = 0;
      const auto [ptr, ec] = std::from_chars(k_text.data(), k_text.data() + k_text.size(), k);
      if (k_text.empty() || ec != std::errc() || ptr != k_text.data() + k_text.size() || k < 1) {
        send_error(res, 400, code_name(ErrorCode::kInvalidArgument),
                   "query parameter k must be an integer >= 1");
        return;
      }
      std::optional<std::string> patient;
      if (req.has_param("patient_id")) patient = req.get_param_value("patient_id");
      try {
        send_json(res, 200, gateway.run_clustering(patient, k).to_json());
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), e.name(), e.what());
      }
    });

    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            if (ep) std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            send_error(res, 500, "Internal", e.what());
            return;
          } catch (...) {
          }
          send_error(res, 500, "Internal", "unknown error");
        });
  }
};

HttpApi::HttpApi(FogGateway& gateway) : impl_(std::make_unique<Impl>(gateway)) {}

HttpApi::~HttpApi() { stop(); }

bool HttpApi::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int HttpApi::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpApi::serve() { return impl_->server.listen_after_bind(); }

void HttpApi::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpApi::running() const { return impl_->server.is_running(); }

}  // namespace fogspeech
