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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fogspeech {

enum class ErrorCode {
  kMalformedContainer,
  kUnsupportedEncoding,
  kUnsupportedRate,
  kEmptyAudio,
  kClipTooShort,
  kInvalidRange,
  kNoVoicedFrames,
  kTrackMismatch,
  kDegenerateFeature,
  kTooManyClusters,
  kNotEnoughSessions,
  kUnknownPatient,
  kInvalidPatientId,
  kDuplicateRecording,
  kCloudUnreachable,
  kWorkloadFailed,
  kInvalidArgument,
  kIo,
};

/// Stable wire name of an error code, e.g. "MalformedContainer".
std::string_view code_name(ErrorCode code);

/// Base exception for every failure the library reports. The code is part of
/// the public contract (it is what the HTTP API and CLI print).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return code_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace fogspeech
