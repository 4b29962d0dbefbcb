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

#include "fogspeech/error.hpp"

namespace fogspeech {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedContainer: return "MalformedContainer";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kUnsupportedRate: return "UnsupportedRate";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kClipTooShort: return "ClipTooShort";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kNoVoicedFrames: return "NoVoicedFrames";
    case ErrorCode::kTrackMismatch: return "TrackMismatch";
    case ErrorCode::kDegenerateFeature: return "DegenerateFeature";
    case ErrorCode::kTooManyClusters: return "TooManyClusters";
    case ErrorCode::kNotEnoughSessions: return "NotEnoughSessions";
    case ErrorCode::kUnknownPatient: return "UnknownPatient";
    case ErrorCode::kInvalidPatientId: return "InvalidPatientId";
    case ErrorCode::kDuplicateRecording: return "DuplicateRecording";
    case ErrorCode::kCloudUnreachable: return "CloudUnreachable";
    case ErrorCode::kWorkloadFailed: return "WorkloadFailed";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace fogspeech
