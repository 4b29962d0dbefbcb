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

// Batch analysis of a directory of recordings: features for every clip,
// then a k-means sweep written as JSON models and plot-ready CSV tables.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fogspeech/features.hpp"

namespace fogspeech {

struct CorpusEntry {
  std::string recording_id;
  std::filesystem::path path;
  std::optional<std::string> label;  // copied to outputs, never clustered on
};

struct CorpusManifest {
  std::vector<CorpusEntry> entries;
};

/// dir/manifest.csv (header "recording_id,file[,label]") when present,
/// otherwise every *.wav in dir sorted by name with the stem as id. Throws
/// kInvalidArgument on duplicate ids or missing files.
CorpusManifest load_manifest(const std::filesystem::path& dir);

inline constexpr std::string_view kClusterCsvHeader =
    "recording_id,mean_f0_hz,mean_intensity_db,f0_norm,intensity_norm,cluster";

struct AnalyzeOptions {
  std::vector<int> k_list{2, 3, 4};
  std::uint64_t seed = 42;
  int restarts = 10;
  PitchOptions pitch;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

enum ExitStatus : int { kExitOk = 0, kExitPartial = 1, kExitFatal = 2 };

struct AnalyzeSummary {
  int exit_code = kExitOk;
  std::vector<FeatureVector> features;  // successfully processed, manifest order
  std::vector<std::string> failures;    // "<id>: <code>: <message>"
  std::vector<std::filesystem::path> written;
};

/// Never throws for per-file problems: those are listed in failures and the
/// file is skipped. Fatal problems (unreadable corpus, too few usable clips)
/// produce kExitFatal with the reason in failures.
AnalyzeSummary analyze_corpus(const std::filesystem::path& dir,
                              const std::filesystem::path& out_dir,
                              const AnalyzeOptions& options, std::ostream& log);

/// Decode + features for one file; throws NoVoicedFramesError when silent.
FeatureVector extract_one(const std::filesystem::path& file, const PitchOptions& pitch = {});

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace fogspeech
