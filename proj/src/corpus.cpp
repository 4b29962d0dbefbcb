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

#include "fogspeech/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "fogspeech/audio.hpp"
#include "fogspeech/kmeans.hpp"
#include "fogspeech/serialize.hpp"

namespace fogspeech {
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  for (auto& f : fields) {
    if (!f.empty() && f.back() == '\r') f.pop_back();
  }
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

using ClipOutcome = std::variant<FeatureVector, std::string>;

ClipOutcome process_entry(const CorpusEntry& entry, const PitchOptions& pitch) {
  try {
    FeatureVector v = analyze_clip(decode_wav(read_file(entry.path)), entry.recording_id, pitch);
    if (!v.mean_f0_hz) {
      return entry.recording_id + ": " + std::string(code_name(ErrorCode::kNoVoicedFrames)) +
             ": no voiced frames";
    }
    return v;
  } catch (const Error& e) {
    return entry.recording_id + ": " + std::string(e.name()) + ": " + e.what();
  } catch (const std::exception& e) {
    return entry.recording_id + ": Error: " + e.what();
  }
}

std::vector<ClipOutcome> process_all(const CorpusManifest& manifest, const AnalyzeOptions& options) {
  std::vector<ClipOutcome> outcomes(manifest.entries.size());
  unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1U, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, outcomes.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < outcomes.size(); i = next++) {
      outcomes[i] = process_entry(manifest.entries[i], options.pitch);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return outcomes;
}

}  // namespace

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CorpusManifest load_manifest(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kInvalidArgument, "corpus directory " + dir.string() + " not found");
  }
  CorpusManifest manifest;
  const fs::path manifest_path = dir / "manifest.csv";
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      auto fields = split_csv_line(line);
      if (header) {
        header = false;
        if (!fields.empty() && fields[0] == "recording_id") continue;
      }
      if (fields.size() < 2) {
        throw Error(ErrorCode::kInvalidArgument, "manifest line needs recording_id,file: " + line);
      }
      CorpusEntry e{fields[0], dir / fields[1], std::nullopt};
      if (fields.size() > 2 && !fields[2].empty()) e.label = fields[2];
      manifest.entries.push_back(std::move(e));
    }
  } else {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (auto& f : files) manifest.entries.push_back({f.stem().string(), f, std::nullopt});
  }

  std::set<std::string> seen;
  for (const auto& e : manifest.entries) {
    if (!seen.insert(e.recording_id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate recording id '" + e.recording_id + "'");
    }
    if (!fs::exists(e.path)) {
      throw Error(ErrorCode::kInvalidArgument, "missing file " + e.path.string());
    }
  }
  return manifest;
}

FeatureVector extract_one(const fs::path& file, const PitchOptions& pitch) {
  const AudioClip clip = decode_wav(read_file(file));
  return summarize(extract_pitch(clip, pitch), extract_intensity(clip, pitch.floor_hz),
                   file.stem().string());
}

AnalyzeSummary analyze_corpus(const fs::path& dir, const fs::path& out_dir,
                              const AnalyzeOptions& options, std::ostream& log) {
  AnalyzeSummary summary;
  const auto fatal = [&](const std::string& why) {
    summary.failures.push_back("fatal: " + why);
    summary.exit_code = kExitFatal;
    return summary;
  };

  if (options.k_list.empty()) return fatal("empty k list");
  for (int k : options.k_list) {
    if (k < 1) return fatal("k must be >= 1, got " + std::to_string(k));
  }

  CorpusManifest manifest;
  try {
    manifest = load_manifest(dir);
  } catch (const Error& e) {
    return fatal(e.what());
  }

  const auto outcomes = process_all(manifest, options);
  std::vector<const CorpusEntry*> kept;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (const auto* v = std::get_if<FeatureVector>(&outcomes[i])) {
      summary.features.push_back(*v);
      kept.push_back(&manifest.entries[i]);
    } else {
      const auto& why = std::get<std::string>(outcomes[i]);
      log << "warning: skipping " << why << "\n";
      summary.failures.push_back(why);
    }
  }

  const int k_max = *std::max_element(options.k_list.begin(), options.k_list.end());
  const std::size_t needed = std::max<std::size_t>(static_cast<std::size_t>(k_max), 2);
  if (summary.features.size() < needed) {
    return fatal(std::to_string(summary.features.size()) + " usable recordings, need " +
                 std::to_string(needed));
  }

  try {
    fs::create_directories(out_dir);
    Json features = Json::array();
    for (const auto& v : summary.features) features.push_back(to_json(v));
    write_text(out_dir / "features.json", features.dump(2) + "\n");
    summary.written.push_back(out_dir / "features.json");

    const NormalizationParams norm = fit_normalization(summary.features);
    if (norm.any_degenerate()) {
      log << "warning: " << code_name(ErrorCode::kDegenerateFeature)
          << ": a feature is constant across the corpus; its spread was taken as 1\n";
    }
    kmeans::PointMatrix<double> points(static_cast<Eigen::Index>(summary.features.size()), 2);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < summary.features.size(); ++i) {
      points.row(static_cast<Eigen::Index>(i)) =
          apply_normalization(summary.features[i], norm).transpose();
      ids.push_back(summary.features[i].recording_id);
    }
    const bool any_label = std::any_of(kept.begin(), kept.end(),
                                       [](const CorpusEntry* e) { return e->label.has_value(); });

    for (int k : options.k_list) {
      kmeans::FitOptions fit_options;
      fit_options.k = k;
      fit_options.seed = options.seed;
      fit_options.restarts = options.restarts;
      const auto model = kmeans::fit(points, fit_options);

      Json j = cluster_model_to_json(model, ids);
      j["restarts"] = options.restarts;
      j["normalization"] = to_json(norm);
      const fs::path json_path = out_dir / ("clusters_k" + std::to_string(k) + ".json");
      write_text(json_path, j.dump(2) + "\n");

      std::string csv(kClusterCsvHeader);
      if (any_label) csv += ",label";
      csv += "\n";
      for (std::size_t i = 0; i < summary.features.size(); ++i) {
        const auto& v = summary.features[i];
        const auto row = static_cast<Eigen::Index>(i);
        csv += csv_field(v.recording_id) + "," + format_double(*v.mean_f0_hz) + "," +
               format_double(v.mean_intensity_db) + "," + format_double(points(row, 0)) + "," +
               format_double(points(row, 1)) + "," + std::to_string(model.assignment[i]);
        if (any_label) csv += "," + csv_field(kept[i]->label.value_or(""));
        csv += "\n";
      }
      const fs::path csv_path = out_dir / ("clusters_k" + std::to_string(k) + ".csv");
      write_text(csv_path, csv);
      summary.written.push_back(json_path);
      summary.written.push_back(csv_path);
      log << "k=" << k << " seed=" << options.seed << " J=" << format_double(model.objective_j)
          << " iterations=" << model.iterations << "\n";
    }
  } catch (const Error& e) {
    return fatal(e.what());
  }

  summary.exit_code = summary.failures.empty() ? kExitOk : kExitPartial;
  return summary;
}

}  // namespace fogspeech
