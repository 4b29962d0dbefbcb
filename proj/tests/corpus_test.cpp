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

#include <doctest.h>

#include <set>
#include <sstream>

#include "fogspeech/corpus.hpp"
#include "fogspeech/serialize.hpp"
#include "test_support.hpp"

using namespace fogspeech;
namespace fs = std::filesystem;

namespace {

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream l(line);
    std::string cell;
    while (std::getline(l, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

AnalyzeOptions quick(std::vector<int> ks) {
  AnalyzeOptions o;
  o.k_list = std::move(ks);
  o.jobs = 2;
  return o;
}

}  // namespace

TEST_CASE("manifest from csv or directory listing") {
  testing::TempDir dir("manifest");
  write_bytes(dir.path() / "b.wav", testing::vowel_wav(120, 0.3));
  write_bytes(dir.path() / "a.wav", testing::vowel_wav(220, 0.3));
  auto listing = load_manifest(dir.path());
  REQUIRE(listing.entries.size() == 2);
  CHECK(listing.entries[0].recording_id == "a");
  CHECK_FALSE(listing.entries[0].label);

  { std::ofstream(dir.path() / "manifest.csv") << "recording_id,file,label\nx,b.wav,long_a\ny,a.wav,\n"; }
  auto m = load_manifest(dir.path());
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].recording_id == "x");
  CHECK(*m.entries[0].label == "long_a");
  CHECK_FALSE(m.entries[1].label);

  { std::ofstream(dir.path() / "manifest.csv") << "recording_id,file\nx,b.wav\nx,a.wav\n"; }
  CHECK_THROWS_AS(load_manifest(dir.path()), Error);
  { std::ofstream(dir.path() / "manifest.csv") << "recording_id,file\nx,missing.wav\n"; }
  CHECK_THROWS_AS(load_manifest(dir.path()), Error);
}

TEST_CASE("two distinct clips, k = 2: one cluster each, J = 0") {
  testing::TempDir dir("two"), out("two-out");
  write_bytes(dir.path() / "low.wav", testing::vowel_wav(110, 0.1));
  write_bytes(dir.path() / "high.wav", testing::vowel_wav(240, 0.4));
  std::ostringstream log;
  const auto s = analyze_corpus(dir.path(), out.path(), quick({2}), log);
  CHECK(s.exit_code == kExitOk);
  const auto model = Json::parse(testing::slurp(out.path() / "clusters_k2.json"));
  CHECK(model["objective_j"] == 0.0);
  const auto rows = csv_rows(testing::slurp(out.path() / "clusters_k2.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][5] != rows[2][5]);
}

TEST_CASE("synthetic corpus sweep, skipped files, labels are inert") {
  testing::TempDir dir("corpus"), out("corpus-out"), out2("corpus-out2");
  synth::write_corpus(dir.path(), synth::corpus_plan(24, 3));
  write_bytes(dir.path() / "silent.wav", encode_wav(synth::silence(0.5, 16000)));
  write_bytes(dir.path() / "broken.wav", {'R', 'I', 'F', 'F'});
  { std::ofstream(dir.path() / "manifest.csv", std::ios::app) << "silent,silent.wav,\nbroken,broken.wav,\n"; }

  std::ostringstream log;
  const auto s = analyze_corpus(dir.path(), out.path(), quick({2, 3, 4}), log);
  CHECK(s.exit_code == kExitPartial);
  CHECK(s.features.size() == 24);
  REQUIRE(s.failures.size() == 2);
  CHECK(s.failures[0].find("NoVoicedFrames") != std::string::npos);
  CHECK(s.failures[1].find("MalformedContainer") != std::string::npos);

  CHECK(Json::parse(testing::slurp(out.path() / "features.json")).size() == 24);
  for (int k : {2, 3, 4}) {
    const auto rows = csv_rows(testing::slurp(out.path() / ("clusters_k" + std::to_string(k) + ".csv")));
    REQUIRE(rows.size() == 25);
    CHECK(rows[0].size() == 7);
    CHECK(rows[0][6] == "label");
    std::set<int> used;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const int c = std::stoi(rows[i][5]);
      CHECK(c >= 0);
      CHECK(c < k);
      used.insert(c);
    }
    CHECK(used.size() == static_cast<std::size_t>(k));
  }

  // Permute labels: every clustering column must stay the same.
  std::string manifest = testing::slurp(dir.path() / "manifest.csv");
  for (const auto& [from, to] : {std::pair{"short_a", "TMP"}, std::pair{"phrase", "short_a"},
                                 std::pair{"TMP", "phrase"}}) {
    for (auto p = manifest.find(from); p != std::string::npos; p = manifest.find(from, p + 1)) {
      manifest.replace(p, std::string(from).size(), to);
    }
  }
  { std::ofstream(dir.path() / "manifest.csv", std::ios::trunc) << manifest; }
  (void)analyze_corpus(dir.path(), out2.path(), quick({3}), log);
  const auto a = csv_rows(testing::slurp(out.path() / "clusters_k3.csv"));
  const auto b = csv_rows(testing::slurp(out2.path() / "clusters_k3.csv"));
  REQUIRE(a.size() == b.size());
  bool label_changed = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::vector(a[i].begin(), a[i].begin() + 6) == std::vector(b[i].begin(), b[i].begin() + 6));
    label_changed = label_changed || a[i].size() != b[i].size() || a[i].back() != b[i].back();
  }
  CHECK(label_changed);
}

TEST_CASE("fatal when too few usable clips") {
  testing::TempDir dir("few"), out("few-out");
  write_bytes(dir.path() / "a.wav", testing::vowel_wav(110, 0.1));
  write_bytes(dir.path() / "b.wav", testing::vowel_wav(210, 0.1));
  std::ostringstream log;
  CHECK(analyze_corpus(dir.path(), out.path(), quick({3}), log).exit_code == kExitFatal);
  CHECK(analyze_corpus(dir.path() / "nope", out.path(), quick({2}), log).exit_code == kExitFatal);
  CHECK(analyze_corpus(dir.path(), out.path(), quick({}), log).exit_code == kExitFatal);
}

TEST_CASE("extract_one") {
  testing::TempDir dir("one");
  write_bytes(dir.path() / "sine.wav", encode_wav(synth::sine(220.0, 0.5, 1.0, 16000)));
  const auto v = extract_one(dir.path() / "sine.wav");
  CHECK(v.recording_id == "sine");
  CHECK(std::abs(*v.mean_f0_hz - 220.0) < 1.0);

  write_bytes(dir.path() / "quiet.wav", encode_wav(synth::silence(1.0, 16000)));
  CHECK_THROWS_AS(extract_one(dir.path() / "quiet.wav"), NoVoicedFramesError);

  std::vector<std::int16_t> stereo;
  const auto mono = synth::sine(150.0, 0.4, 1.0, 16000);
  for (double s : mono.samples()) {
    const auto q = static_cast<std::int16_t>(std::lround(s * 32767.0));
    stereo.push_back(q);
    stereo.push_back(q);
  }
  write_bytes(dir.path() / "stereo.wav", encode_wav_pcm16(stereo, 2, 16000));
  CHECK(std::abs(*extract_one(dir.path() / "stereo.wav").mean_f0_hz - 150.0) < 1.0);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(200.0) == "200");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
