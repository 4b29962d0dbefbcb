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

#include <random>

#include "fogspeech/gate.hpp"
#include "oracles.hpp"

using namespace fogspeech;

namespace {

FeatureVector fv(double f0, double db) { return {"r", f0, db, 1.0}; }

/// 20 sessions with F0 mean 120 and population std 5, intensity 70 +/- 1.
PatientBaseline reference_baseline() {
  PatientBaseline b("p", 20);
  for (int i = 0; i < 20; ++i) b.observe(fv(i % 2 ? 125.0 : 115.0, i % 2 ? 71.0 : 69.0));
  return b;
}

}  // namespace

TEST_CASE("decide against a known baseline") {
  const auto b = reference_baseline();
  const auto local = decide(b, fv(121.0, 70.0));
  CHECK(local.verdict == Verdict::kLocal);
  CHECK(local.reason == GateReason::kWithinBaseline);
  CHECK(local.f0_z == doctest::Approx(0.2));

  const auto up = decide(b, fv(135.0, 70.0));
  CHECK(up.verdict == Verdict::kUpload);
  CHECK(up.reason == GateReason::kThresholdExceeded);
  CHECK(up.f0_z == doctest::Approx(3.0));

  const auto loud = decide(b, fv(120.0, 73.5));
  CHECK(loud.verdict == Verdict::kUpload);
  CHECK(loud.intensity_z == doctest::Approx(3.5));
}

TEST_CASE("cold start for any vector below minimum history") {
  std::mt19937 rng(2);
  for (std::size_t n = 0; n < 5; ++n) {
    PatientBaseline b("p", 20);
    for (std::size_t i = 0; i < n; ++i) b.observe(fv(120.0, 70.0));
    for (int t = 0; t < 20; ++t) {
      const auto d = decide(b, fv(std::uniform_real_distribution<double>(50, 600)(rng), 60.0));
      CHECK(d.verdict == Verdict::kUpload);
      CHECK(d.reason == GateReason::kColdStart);
    }
  }
}

TEST_CASE("unvoiced sessions upload and stay out of the baseline") {
  PatientBaseline b = reference_baseline();
  const FeatureVector silent{"s", std::nullopt, 30.0, 0.0};
  const auto d = decide(b, silent);
  CHECK(d.verdict == Verdict::kUpload);
  CHECK(d.reason == GateReason::kNoVoicedFrames);
  const auto before = b.window();
  b.observe(silent);
  CHECK(b.window() == before);
}

TEST_CASE("ring semantics") {
  PatientBaseline b("p", 20);
  b.observe(fv(100.0, 60.0));
  CHECK(b.size() == 1);
  for (int i = 0; i < 20; ++i) b.observe(fv(200.0 + i, 60.0));
  CHECK(b.size() == 20);
  CHECK(*b.window().front().mean_f0_hz == 200.0);
  CHECK(*b.window().back().mean_f0_hz == 219.0);
  const auto c = observe(b, fv(1.0, 1.0));
  CHECK(b.size() == 20);
  CHECK(*c.window().back().mean_f0_hz == 1.0);
  CHECK(*c.window().front().mean_f0_hz == 201.0);
}

TEST_CASE("observing a vector pulls it toward the mean") {
  std::mt19937 rng(6);
  std::normal_distribution<double> f0(150.0, 10.0), db(65.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    PatientBaseline b("p", 20);
    std::vector<double> hf, hd;
    const int n = std::uniform_int_distribution<int>(5, 19)(rng);
    for (int i = 0; i < n; ++i) {
      const auto v = fv(f0(rng), db(rng));
      b.observe(v);
      hf.push_back(*v.mean_f0_hz);
      hd.push_back(v.mean_intensity_db);
    }
    const auto probe = fv(f0(rng) + 15.0, db(rng) - 4.0);
    const auto before = decide(b, probe);
    CHECK(before.f0_z == doctest::Approx(oracle::scratch_z(hf, *probe.mean_f0_hz)));
    CHECK(before.intensity_z == doctest::Approx(oracle::scratch_z(hd, probe.mean_intensity_db)));
    const auto after = decide(observe(b, probe), probe);
    CHECK(after.f0_z < before.f0_z);
    CHECK(after.intensity_z < before.intensity_z);
  }
}

TEST_CASE("decide is pure and monotone in the F0 deviation") {
  const auto b = reference_baseline();
  CHECK(decide(b, fv(131.0, 70.0)) == decide(b, fv(131.0, 70.0)));
  bool seen_upload = false;
  for (double f = 120.0; f < 200.0; f += 0.25) {
    const auto d = decide(b, fv(f, 70.0));
    if (seen_upload) CHECK(d.verdict == Verdict::kUpload);
    seen_upload = seen_upload || d.verdict == Verdict::kUpload;
  }
  CHECK(seen_upload);
}

TEST_CASE("threshold boundary is LOCAL") {
  // mean 120, std 5: F0 130 gives z = 2 exactly.
  const auto b = reference_baseline();
  const auto d = decide(b, fv(130.0, 70.0));
  CHECK(d.f0_z == 2.0);
  CHECK(d.verdict == Verdict::kLocal);
  CHECK(decide(b, fv(130.001, 70.0)).verdict == Verdict::kUpload);
}

TEST_CASE("constant history uses the std floor") {
  PatientBaseline b("p", 20);
  for (int i = 0; i < 6; ++i) b.observe(fv(120.0, 70.0));
  CHECK(decide(b, fv(120.0, 70.0)).verdict == Verdict::kLocal);
  const auto d = decide(b, fv(120.0 + 1e-5, 70.0));
  CHECK(d.f0_z == doctest::Approx(10.0));
  CHECK(d.verdict == Verdict::kUpload);
}

TEST_CASE("names round-trip") {
  for (auto r : {GateReason::kColdStart, GateReason::kThresholdExceeded, GateReason::kWithinBaseline,
                 GateReason::kNoVoicedFrames}) {
    CHECK(parse_reason(reason_name(r)) == r);
  }
  CHECK(parse_verdict("LOCAL") == Verdict::kLocal);
  CHECK(parse_verdict(verdict_name(Verdict::kUpload)) == Verdict::kUpload);
  CHECK_THROWS_AS(parse_verdict("MAYBE"), Error);
  GateConfig bad;
  bad.z_threshold = 0.0;
  CHECK_THROWS_AS(decide(reference_baseline(), fv(1, 1), bad), Error);
}
