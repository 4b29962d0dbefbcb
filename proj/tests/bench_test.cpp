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

#include <sstream>
#include <thread>

#include "fogspeech/bench.hpp"
#include "fogspeech/synth.hpp"

using namespace fogspeech;

namespace {

/// Probe with scripted numbers, so peak memory is checkable.
class FakeProbe : public MemoryProbe {
 public:
  bool reset_peak() override { return true; }
  std::int64_t current_rss_bytes() override { return 1000; }
  std::int64_t peak_rss_bytes() override { return 5096; }
};

}  // namespace

TEST_CASE("budget predicate") {
  CHECK(passes_budget(199.9, 200.0));
  CHECK(passes_budget(200.0, 200.0));
  CHECK_FALSE(passes_budget(200.1, 200.0));
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("no-op passes, calibrated sleep fails a tighter budget") {
  const auto noop = measure("noop", [] {}, 5, 200.0);
  CHECK(noop.passed_latency_budget);
  CHECK(noop.iterations == 5);
  CHECK(noop.samples_ms.size() == 5);

  const auto sleep50 = measure(
      "sleep50", [] { std::this_thread::sleep_for(std::chrono::milliseconds(50)); }, 5, 40.0);
  CHECK_FALSE(sleep50.passed_latency_budget);
  CHECK(sleep50.runtime_ms >= 50.0);
  CHECK(sleep50.runtime_ms <= 60.0);
  CHECK(sleep50.avg_cpu_pct < 50.0);
}

TEST_CASE("busy loop median lies in [T, 1.5 T] and burns CPU") {
  const auto r = measure("spin20", [] { busy_wait_ms(20.0); }, 5, 200.0);
  CHECK(r.runtime_ms >= 20.0);
  CHECK(r.runtime_ms <= 30.0);
  CHECK(r.avg_cpu_pct > 50.0);
}

TEST_CASE("memory comes from the probe") {
  FakeProbe probe;
  const auto r = measure("noop", [] {}, 2, 200.0, &probe);
  CHECK(r.peak_mem_bytes == 4096);

  auto real = make_memory_probe();
  REQUIRE(real);
  const auto grow = measure(
      "alloc",
      [] {
        std::vector<char> block(32 << 20, 1);
        volatile char sink = block[block.size() / 2];
        (void)sink;
      },
      2, 1000.0, real.get());
  CHECK(grow.peak_mem_bytes > (16 << 20));
}

TEST_CASE("failing workloads are reported") {
  int calls = 0;
  try {
    (void)measure("boom", [&] {
      if (++calls == 3) throw std::runtime_error("bad");
    }, 5);
    FAIL("expected WorkloadFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kWorkloadFailed);
  }
  CHECK_THROWS_AS(measure("none", [] {}, 0), Error);
}

TEST_CASE("pipeline workload on a 3 s clip") {
  synth::VowelSpec spec;
  spec.duration_s = 3.0;
  const auto r = measure("pipeline", pipeline_workload(encode_wav(synth::vowel(spec))), 3, 200.0);
  CHECK(r.runtime_ms > 0.0);
  const auto j = to_json(r);
  for (const char* key : {"runtime_ms", "avg_cpu_pct", "peak_mem_bytes", "passed_latency_budget"}) {
    CHECK(j.contains(key));
  }
  CHECK(bench_report_from_json(j).runtime_ms == r.runtime_ms);
}

TEST_CASE("comparison table") {
  BenchReport a;
  a.workload = "desk";
  a.runtime_ms = 100.0;
  a.avg_cpu_pct = 50.0;
  a.peak_mem_bytes = 1 << 20;
  BenchReport b = a;
  b.workload = "board";
  b.runtime_ms = 200.0;
  const std::vector<BenchReport> reports{a, b};
  const auto table = compare(reports);

  const auto j = table.to_json();
  CHECK(j["reports"][0]["ratio_to_first"]["runtime_ms"] == 1.0);
  CHECK(j["reports"][1]["ratio_to_first"]["runtime_ms"] == 2.0);
  CHECK(j["reports"][1]["ratio_to_first"]["avg_cpu_pct"] == 1.0);

  std::istringstream csv(table.to_csv());
  std::string line;
  std::getline(csv, line);
  CHECK(line == kComparisonCsvHeader);
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 6);
  CHECK(table.to_csv().find("board,runtime_ms,200,2\n") != std::string::npos);
  CHECK(table.to_text().find("board") != std::string::npos);

  CHECK_THROWS_AS(compare(std::vector<BenchReport>{a}), Error);
}
