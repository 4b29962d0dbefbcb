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

// Runtime / CPU / memory measurement of pipeline workloads against a
// real-time latency budget. Workloads run one at a time on the calling
// thread; nothing here is meant to be used concurrently.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogspeech/serialize.hpp"

namespace fogspeech {

inline constexpr double kDefaultLatencyBudgetMs = 200.0;
inline constexpr int kDefaultBenchIterations = 30;

struct BenchReport {
  std::string workload;
  double runtime_ms = 0.0;  // median over timed iterations
  double avg_cpu_pct = 0.0;  // process CPU time / wall time * 100
  double avg_cpu_pct_per_core = 0.0;
  std::int64_t peak_mem_bytes = 0;  // peak RSS growth during the run
  int iterations = 0;
  double latency_budget_ms = kDefaultLatencyBudgetMs;
  bool passed_latency_budget = false;
  std::vector<double> samples_ms;
};

/// Resident-set counters. The Linux probe reads /proc/self/status.
class MemoryProbe {
 public:
  virtual ~MemoryProbe() = default;
  /// Restarts peak tracking; false if the platform cannot.
  virtual bool reset_peak() = 0;
  virtual std::int64_t current_rss_bytes() = 0;
  virtual std::int64_t peak_rss_bytes() = 0;
};

std::unique_ptr<MemoryProbe> make_memory_probe();

bool passes_budget(double median_runtime_ms, double budget_ms);

double median(std::vector<double> values);

/// One warm-up call, then `iterations` timed calls. Throws kWorkloadFailed
/// if any call throws.
BenchReport measure(std::string workload_name, const std::function<void()>& workload,
                    int iterations = kDefaultBenchIterations,
                    double latency_budget_ms = kDefaultLatencyBudgetMs,
                    MemoryProbe* probe = nullptr);

Json to_json(const BenchReport& r);
BenchReport bench_report_from_json(const Json& j);

inline constexpr std::string_view kComparisonCsvHeader = "workload,metric,value,ratio_to_first";

/// Aligned metrics of several reports with ratios against the first.
struct Comparison {
  std::vector<BenchReport> reports;

  std::string to_text() const;
  Json to_json() const;
  /// One row per metric per report, under kComparisonCsvHeader.
  std::string to_csv() const;
};

/// Requires at least two reports.
Comparison compare(std::span<const BenchReport> reports);

/// decode + pitch + intensity + summary + gate decision on one WAV payload.
std::function<void()> pipeline_workload(std::vector<std::uint8_t> wav_bytes);

/// Spins for the given wall time without sleeping.
void busy_wait_ms(double ms);

}  // namespace fogspeech
