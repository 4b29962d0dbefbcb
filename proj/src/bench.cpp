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

#include "fogspeech/bench.hpp"

#include <time.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "fogspeech/audio.hpp"
#include "fogspeech/features.hpp"
#include "fogspeech/gate.hpp"

namespace fogspeech {
namespace {

double process_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

class ProcStatusProbe : public MemoryProbe {
 public:
  bool reset_peak() override {
    std::ofstream clear("/proc/self/clear_refs");
    if (!clear) return false;
    clear << "5";
    return static_cast<bool>(clear.flush());
  }
  std::int64_t current_rss_bytes() override { return read_kb("VmRSS:") * 1024; }
  std::int64_t peak_rss_bytes() override { return read_kb("VmHWM:") * 1024; }

 private:
  static std::int64_t read_kb(const std::string& key) {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(key, 0) == 0) {
        std::istringstream fields(line.substr(key.size()));
        std::int64_t kb = 0;
        fields >> kb;
        return kb;
      }
    }
    return 0;
  }
};

}  // namespace

std::unique_ptr<MemoryProbe> make_memory_probe() { return std::make_unique<ProcStatusProbe>(); }

bool passes_budget(double median_runtime_ms, double budget_ms) {
  return median_runtime_ms <= budget_ms;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

BenchReport measure(std::string workload_name, const std::function<void()>& workload,
                    int iterations, double latency_budget_ms, MemoryProbe* probe) {
  if (iterations < 1) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  std::unique_ptr<MemoryProbe> owned;
  if (probe == nullptr) {
    owned = make_memory_probe();
    probe = owned.get();
  }

  const auto run = [&](int index) {
    try {
      workload();
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kWorkloadFailed, "workload '" + workload_name + "' failed on call " +
                                                  std::to_string(index) + ": " + e.what());
    }
  };

  const bool reset = probe->reset_peak();
  const std::int64_t mem_before = reset ? probe->current_rss_bytes() : probe->peak_rss_bytes();

  run(0);  // warm-up

  BenchReport report;
  report.workload = std::move(workload_name);
  report.iterations = iterations;
  report.latency_budget_ms = latency_budget_ms;
  report.samples_ms.reserve(static_cast<std::size_t>(iterations));

  using Clock = std::chrono::steady_clock;
  const double cpu_start = process_cpu_seconds();
  const auto wall_start = Clock::now();
  for (int i = 1; i <= iterations; ++i) {
    const auto t0 = Clock::now();
    run(i);
    report.samples_ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  const double wall_s = std::chrono::duration<double>(Clock::now() - wall_start).count();
  const double cpu_s = process_cpu_seconds() - cpu_start;

  report.runtime_ms = median(report.samples_ms);
  report.avg_cpu_pct = wall_s > 0.0 ? 100.0 * cpu_s / wall_s : 0.0;
  const unsigned cores = std::max(1U, std::thread::hardware_concurrency());
  report.avg_cpu_pct_per_core = report.avg_cpu_pct / cores;
  report.peak_mem_bytes = std::max<std::int64_t>(0, probe->peak_rss_bytes() - mem_before);
  report.passed_latency_budget = passes_budget(report.runtime_ms, latency_budget_ms);
  return report;
}

Json to_json(const BenchReport& r) {
  return Json{{"workload", r.workload},
              {"runtime_ms", r.runtime_ms},
              {"avg_cpu_pct", r.avg_cpu_pct},
              {"avg_cpu_pct_per_core", r.avg_cpu_pct_per_core},
              {"peak_mem_bytes", r.peak_mem_bytes},
              {"iterations", r.iterations},
              {"latency_budget_ms", r.latency_budget_ms},
              {"passed_latency_budget", r.passed_latency_budget},
              {"samples_ms", r.samples_ms}};
}

BenchReport bench_report_from_json(const Json& j) {
  BenchReport r;
  r.workload = j.at("workload").get<std::string>();
  r.runtime_ms = j.at("runtime_ms").get<double>();
  r.avg_cpu_pct = j.at("avg_cpu_pct").get<double>();
  r.avg_cpu_pct_per_core = j.value("avg_cpu_pct_per_core", r.avg_cpu_pct);
  r.peak_mem_bytes = j.at("peak_mem_bytes").get<std::int64_t>();
  r.iterations = j.at("iterations").get<int>();
  r.latency_budget_ms = j.value("latency_budget_ms", kDefaultLatencyBudgetMs);
  r.passed_latency_budget = j.at("passed_latency_budget").get<bool>();
  if (j.contains("samples_ms")) r.samples_ms = j.at("samples_ms").get<std::vector<double>>();
  return r;
}

namespace {

struct Metric {
  const char* name;
  int width;
  double (*get)(const BenchReport&);
};

constexpr Metric kMetrics[] = {
    {"runtime_ms", 14, [](const BenchReport& r) { return r.runtime_ms; }},
    {"avg_cpu_pct", 14, [](const BenchReport& r) { return r.avg_cpu_pct; }},
    {"peak_mem_bytes", 16, [](const BenchReport& r) { return static_cast<double>(r.peak_mem_bytes); }},
};

std::optional<double> ratio(double value, double first) {
  if (first == 0.0) return value == 0.0 ? std::optional<double>(1.0) : std::nullopt;
  return value / first;
}

}  // namespace

Comparison compare(std::span<const BenchReport> reports) {
  if (reports.size() < 2) throw Error(ErrorCode::kInvalidArgument, "compare needs at least two reports");
  return Comparison{{reports.begin(), reports.end()}};
}

std::string Comparison::to_text() const {
  std::ostringstream out;
  out << std::left << std::setw(24) << "workload" << std::right << std::setw(14) << "runtime_ms"
      << std::setw(10) << "ratio" << std::setw(14) << "avg_cpu_pct" << std::setw(10) << "ratio"
      << std::setw(16) << "peak_mem_bytes" << std::setw(10) << "ratio" << std::setw(8) << "budget"
      << "\n";
  const BenchReport& first = reports.front();
  out << std::fixed;
  for (const auto& r : reports) {
    out << std::left << std::setw(24) << r.workload << std::right;
    for (const auto& m : kMetrics) {
      const auto q = ratio(m.get(r), m.get(first));
      out << std::setw(m.width) << std::setprecision(3) << m.get(r);
      if (q) {
        out << std::setw(10) << std::setprecision(3) << *q;
      } else {
        out << std::setw(10) << "n/a";
      }
    }
    out << std::setw(8) << (r.passed_latency_budget ? "pass" : "FAIL") << "\n";
  }
  return out.str();
}

Json Comparison::to_json() const {
  Json rows = Json::array();
  const BenchReport& first = reports.front();
  for (const auto& r : reports) {
    Json row = fogspeech::to_json(r);
    row.erase("samples_ms");
    Json ratios;
    for (const auto& m : kMetrics) {
      const auto q = ratio(m.get(r), m.get(first));
      ratios[m.name] = q ? Json(*q) : Json(nullptr);
    }
    row["ratio_to_first"] = std::move(ratios);
    rows.push_back(std::move(row));
  }
  return Json{{"baseline", first.workload}, {"reports", std::move(rows)}};
}

std::string Comparison::to_csv() const {
  std::string out(kComparisonCsvHeader);
  out += "\n";
  const BenchReport& first = reports.front();
  for (const auto& r : reports) {
    for (const auto& m : kMetrics) {
      const auto q = ratio(m.get(r), m.get(first));
      out += r.workload + "," + m.name + "," + format_double(m.get(r)) + "," +
             (q ? format_double(*q) : std::string()) + "\n";
    }
  }
  return out;
}

std::function<void()> pipeline_workload(std::vector<std::uint8_t> wav_bytes) {
  // A warm baseline so the gate does real z-score work instead of the
  // cold-start shortcut.
  auto baseline = std::make_shared<PatientBaseline>("bench", 20);
  for (int i = 0; i < 20; ++i) {
    FeatureVector v;
    v.recording_id = "baseline-" + std::to_string(i);
    v.mean_f0_hz = 150.0 + (i % 5);
    v.mean_intensity_db = 70.0 + (i % 3);
    v.voiced_ratio = 1.0;
    baseline->observe(v);
  }
  auto bytes = std::make_shared<const std::vector<std::uint8_t>>(std::move(wav_bytes));
  return [bytes, baseline] {
    const AudioClip clip = decode_wav(*bytes);
    const FeatureVector v = analyze_clip(clip, "bench");
    volatile auto verdict = decide(*baseline, v).verdict;
    (void)verdict;
  };
}

void busy_wait_ms(double ms) {
  const auto until = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double, std::milli>(ms));
  while (std::chrono::steady_clock::now() < until) {
  }
}

}  // namespace fogspeech
