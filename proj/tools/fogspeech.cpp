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

// fogspeech: batch analysis, single-file extraction, the gateway service and
// the benchmark harness behind one binary.
//
// Exit codes: 0 success, 1 partial failure, 2 fatal.

#include <signal.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fogspeech/bench.hpp"
#include "fogspeech/corpus.hpp"
#include "fogspeech/gateway.hpp"
#include "fogspeech/http_api.hpp"
#include "fogspeech/synth.hpp"

namespace fs = std::filesystem;
using namespace fogspeech;

namespace {

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const int k = std::stoi(item, &used);
    if (used != item.size() || k < 1) throw CLI::ValidationError("--k", "bad cluster count '" + item + "'");
    out.push_back(k);
  }
  if (out.empty()) throw CLI::ValidationError("--k", "empty list");
  return out;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

int run_analyze(const std::string& dir, const std::string& k_text, std::uint64_t seed,
                int restarts, const std::string& out, const PitchOptions& pitch, unsigned jobs) {
  AnalyzeOptions options;
  options.k_list = parse_k_list(k_text);
  options.seed = seed;
  options.restarts = restarts;
  options.pitch = pitch;
  options.jobs = jobs;
  std::cout << "seed=" << seed << "\n";
  const AnalyzeSummary summary = analyze_corpus(dir, out, options, std::cout);
  for (const auto& f : summary.failures) std::cerr << f << "\n";
  std::cout << summary.features.size() << " recordings analyzed, " << summary.failures.size()
            << " failed\n";
  return summary.exit_code;
}

int run_extract(const std::string& file, const std::string& out, const PitchOptions& pitch) {
  try {
    const FeatureVector v = extract_one(file, pitch);
    write_or_print(to_json(v).dump(2) + "\n", out);
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return kExitFatal;
  }
}

int run_serve(const std::string& listen_override) {
  GatewayConfig config = gateway_config_from_env();
  if (!listen_override.empty()) config.listen_addr = listen_override;
  std::shared_ptr<CloudTransport> transport;
  if (config.cloud.base_url.empty()) {
    std::cerr << "FOG_CLOUD_URL not set; uploads stay pending\n";
    transport = std::make_shared<DisconnectedTransport>();
  } else {
    transport = std::make_shared<HttpCloudTransport>(config.cloud);
  }

  // Route SIGINT/SIGTERM to a waiter thread instead of a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const auto [host, port] = parse_listen_addr(config.listen_addr);
  FogGateway gateway(config, transport);
  HttpApi api(gateway);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    api.stop();
  });
  waiter.detach();

  std::cerr << "fog gateway listening on " << host << ":" << port << " data="
            << config.data_dir.string() << "\n";
  if (!api.listen(host, port)) {
    std::cerr << "cannot bind " << config.listen_addr << "\n";
    return kExitFatal;
  }
  return kExitOk;
}

std::function<void()> make_workload(const std::string& name, const std::string& clip_path) {
  std::vector<std::uint8_t> wav;
  if (!clip_path.empty()) {
    wav = read_file(clip_path);
  } else {
    synth::VowelSpec spec;
    spec.duration_s = 3.0;
    wav = encode_wav(synth::vowel(spec));
  }
  if (name == "pipeline") return pipeline_workload(std::move(wav));
  if (name == "features") {
    auto clip = std::make_shared<AudioClip>(decode_wav(wav));
    return [clip] { (void)analyze_clip(*clip, "bench"); };
  }
  if (name == "noop") return [] {};
  throw Error(ErrorCode::kInvalidArgument, "unknown workload '" + name + "'");
}

int run_bench(const std::string& workload, const std::string& clip, int iterations,
              double budget_ms, const std::string& out, const std::string& csv) {
  const BenchReport report = measure(workload, make_workload(workload, clip), iterations, budget_ms);
  std::cout << "workload=" << report.workload << " runtime_ms(median)=" << report.runtime_ms
            << " avg_cpu_pct=" << report.avg_cpu_pct << " peak_mem_bytes=" << report.peak_mem_bytes
            << " budget_ms=" << budget_ms
            << (report.passed_latency_budget ? " PASS" : " FAIL") << "\n";
  if (!out.empty()) write_or_print(to_json(report).dump(2) + "\n", out);
  if (!csv.empty()) {
    std::string text(kComparisonCsvHeader);
    text += "\n";
    text += report.workload + ",runtime_ms," + format_double(report.runtime_ms) + ",1\n";
    text += report.workload + ",avg_cpu_pct," + format_double(report.avg_cpu_pct) + ",1\n";
    text += report.workload + ",peak_mem_bytes," +
            format_double(static_cast<double>(report.peak_mem_bytes)) + ",1\n";
    write_or_print(text, csv);
  }
  return kExitOk;
}

int run_compare(const std::vector<std::string>& files, const std::string& json_out,
                const std::string& csv_out) {
  std::vector<BenchReport> reports;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + f);
    reports.push_back(bench_report_from_json(Json::parse(in)));
  }
  const Comparison table = compare(reports);
  std::cout << table.to_text();
  if (!json_out.empty()) write_or_print(table.to_json().dump(2) + "\n", json_out);
  if (!csv_out.empty()) write_or_print(table.to_csv(), csv_out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fogspeech: fog-node speech feature analytics"};
  app.require_subcommand(1);

  PitchOptions pitch;
  auto add_pitch_options = [&](CLI::App* sub) {
    sub->add_option("--pitch-floor", pitch.floor_hz, "Pitch floor in Hz")->capture_default_str();
    sub->add_option("--pitch-ceiling", pitch.ceiling_hz, "Pitch ceiling in Hz")->capture_default_str();
    sub->add_option("--voicing-threshold", pitch.voicing_threshold)->capture_default_str();
  };

  std::string dir, out, k_text = "2,3,4";
  std::uint64_t seed = 42;
  int restarts = 10;
  unsigned jobs = 0;
  auto* analyze = app.add_subcommand("analyze", "Features + k-means sweep over a corpus directory");
  analyze->add_option("--dir", dir, "Corpus directory")->required();
  analyze->add_option("--k", k_text, "Comma-separated cluster counts")->capture_default_str();
  analyze->add_option("--seed", seed)->capture_default_str();
  analyze->add_option("--restarts", restarts)->capture_default_str()->check(CLI::PositiveNumber);
  analyze->add_option("--out", out, "Output directory")->required();
  analyze->add_option("--jobs", jobs, "Extraction threads (0 = all cores)");
  add_pitch_options(analyze);

  std::string file;
  std::string extract_out;
  auto* extract = app.add_subcommand("extract", "Feature vector of one WAV file as JSON");
  extract->add_option("--file", file)->required()->check(CLI::ExistingFile);
  extract->add_option("--out", extract_out, "Output path (default stdout)");
  add_pitch_options(extract);

  std::string listen;
  auto* serve = app.add_subcommand("serve", "Run the fog gateway HTTP service");
  serve->add_option("--listen", listen, "host:port (overrides FOG_LISTEN_ADDR)");

  std::string workload = "pipeline", clip, bench_out, bench_csv;
  int iterations = kDefaultBenchIterations;
  double budget_ms = kDefaultLatencyBudgetMs;
  auto* bench = app.add_subcommand("bench", "Measure runtime, CPU and memory of a workload");
  bench->add_option("--workload", workload)
      ->check(CLI::IsMember({"pipeline", "features", "noop"}))
      ->capture_default_str();
  bench->add_option("--clip", clip, "WAV clip (default: synthesized 3 s vowel)")
      ->check(CLI::ExistingFile);
  bench->add_option("--iterations", iterations)->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--budget-ms", budget_ms)->capture_default_str();
  bench->add_option("--out", bench_out, "Report JSON path");
  bench->add_option("--csv", bench_csv, "Report CSV path");

  std::vector<std::string> report_files;
  std::string cmp_json, cmp_csv;
  auto* cmp = app.add_subcommand("compare", "Compare bench reports against the first one");
  cmp->add_option("reports", report_files, "Report JSON files")->required()->expected(2, -1);
  cmp->add_option("--json", cmp_json);
  cmp->add_option("--csv", cmp_csv);

  std::string synth_out;
  std::size_t count = 164;
  std::uint64_t synth_seed = 7;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic sustained-vowel corpus");
  synth_cmd->add_option("--out", synth_out)->required();
  synth_cmd->add_option("--count", count)->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*analyze) return run_analyze(dir, k_text, seed, restarts, out, pitch, jobs);
    if (*extract) return run_extract(file, extract_out, pitch);
    if (*serve) return run_serve(listen);
    if (*bench) return run_bench(workload, clip, iterations, budget_ms, bench_out, bench_csv);
    if (*cmp) return run_compare(report_files, cmp_json, cmp_csv);
    if (*synth_cmd) {
      synth::write_corpus(synth_out, synth::corpus_plan(count, synth_seed));
      std::cout << "wrote " << count << " clips to " << synth_out << "\n";
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitFatal;
}
