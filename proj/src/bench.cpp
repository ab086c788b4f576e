#include "engm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "engm/error.hpp"
#include "engm/expander.hpp"
#include "engm/keystream.hpp"

namespace engm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double read_cpufreq_max() {
  std::ifstream in("/sys/devices/system/cpu/cpu0/cpufreq/cpuinfo_max_freq");
  double khz = 0.0;
  if (in >> khz && khz > 0.0) return khz * 1e3;
  return 0.0;
}

double read_cpuinfo_mhz() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("cpu MHz", 0) != 0) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    try {
      const double mhz = std::stod(line.substr(colon + 1));
      if (mhz > 0.0) return mhz * 1e6;
    } catch (const std::exception&) {
    }
  }
  return 0.0;
}

// A chain of dependent adds retires about one per cycle on current cores.
double estimate_by_loop() {
  constexpr std::uint64_t kIterations = 200'000'000;
  volatile std::uint64_t sink = 0;
  std::uint64_t acc = 1;
  const auto t0 = Clock::now();
  for (std::uint64_t i = 0; i < kIterations; ++i) {
    acc += i;
    asm volatile("" : "+r"(acc));
  }
  const double elapsed = seconds_since(t0);
  sink = acc;
  (void)sink;
  return elapsed > 0.0 ? static_cast<double>(kIterations) / elapsed : 0.0;
}

struct RunResult {
  double total = 0.0;
  StageTimes stages;
};

RunResult instrumented_run(const CipherConfig& cfg, std::size_t bytes) {
  KeystreamGenerator gen = derive_state(SecretKey::test_key(), cfg);
  Expander expander(cfg.expander);
  const ExpanderConfig& ec = cfg.expander;
  const std::size_t bits_per_sample = cfg.sampler.bits_per_sample;
  const std::size_t samples_per_block = ec.block_bits() / bits_per_sample;
  std::vector<SystemState> states(samples_per_block);
  Bits raw;
  raw.reserve(ec.block_bits());
  std::vector<std::uint8_t> keystream;
  keystream.reserve(ec.output_bits_per_block() / 8 + 8);
  std::vector<std::uint8_t> data(bytes, 0);

  RunResult r;
  std::uint64_t carry = 0;
  unsigned carry_bits = 0;
  std::size_t done = 0;
  const auto start = Clock::now();
  while (done < bytes) {
    auto t = Clock::now();
    for (auto& s : states) s = gen.advance_sample();
    r.stages.integration += seconds_since(t);

    t = Clock::now();
    raw.clear();
    for (const auto& s : states) {
      const SampleBits sb = binarize(s, cfg.sampler);
      for (unsigned i = 0; i < sb.count; ++i) raw.push_back(sb.bits[i]);
    }
    r.stages.binarize += seconds_since(t);

    t = Clock::now();
    expander.absorb_block(raw);
    keystream.clear();
    for (std::size_t i = 0; i < ec.rounds; ++i) {
      carry = ec.k == 64 ? expander.next_word() : (carry << ec.k) | expander.next_word();
      carry_bits += ec.k;
      while (carry_bits >= 8) {
        carry_bits -= 8;
        keystream.push_back(static_cast<std::uint8_t>(carry >> carry_bits));
      }
      if (ec.k < 64) carry &= (std::uint64_t{1} << carry_bits) - 1;
    }
    r.stages.expand += seconds_since(t);

    t = Clock::now();
    const std::size_t take = std::min(keystream.size(), bytes - done);
    for (std::size_t i = 0; i < take; ++i) data[done + i] ^= keystream[i];
    done += take;
    r.stages.xor_ += seconds_since(t);
  }
  r.total = seconds_since(start);
  // Keep the XOR output observable so the loop cannot be discarded.
  volatile std::uint8_t sink = data[bytes - 1];
  (void)sink;
  return r;
}

}  // namespace

std::pair<double, std::string> probe_frequency() {
  if (const double f = read_cpufreq_max(); f > 0.0) return {f, "cpufreq max"};
  if (const double f = read_cpuinfo_mhz(); f > 0.0) return {f, "/proc/cpuinfo"};
  if (const double f = estimate_by_loop(); f > 0.0) return {f, "add-loop estimate"};
  throw Error(ErrorCode::Clock, "could not determine a CPU frequency; pass one explicitly");
}

BenchReport run_bench(const CipherConfig& cfg, const BenchOptions& options) {
  if (options.bytes < (std::size_t{1} << 20)) {
    throw Error(ErrorCode::InvalidArgument, "bench needs at least 2^20 bytes");
  }
  if (options.repeats < 5) throw Error(ErrorCode::InvalidArgument, "bench needs at least 5 repeats");
  if (options.frequency_hz < 0.0) throw Error(ErrorCode::InvalidArgument, "frequency must be positive");
  cfg.validate();

  BenchReport report;
  report.bytes_processed = options.bytes;
  if (options.frequency_hz > 0.0) {
    report.nominal_frequency = options.frequency_hz;
    report.frequency_source = "user";
  } else {
    std::tie(report.nominal_frequency, report.frequency_source) = probe_frequency();
  }

  std::vector<RunResult> runs;
  for (std::size_t i = 0; i < options.repeats; ++i) runs.push_back(instrumented_run(cfg, options.bytes));
  std::vector<std::size_t> order(runs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return runs[x].total < runs[y].total; });
  const RunResult& median = runs[order[order.size() / 2]];

  constexpr double kMinTicks = 1000.0;
  const double tick = std::chrono::duration<double>(Clock::duration(1)).count();
  if (median.total < kMinTicks * tick) {
    throw Error(ErrorCode::Clock, "run too short for the clock resolution");
  }

  for (const auto& r : runs) report.repeat_times.push_back(r.total);
  report.wall_time = median.total;
  report.stages = median.stages;
  report.cycles_per_byte =
      report.wall_time * report.nominal_frequency / static_cast<double>(report.bytes_processed);
  report.ns_per_byte = report.wall_time * 1e9 / static_cast<double>(report.bytes_processed);
  return report;
}

std::string BenchReport::render() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "bytes processed      %zu\n", bytes_processed);
  out << line;
  std::snprintf(line, sizeof(line), "repeats              %zu (median reported)\n", repeat_times.size());
  out << line;
  std::snprintf(line, sizeof(line), "wall time            %.6f s\n", wall_time);
  out << line;
  std::snprintf(line, sizeof(line), "nominal frequency    %.3f GHz (%s)\n", nominal_frequency / 1e9,
                frequency_source.c_str());
  out << line;
  std::snprintf(line, sizeof(line), "cycles per byte      %.2f\n", cycles_per_byte);
  out << line;
  std::snprintf(line, sizeof(line), "ns per byte          %.3f\n", ns_per_byte);
  out << line;
  out << "stage breakdown\n";
  const auto stage = [&](const char* name, double t) {
    std::snprintf(line, sizeof(line), "  %-12s %10.6f s  %5.1f%%\n", name, t,
                  wall_time > 0.0 ? 100.0 * t / wall_time : 0.0);
    out << line;
  };
  stage("integration", stages.integration);
  stage("binarize", stages.binarize);
  stage("expand", stages.expand);
  stage("xor", stages.xor_);
  stage("sum", stages.sum());
  out << "reference figures (published, other hardware; not reproduced here):\n"
         "  chaotic stream cipher 1.77 - 11 cycles/byte\n"
         "  AES                  32.26 - 55.28 cycles/byte\n"
         "  RC4                   7.56 - 20.79 cycles/byte\n";
  out << "bytes,wall_s,freq_hz,cycles_per_byte,ns_per_byte,integration_s,binarize_s,expand_s,xor_s\n";
  std::snprintf(line, sizeof(line), "%zu,%.9g,%.9g,%.6g,%.6g,%.9g,%.9g,%.9g,%.9g\n", bytes_processed, wall_time,
                nominal_frequency, cycles_per_byte, ns_per_byte, stages.integration, stages.binarize,
                stages.expand, stages.xor_);
  out << line;
  return out.str();
}

}  // namespace engm
