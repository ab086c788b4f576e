#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "engm/cipher.hpp"

namespace engm {

struct BenchOptions {
  std::size_t bytes = std::size_t{1} << 20;  ///< at least 2^20
  double frequency_hz = 0.0;                 ///< 0: probe
  std::size_t repeats = 5;                   ///< at least 5; the median run is reported
};

struct StageTimes {
  double integration = 0.0;  ///< seconds spent in RK4 sampling
  double binarize = 0.0;
  double expand = 0.0;
  double xor_ = 0.0;
  double sum() const noexcept { return integration + binarize + expand + xor_; }
};

struct BenchReport {
  std::size_t bytes_processed = 0;
  double wall_time = 0.0;  ///< seconds, median over repeats
  double nominal_frequency = 0.0;
  std::string frequency_source;
  double cycles_per_byte = 0.0;  ///< wall_time * nominal_frequency / bytes_processed
  double ns_per_byte = 0.0;
  StageTimes stages;  ///< from the median run
  std::vector<double> repeat_times;

  /// Text report with the stage table and the reference figures, followed
  /// by a two-line CSV block.
  std::string render() const;
};

/// Nominal core frequency in Hz and where it came from: cpufreq maximum,
/// /proc/cpuinfo, or a timed dependent-add loop.
std::pair<double, std::string> probe_frequency();

/// Encrypts a zero buffer of `bytes` with the all-zero test key, timing each
/// pipeline stage. Key setup and burn-in happen before the clock starts.
/// Throws InvalidArgument for bytes < 2^20 or repeats < 5, Clock when the
/// clock is too coarse for the measured interval.
BenchReport run_bench(const CipherConfig& cfg, const BenchOptions& options = {});

}  // namespace engm
