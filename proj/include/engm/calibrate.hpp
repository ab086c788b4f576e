#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "engm/analysis.hpp"
#include "engm/cipher.hpp"
#include "engm/dynsys.hpp"

namespace engm {

struct CalibrationOptions {
  std::size_t lyapunov_steps = 1'000'000;
  std::size_t renorm_every = 10;
  double min_lyapunov = 0.01;      ///< required margin above zero
  std::size_t ensemble_size = 16;
  std::size_t series_length = 100'000;
  std::size_t series_burn_in = 1000;
  std::size_t bins = 64;
  double epsilon = 0.01;           ///< MI threshold in bits
  std::size_t t_max = 2000;        ///< largest lag tried
  std::size_t escape_samples = 1'000'000;
  double balance_tolerance = 0.002;  ///< allowed |ones fraction - 1/2| of the escape run
  std::uint64_t seed = 42;
};

/// Initial condition used for the Lyapunov estimate and the escape check.
inline constexpr SystemState kStandardInitialCondition{0.3, -0.2, -0.5, 0.1};

struct CalibrationResult {
  CipherConfig config;
  double lyapunov = 0.0;
  MiCurve curve;  ///< lags 1..m
  std::size_t m = 0;
  std::uint64_t contractions = 0;
  std::uint64_t samples_checked = 0;
  double ones_fraction = 0.0;  ///< raw bits of the escape run
  double lag_one_mi = 0.0;     ///< bits, same stream
};

/// Checks that `params` are usable and pins the sampling interval:
///   1. largest_lyapunov from kStandardInitialCondition exceeds min_lyapunov;
///   2. m = first lag where the pooled x-series MI of the ensemble drops
///      below epsilon;
///   3. a generator with that m runs escape_samples samples from the
///      standard initial condition without a single contraction;
///   4. the raw bits of that run are balanced to within balance_tolerance
///      and their lag-1 MI is below epsilon.
/// Throws Error(Calibration) naming the failed step.
CalibrationResult calibrate(const SystemParams& params, const CalibrationOptions& options = {});

/// Tries the built-in defaults, then a coarse grid (a = -1,
/// mu in {4, 2, 1, 0.5}, b in {0.5, 0.75, 1.5, 2, 3}, dt = 0.02), and returns
/// the first set that calibrates. `log` receives one line per attempt.
CalibrationResult calibrate_sweep(const CalibrationOptions& options = {},
                                  std::vector<std::string>* log = nullptr);

}  // namespace engm
