#pragma once

#include <string>
#include <string_view>

#include "engm/calibrate.hpp"
#include "engm/cipher.hpp"

namespace engm {

/// JSON document describing a cipher configuration:
///   {"format": "engm-config", "version": 1,
///    "params": {"a", "b", "mu", "dt"},
///    "sampler": {"m", "burn_in", "r_max", "bits_per_sample"},
///    "expander": {"k", "rounds"},
///    "calibration": {...}}            (present when written by calibrate)
/// Doubles are written with round-trip precision.
std::string config_to_json(const CipherConfig& cfg, const CalibrationResult* calibration = nullptr);

/// Parses and validates a configuration. Missing sections take the
/// defaults; unknown format or version is Error(Format).
CipherConfig config_from_json(std::string_view text);

CipherConfig load_config(const std::string& path);
void save_config(const std::string& path, const CipherConfig& cfg,
                 const CalibrationResult* calibration = nullptr);

}  // namespace engm
