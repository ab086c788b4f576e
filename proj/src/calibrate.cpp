#include "engm/calibrate.hpp"

#include <cmath>
#include <cstdio>

#include "engm/error.hpp"
#include "engm/keystream.hpp"

namespace engm {

namespace {

[[noreturn]] void fail(const std::string& step, const std::string& detail) {
  throw Error(ErrorCode::Calibration, step + ": " + detail);
}

}  // namespace

CalibrationResult calibrate(const SystemParams& params, const CalibrationOptions& options) {
  CalibrationResult result;

  try {
    result.lyapunov =
        largest_lyapunov(kStandardInitialCondition, params, options.lyapunov_steps, options.renorm_every);
  } catch (const Error& e) {
    fail("lyapunov", e.what());
  }
  if (!(result.lyapunov > options.min_lyapunov)) {
    fail("lyapunov", "largest exponent " + std::to_string(result.lyapunov) + " is not above " +
                         std::to_string(options.min_lyapunov));
  }

  std::vector<std::vector<double>> members;
  try {
    members = x_series_ensemble(params, options.ensemble_size, options.series_length,
                                options.series_burn_in, options.seed);
  } catch (const Error& e) {
    fail("mutual information", e.what());
  }
  for (const auto& series : members) {
    for (double x : series) {
      if (std::fabs(x) > SamplerConfig::defaults().r_max) {
        fail("mutual information", "an ensemble trajectory left the escape radius");
      }
    }
  }
  const auto ensemble = QuantizedEnsemble::real(members, options.bins);
  for (std::size_t t = 1; t <= options.t_max && result.m == 0; ++t) {
    double mi = 0.0;
    try {
      mi = ensemble.mutual_information(t);
    } catch (const Error& e) {
      fail("mutual information", e.what());
    }
    result.curve.push_back({t, mi});
    if (mi < options.epsilon) result.m = t;
  }
  if (result.m == 0) {
    fail("mutual information", "no lag up to " + std::to_string(options.t_max) + " has I(T) below " +
                                   std::to_string(options.epsilon) + " bits");
  }

  SamplerConfig sampler = SamplerConfig::defaults();
  sampler.m = result.m;
  Bits raw;
  try {
    KeystreamGenerator gen(kStandardInitialCondition, params, sampler);
    raw.reserve(options.escape_samples);
    for (std::size_t i = 0; i < options.escape_samples; ++i) {
      raw.push_back(binarize(gen.advance_sample(), sampler).bits[0]);
      if (gen.contractions() != 0) break;
    }
    result.contractions = gen.contractions();
    result.samples_checked = raw.size();
  } catch (const Error& e) {
    fail("escape", e.what());
  }
  if (result.contractions != 0) {
    fail("escape", "trajectory left r_max after " + std::to_string(result.samples_checked) + " samples");
  }

  std::size_t ones = 0;
  for (std::uint8_t bit : raw) ones += bit;
  result.ones_fraction = raw.empty() ? 0.0 : static_cast<double>(ones) / static_cast<double>(raw.size());
  if (!(std::fabs(result.ones_fraction - 0.5) <= options.balance_tolerance)) {
    fail("balance", "ones fraction " + std::to_string(result.ones_fraction) + " over " +
                        std::to_string(raw.size()) + " raw bits");
  }
  try {
    result.lag_one_mi = mutual_information_bits(raw, 1);
  } catch (const Error& e) {
    fail("balance", e.what());
  }
  if (!(result.lag_one_mi < options.epsilon)) {
    fail("balance", "raw lag-1 mutual information " + std::to_string(result.lag_one_mi) + " bits");
  }

  result.config.params = params;
  result.config.sampler = sampler;
  result.config.validate();
  return result;
}

CalibrationResult calibrate_sweep(const CalibrationOptions& options, std::vector<std::string>* log) {
  std::vector<SystemParams> candidates{SystemParams::defaults()};
  for (double mu : {4.0, 2.0, 1.0, 0.5}) {
    for (double b : {0.5, 0.75, 1.5, 2.0, 3.0}) {
      const auto p = SystemParams::chaotic(-1.0, b, mu, 0.02);
      if (!(p == candidates.front())) candidates.push_back(p);
    }
  }
  std::string last;
  for (const auto& p : candidates) {
    char line[256];
    try {
      auto r = calibrate(p, options);
      std::snprintf(line, sizeof(line), "a=%g b=%g mu=%g dt=%g: pass (lambda1=%.4f, m=%zu)", p.a(), p.b(),
                    p.mu(), p.dt(), r.lyapunov, r.m);
      if (log) log->push_back(line);
      return r;
    } catch (const Error& e) {
      last = e.what();
      std::snprintf(line, sizeof(line), "a=%g b=%g mu=%g dt=%g: %s", p.a(), p.b(), p.mu(), p.dt(), e.what());
      if (log) log->push_back(line);
    }
  }
  fail("sweep", "no grid point calibrated; last failure was " + last);
}

}  // namespace engm
