#include "engm/keystream.hpp"

#include <cmath>
#include <string>

#include "engm/error.hpp"
#include "rk4_kernel.hpp"

namespace engm {

SamplerConfig SamplerConfig::defaults() {
  SamplerConfig cfg;
  cfg.m = 741;
  cfg.burn_in = 1000;
  cfg.r_max = 10.0;
  cfg.bits_per_sample = 1;
  return cfg;
}

void SamplerConfig::validate() const {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "sampling stride m must be >= 1");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorCode::InvalidArgument, "escape radius must be positive and finite");
  }
  if (bits_per_sample != 1 && bits_per_sample != 2) {
    throw Error(ErrorCode::InvalidArgument, "bits_per_sample must be 1 or 2");
  }
}

SampleBits binarize(const SystemState& s, const SamplerConfig& cfg) noexcept {
  SampleBits out;
  out.bits[0] = s.x < 0.0 ? 0 : 1;
  out.count = 1;
  if (cfg.bits_per_sample == 2) {
    out.bits[1] = s.z < 0.0 ? 0 : 1;
    out.count = 2;
  }
  return out;
}

KeystreamGenerator::KeystreamGenerator(const SystemState& initial, const SystemParams& params,
                                       const SamplerConfig& sampler)
    : state_(initial), params_(params), sampler_(sampler) {
  sampler_.validate();
  if (!initial.finite()) throw Error(ErrorCode::Overflow, "initial state is not finite");
  for (std::size_t i = 0; i < sampler_.burn_in; ++i) advance_sample();
}

SystemState KeystreamGenerator::advance_sample() {
  const double a = params_.a(), b = params_.b(), mu = params_.mu(), dt = params_.dt();
  const double r_max = sampler_.r_max;
  SystemState s = state_;
  for (std::size_t i = 0; i < sampler_.m; ++i) {
    s = detail::rk4(s, a, b, mu, dt);
    const double norm = s.max_norm();
    if (!(norm <= r_max)) {
      if (!std::isfinite(norm)) {
        throw Error(ErrorCode::Overflow,
                    "trajectory left the finite range at sample " + std::to_string(samples_));
      }
      const double scale = kContractionNorm / norm;
      s = {s.x * scale, s.y * scale, s.z * scale, s.w * scale};
      ++contractions_;
    }
  }
  state_ = s;
  ++samples_;
  return s;
}

void KeystreamGenerator::append_bits(Bits& out, std::size_t n) {
  out.reserve(out.size() + n);
  if (n > 0 && has_pending_) {
    out.push_back(pending_);
    has_pending_ = false;
    --n;
  }
  while (n > 0) {
    const SampleBits sb = binarize(advance_sample(), sampler_);
    out.push_back(sb.bits[0]);
    --n;
    if (sb.count == 2) {
      if (n > 0) {
        out.push_back(sb.bits[1]);
        --n;
      } else {
        pending_ = sb.bits[1];
        has_pending_ = true;
      }
    }
  }
}

RawBitstream KeystreamGenerator::next_bits(std::size_t n) {
  RawBitstream raw;
  append_bits(raw.bits, n);
  return raw;
}

}  // namespace engm
