#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "engm/bits.hpp"
#include "engm/dynsys.hpp"

namespace engm {

/// How the trajectory is turned into raw bits.
struct SamplerConfig {
  std::size_t m = 0;           ///< RK4 steps between samples (T0 = m * dt)
  std::size_t burn_in = 0;     ///< samples discarded when a generator is built
  double r_max = 0.0;          ///< escape radius (max-norm)
  unsigned bits_per_sample = 1;  ///< 1: sign of x; 2: sign of x then sign of z

  /// Version-1 defaults; m comes from the mutual-information calibration
  /// of SystemParams::defaults().
  static SamplerConfig defaults();

  /// Throws Error(InvalidArgument) on m == 0, r_max <= 0 or an unsupported
  /// bits_per_sample.
  void validate() const;

  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

/// Max-norm the state is rescaled to when it leaves the escape radius.
inline constexpr double kContractionNorm = 0.5;

/// One or two bits produced from a sample, in emission order.
struct SampleBits {
  std::array<std::uint8_t, 2> bits{};
  unsigned count = 0;
};

/// Whitening: 0 if x < 0 else 1 (so x == 0 maps to 1); in two-bit mode the
/// same rule is applied to z for the second bit.
SampleBits binarize(const SystemState& s, const SamplerConfig& cfg) noexcept;

/// Raw (pre-expansion) keystream bits.
struct RawBitstream {
  Bits bits;
};

/// Samples the trajectory every m steps and emits whitened bits. A
/// generator is a single sequential stream: move it between threads if
/// needed, but never share one for concurrent use.
class KeystreamGenerator {
 public:
  /// Validates the configuration and discards `sampler.burn_in` samples.
  KeystreamGenerator(const SystemState& initial, const SystemParams& params,
                     const SamplerConfig& sampler);

  /// Integrates m steps. Whenever an intermediate state exceeds r_max in
  /// max-norm it is rescaled to max-norm kContractionNorm (divide by the
  /// norm, multiply by kContractionNorm) and integration continues.
  SystemState advance_sample();

  /// Exactly n bits; in two-bit mode a leftover bit is kept for the next call.
  RawBitstream next_bits(std::size_t n);

  /// Appends n bits to `out` (same semantics as next_bits).
  void append_bits(Bits& out, std::size_t n);

  const SystemState& state() const noexcept { return state_; }
  const SystemParams& params() const noexcept { return params_; }
  const SamplerConfig& sampler() const noexcept { return sampler_; }
  std::uint64_t samples_emitted() const noexcept { return samples_; }
  std::uint64_t contractions() const noexcept { return contractions_; }

 private:
  SystemState state_;
  SystemParams params_;
  SamplerConfig sampler_;
  std::uint64_t samples_ = 0;
  std::uint64_t contractions_ = 0;
  bool has_pending_ = false;
  std::uint8_t pending_ = 0;
};

}  // namespace engm
