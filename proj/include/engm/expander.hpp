#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "engm/bits.hpp"

namespace engm {

/// Stretch-and-fold expander parameters. Each 2k-bit raw block yields
/// rounds * k output bits, an expansion ratio of rounds / 2.
struct ExpanderConfig {
  unsigned k = 64;
  std::size_t rounds = 4096;

  static ExpanderConfig defaults() { return {}; }

  /// k must be one of 4, 8, 16, 32, 64 and rounds >= 2.
  void validate() const;

  std::size_t block_bits() const noexcept { return 2 * static_cast<std::size_t>(k); }
  std::size_t output_bits_per_block() const noexcept { return rounds * k; }
  std::uint64_t mask() const noexcept { return k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1; }

  friend bool operator==(const ExpanderConfig&, const ExpanderConfig&) = default;
};

/// Two k-bit registers (upper bits always zero).
struct ExpanderState {
  std::uint64_t u = 0;
  std::uint64_t v = 0;

  friend bool operator==(const ExpanderState&, const ExpanderState&) = default;
};

/// XORs a 2k-bit block into the registers: the first k bits (most
/// significant first) into U, the last k into V.
/// Throws Error(Length) unless raw.size() == 2k.
ExpanderState absorb(const ExpanderState& e, std::span<const std::uint8_t> raw,
                     const ExpanderConfig& cfg);

struct RoundResult {
  ExpanderState next;
  std::uint64_t fold = 0;  ///< O, the k-bit fold of the stretched word
};

/// One stretch-and-fold round. With r = U mod k:
///   W  = rotl_2k(U || V, r)                      (stretch)
///   O  = high_k(W) XOR reverse_k(low_k(W))       (fold, 2k -> k)
///   U' = (low_k(W) + high_k(W)) mod 2^k
///   V' = V XOR rotl_k(O, r)
RoundResult stretch_fold_round(const ExpanderState& e, const ExpanderConfig& cfg) noexcept;

/// The k-bit word the expander emits for a round: O XOR V'. The bare fold
/// O is biased in its top bits (the rotation amount is read from the low
/// bits of U, which the rotation itself moves next to the fold taps), so it
/// is masked with the freshly updated V register before leaving the round.
inline std::uint64_t emitted_word(const RoundResult& r) noexcept { return r.fold ^ r.next.v; }

/// Streaming expander. Starts from the all-zero state.
class Expander {
 public:
  explicit Expander(const ExpanderConfig& cfg);

  const ExpanderConfig& config() const noexcept { return cfg_; }
  const ExpanderState& state() const noexcept { return state_; }

  void absorb_block(std::span<const std::uint8_t> raw);

  /// Runs one round and returns the emitted k-bit word.
  std::uint64_t next_word() noexcept;

 private:
  ExpanderConfig cfg_;
  ExpanderState state_;
};

/// Absorbs each 2k-bit block of `raw` and runs `rounds` rounds after each,
/// emitting rounds * k bits per block. Throws Error(Length) if raw.size()
/// is not a multiple of 2k.
Bits expand_stream(std::span<const std::uint8_t> raw, const ExpanderConfig& cfg);

}  // namespace engm
