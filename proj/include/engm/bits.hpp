#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace engm {

/// Unpacked bit sequence, one bit (0 or 1) per element.
using Bits = std::vector<std::uint8_t>;

/// Packs bits most-significant-bit first; a trailing partial byte is
/// zero-padded. The bit count travels separately.
std::vector<std::uint8_t> pack_msb_first(std::span<const std::uint8_t> bits);

/// Inverse of pack_msb_first for the first `bit_count` bits of `bytes`.
Bits unpack_msb_first(std::span<const std::uint8_t> bytes, std::size_t bit_count);

/// Appends the low `width` bits of `word`, most significant first.
void append_word_bits(Bits& out, std::uint64_t word, unsigned width);

/// Reverses the low `width` bits of `value` (width in 1..64).
std::uint64_t reverse_bits(std::uint64_t value, unsigned width) noexcept;

}  // namespace engm
