#include "engm/bits.hpp"

#include <array>

#include "engm/error.hpp"

namespace engm {

namespace {

constexpr std::array<std::uint8_t, 256> make_reverse_table() {
  std::array<std::uint8_t, 256> table{};
  for (unsigned i = 0; i < 256; ++i) {
    unsigned r = 0;
    for (unsigned b = 0; b < 8; ++b) {
      if (i & (1u << b)) r |= 1u << (7 - b);
    }
    table[i] = static_cast<std::uint8_t>(r);
  }
  return table;
}

constexpr auto kReverseByte = make_reverse_table();

}  // namespace

std::vector<std::uint8_t> pack_msb_first(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

Bits unpack_msb_first(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
  if (bit_count > bytes.size() * 8) {
    throw Error(ErrorCode::Length, "requested more bits than the buffer holds");
  }
  Bits bits(bit_count);
  for (std::size_t i = 0; i < bit_count; ++i) {
    bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  }
  return bits;
}

void append_word_bits(Bits& out, std::uint64_t word, unsigned width) {
  for (unsigned i = width; i-- > 0;) {
    out.push_back(static_cast<std::uint8_t>((word >> i) & 1u));
  }
}

std::uint64_t reverse_bits(std::uint64_t value, unsigned width) noexcept {
  std::uint64_t r = 0;
  for (unsigned i = 0; i < 8; ++i) {
    r = (r << 8) | kReverseByte[(value >> (8 * i)) & 0xffu];
  }
  return r >> (64 - width);
}

}  // namespace engm
