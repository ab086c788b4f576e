#include "engm/expander.hpp"

#include <string>

#include "engm/error.hpp"

namespace engm {

void ExpanderConfig::validate() const {
  if (k != 4 && k != 8 && k != 16 && k != 32 && k != 64) {
    throw Error(ErrorCode::InvalidArgument, "register width k must be 4, 8, 16, 32 or 64");
  }
  if (rounds < 2) throw Error(ErrorCode::InvalidArgument, "rounds per block must be >= 2");
}

namespace {

std::uint64_t rotl_k(std::uint64_t value, unsigned r, unsigned k, std::uint64_t mask) noexcept {
  if (r == 0) return value;
  return ((value << r) | (value >> (k - r))) & mask;
}

}  // namespace

ExpanderState absorb(const ExpanderState& e, std::span<const std::uint8_t> raw,
                     const ExpanderConfig& cfg) {
  if (raw.size() != cfg.block_bits()) {
    throw Error(ErrorCode::Length, "absorb expects " + std::to_string(cfg.block_bits()) +
                                       " bits, got " + std::to_string(raw.size()));
  }
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  for (unsigned i = 0; i < cfg.k; ++i) {
    hi = (hi << 1) | (raw[i] & 1u);
    lo = (lo << 1) | (raw[cfg.k + i] & 1u);
  }
  return {e.u ^ hi, e.v ^ lo};
}

RoundResult stretch_fold_round(const ExpanderState& e, const ExpanderConfig& cfg) noexcept {
  const unsigned k = cfg.k;
  const std::uint64_t mask = cfg.mask();
  const unsigned r = static_cast<unsigned>(e.u % k);

  // Rotate the 2k-bit word U||V left by r < k.
  std::uint64_t high = e.u;
  std::uint64_t low = e.v;
  if (r != 0) {
    high = ((e.u << r) | (e.v >> (k - r))) & mask;
    low = ((e.v << r) | (e.u >> (k - r))) & mask;
  }

  RoundResult out;
  out.fold = high ^ reverse_bits(low, k);
  out.next.u = (low + high) & mask;
  out.next.v = e.v ^ rotl_k(out.fold, r, k, mask);
  return out;
}

Expander::Expander(const ExpanderConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

void Expander::absorb_block(std::span<const std::uint8_t> raw) { state_ = absorb(state_, raw, cfg_); }

std::uint64_t Expander::next_word() noexcept {
  const RoundResult r = stretch_fold_round(state_, cfg_);
  state_ = r.next;
  return emitted_word(r);
}

Bits expand_stream(std::span<const std::uint8_t> raw, const ExpanderConfig& cfg) {
  Expander ex(cfg);
  const std::size_t block = cfg.block_bits();
  if (raw.size() % block != 0) {
    throw Error(ErrorCode::Length, "raw stream length " + std::to_string(raw.size()) +
                                       " is not a multiple of " + std::to_string(block));
  }
  Bits out;
  out.reserve(raw.size() / block * cfg.output_bits_per_block());
  for (std::size_t off = 0; off < raw.size(); off += block) {
    ex.absorb_block(raw.subspan(off, block));
    for (std::size_t i = 0; i < cfg.rounds; ++i) append_word_bits(out, ex.next_word(), cfg.k);
  }
  return out;
}

}  // namespace engm
