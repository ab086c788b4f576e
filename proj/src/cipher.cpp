#include "engm/cipher.hpp"

#include <sys/random.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>

#include "engm/error.hpp"

namespace engm {

namespace {

// Bit p of the 256-bit big-endian integer held in `bytes` (p = 0 is the LSB).
bool get_bit(const std::array<std::uint8_t, 32>& bytes, std::size_t p) {
  return (bytes[31 - p / 8] >> (p % 8)) & 1u;
}

void set_bit(std::array<std::uint8_t, 32>& bytes, std::size_t p, bool value) {
  const auto m = static_cast<std::uint8_t>(1u << (p % 8));
  if (value) {
    bytes[31 - p / 8] |= m;
  } else {
    bytes[31 - p / 8] &= static_cast<std::uint8_t>(~m);
  }
}

std::uint64_t get_range(const std::array<std::uint8_t, 32>& bytes, std::size_t lsb, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = width; i-- > 0;) v = (v << 1) | (get_bit(bytes, lsb + i) ? 1u : 0u);
  return v;
}

void set_range(std::array<std::uint8_t, 32>& bytes, std::size_t lsb, std::size_t width, std::uint64_t v) {
  for (std::size_t i = 0; i < width; ++i) set_bit(bytes, lsb + i, (v >> i) & 1u);
}

// Field i occupies bits [252 - 56*(i+1), 252 - 56*i).
std::size_t field_lsb(std::size_t i) {
  return SecretKey::kBits - SecretKey::kFieldBits * (i + 1);
}

constexpr std::uint64_t kFieldMask = (std::uint64_t{1} << SecretKey::kFieldBits) - 1;

void fill_entropy(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t got = ::getrandom(out.data() + done, out.size() - done, 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::EntropyUnavailable,
                  std::string("getrandom failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(got);
  }
}

void put_be64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
}

std::uint64_t get_be64(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

SecretKey SecretKey::generate() {
  std::array<std::uint8_t, 32> raw{};
  fill_entropy(raw);
  std::array<std::uint64_t, 4> fields{};
  for (std::size_t i = 0; i < 4; ++i) {
    fields[i] = get_be64(std::span<const std::uint8_t>(raw).subspan(8 * i, 8)) & kFieldMask;
  }
  std::memset(raw.data(), 0, raw.size());
  return from_fields(fields, 0);
}

SecretKey SecretKey::from_fields(const std::array<std::uint64_t, 4>& fields, std::uint32_t reserved) {
  SecretKey key;
  for (std::size_t i = 0; i < 4; ++i) {
    if (fields[i] > kFieldMask) throw Error(ErrorCode::InvalidArgument, "key field exceeds 56 bits");
    set_range(key.bytes_, field_lsb(i), kFieldBits, fields[i]);
  }
  if (reserved >> kReservedBits) throw Error(ErrorCode::InvalidArgument, "reserved value exceeds 28 bits");
  set_range(key.bytes_, 0, kReservedBits, reserved);
  return key;
}

SecretKey SecretKey::from_hex(std::string_view hex) {
  if (hex.size() != kHexDigits) {
    throw Error(ErrorCode::Format, "key must be exactly 64 hex digits");
  }
  if (hex.front() != '0') throw Error(ErrorCode::Format, "key leading nibble must be zero");
  SecretKey key;
  for (std::size_t i = 0; i < kHexDigits; ++i) {
    const char c = hex[i];
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else {
      throw Error(ErrorCode::Format, "key contains a character that is not a lowercase hex digit");
    }
    key.bytes_[i / 2] |= static_cast<std::uint8_t>(i % 2 == 0 ? nibble << 4 : nibble);
  }
  return key;
}

std::string SecretKey::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(kHexDigits);
  for (std::uint8_t b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::uint64_t SecretKey::field(std::size_t i) const noexcept {
  return get_range(bytes_, field_lsb(i), kFieldBits);
}

std::uint32_t SecretKey::reserved() const noexcept {
  return static_cast<std::uint32_t>(get_range(bytes_, 0, kReservedBits));
}

std::uint64_t SecretKey::fingerprint() const noexcept {
  std::uint64_t fp = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    fp ^= get_be64(std::span<const std::uint8_t>(bytes_).subspan(8 * i, 8));
  }
  return fp;
}

void CipherConfig::validate() const {
  if (version != 1) throw Error(ErrorCode::InvalidArgument, "unsupported config version");
  if (!params.satisfies_sign_constraints()) {
    throw Error(ErrorCode::InvalidArgument, "system parameters violate a < 0, b > 0, mu > 0");
  }
  sampler.validate();
  expander.validate();
}

SystemState initial_condition(const SecretKey& key) {
  if (key.reserved() != 0) {
    throw Error(ErrorCode::ReservedBits, "the 28 reserved key bits must be zero in version 1");
  }
  std::array<double, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double unit = static_cast<double>(key.field(i)) * 0x1p-56;
    c[i] = -0.9 + 1.8 * unit;
  }
  SystemState s{c[0], c[1], c[2], c[3]};
  if (std::fabs(s.x - s.z) < 1e-3 && std::fabs(s.y - s.w) < 1e-3) {
    s.z = s.z + 0.1;
    if (s.z > 0.9) s.z = s.z - 1.8;
  }
  if (s == SystemState{}) throw Error(ErrorCode::DegenerateKey, "key maps to the origin fixed point");
  return s;
}

KeystreamGenerator derive_state(const SecretKey& key, const CipherConfig& cfg) {
  cfg.validate();
  return KeystreamGenerator(initial_condition(key), cfg.params, cfg.sampler);
}

KeystreamCipher::KeystreamCipher(const SecretKey& key, const CipherConfig& cfg)
    : generator_(derive_state(key, cfg)), expander_(cfg.expander) {
  const ExpanderConfig& ec = cfg.expander;
  raw_.reserve(ec.block_bits());
  buffer_.reserve((ec.output_bits_per_block() + 7) / 8 + 8);
}

void KeystreamCipher::refill() {
  const ExpanderConfig& ec = expander_.config();
  raw_.clear();
  generator_.append_bits(raw_, ec.block_bits());
  expander_.absorb_block(raw_);

  buffer_.clear();
  buffer_pos_ = 0;
  if (ec.k == 64) {
    for (std::size_t i = 0; i < ec.rounds; ++i) {
      const std::uint64_t w = expander_.next_word();
      for (int b = 7; b >= 0; --b) buffer_.push_back(static_cast<std::uint8_t>(w >> (8 * b)));
    }
    return;
  }
  // k <= 32 and carry_bits_ < 8, so the accumulator never exceeds 40 bits.
  for (std::size_t i = 0; i < ec.rounds; ++i) {
    carry_ = (carry_ << ec.k) | expander_.next_word();
    carry_bits_ += ec.k;
    while (carry_bits_ >= 8) {
      carry_bits_ -= 8;
      buffer_.push_back(static_cast<std::uint8_t>(carry_ >> carry_bits_));
    }
    carry_ &= (std::uint64_t{1} << carry_bits_) - 1;
  }
}

void KeystreamCipher::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (buffer_pos_ == buffer_.size()) {
      refill();
      continue;
    }
    const std::size_t take = std::min(buffer_.size() - buffer_pos_, out.size() - done);
    std::memcpy(out.data() + done, buffer_.data() + buffer_pos_, take);
    buffer_pos_ += take;
    done += take;
  }
}

void KeystreamCipher::apply(std::span<std::uint8_t> data) {
  std::uint8_t chunk[4096];
  std::size_t done = 0;
  while (done < data.size()) {
    const std::size_t take = std::min(sizeof(chunk), data.size() - done);
    fill(std::span<std::uint8_t>(chunk, take));
    for (std::size_t i = 0; i < take; ++i) data[done + i] ^= chunk[i];
    done += take;
  }
}

std::vector<std::uint8_t> keystream_bytes(const SecretKey& key, const CipherConfig& cfg, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  if (n == 0) return out;
  KeystreamCipher ks(key, cfg);
  ks.fill(out);
  return out;
}

std::vector<std::uint8_t> CiphertextEnvelope::serialize() const {
  std::vector<std::uint8_t> out(kHeaderSize + payload.size());
  std::memcpy(out.data(), kMagic.data(), kMagic.size());
  out[4] = version;
  put_be64(out.data() + 5, key_fingerprint);
  put_be64(out.data() + 13, static_cast<std::uint64_t>(payload.size()));
  if (!payload.empty()) std::memcpy(out.data() + kHeaderSize, payload.data(), payload.size());
  return out;
}

CiphertextEnvelope CiphertextEnvelope::parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw Error(ErrorCode::Format, "envelope shorter than its header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::Format, "bad envelope magic");
  }
  if (bytes[4] != kVersion) {
    throw Error(ErrorCode::Format, "unsupported envelope version " + std::to_string(bytes[4]));
  }
  CiphertextEnvelope env;
  env.version = bytes[4];
  env.key_fingerprint = get_be64(bytes.subspan(5, 8));
  const std::uint64_t length = get_be64(bytes.subspan(13, 8));
  const std::size_t available = bytes.size() - kHeaderSize;
  if (length != available) {
    throw Error(ErrorCode::Format, "envelope declares " + std::to_string(length) +
                                       " payload bytes but carries " + std::to_string(available));
  }
  env.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
  return env;
}

CiphertextEnvelope encrypt(const SecretKey& key, const CipherConfig& cfg,
                           std::span<const std::uint8_t> plaintext) {
  CiphertextEnvelope env;
  env.key_fingerprint = key.fingerprint();
  env.payload.assign(plaintext.begin(), plaintext.end());
  if (!plaintext.empty()) {
    KeystreamCipher ks(key, cfg);
    ks.apply(env.payload);
  } else {
    cfg.validate();
    (void)initial_condition(key);
  }
  return env;
}

Decrypted decrypt(const SecretKey& key, const CipherConfig& cfg, const CiphertextEnvelope& envelope) {
  if (envelope.version != CiphertextEnvelope::kVersion) {
    throw Error(ErrorCode::Format, "unsupported envelope version");
  }
  Decrypted out;
  out.fingerprint_mismatch = envelope.key_fingerprint != key.fingerprint();
  out.plaintext = envelope.payload;
  if (!out.plaintext.empty()) {
    KeystreamCipher ks(key, cfg);
    ks.apply(out.plaintext);
  } else {
    cfg.validate();
    (void)initial_condition(key);
  }
  return out;
}

}  // namespace engm
