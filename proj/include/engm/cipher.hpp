#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engm/dynsys.hpp"
#include "engm/expander.hpp"
#include "engm/keystream.hpp"

namespace engm {

/// A 252-bit secret, stored as 32 big-endian bytes whose top nibble is zero.
///
/// Layout, most significant first: u_x (56 bits), u_y, u_z, u_w, then 28
/// reserved bits that must be zero in version 1.
class SecretKey {
 public:
  static constexpr std::size_t kBits = 252;
  static constexpr std::size_t kFieldBits = 56;
  static constexpr std::size_t kReservedBits = 28;
  static constexpr std::size_t kHexDigits = 64;

  /// Fresh key from the operating system's cryptographic entropy source.
  /// The four 56-bit fields are random; the reserved bits are zero.
  /// Throws Error(EntropyUnavailable).
  static SecretKey generate();

  /// Exactly 64 lowercase hex digits with a leading '0'.
  static SecretKey from_hex(std::string_view hex);

  static SecretKey from_fields(const std::array<std::uint64_t, 4>& fields, std::uint32_t reserved = 0);

  /// The all-zero key used for reference vectors and tests.
  static SecretKey test_key() { return SecretKey{}; }

  std::string to_hex() const;

  /// Field i (0 = x, 1 = y, 2 = z, 3 = w), a value below 2^56.
  std::uint64_t field(std::size_t i) const noexcept;
  std::uint32_t reserved() const noexcept;

  /// XOR of the four big-endian 64-bit words. Not secret-preserving and not
  /// an authenticator; only a hint for catching the wrong key.
  std::uint64_t fingerprint() const noexcept;

  const std::array<std::uint8_t, 32>& bytes() const noexcept { return bytes_; }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  SecretKey() = default;
  std::array<std::uint8_t, 32> bytes_{};
};

/// Everything both endpoints must agree on besides the key.
struct CipherConfig {
  SystemParams params = SystemParams::defaults();
  SamplerConfig sampler = SamplerConfig::defaults();
  ExpanderConfig expander = ExpanderConfig::defaults();
  std::uint32_t version = 1;

  static CipherConfig defaults() { return {}; }

  /// Sign constraints, sampler and expander validity, known version.
  void validate() const;
};

/// Key to initial condition: c = -0.9 + 1.8 * (u_c / 2^56) per component
/// (u_c converted to binary64 with round-to-nearest, then scaled by 2^-56).
/// If |x0 - z0| < 1e-3 and |y0 - w0| < 1e-3 the point sits near the
/// invariant symmetric subspace and z0 is moved by +0.1, wrapping back into
/// [-0.9, 0.9]. Throws ReservedBits / DegenerateKey.
SystemState initial_condition(const SecretKey& key);

/// Builds the raw-bit generator for `key` (burn-in applied).
KeystreamGenerator derive_state(const SecretKey& key, const CipherConfig& cfg);

/// Full pipeline: trajectory sampling, whitening, expansion. Produces the
/// keystream bytes in order (bits packed most significant first).
class KeystreamCipher {
 public:
  KeystreamCipher(const SecretKey& key, const CipherConfig& cfg);

  /// Writes the next out.size() keystream bytes.
  void fill(std::span<std::uint8_t> out);

  /// XORs the next data.size() keystream bytes into `data`.
  void apply(std::span<std::uint8_t> data);

  const KeystreamGenerator& generator() const noexcept { return generator_; }

 private:
  void refill();

  KeystreamGenerator generator_;
  Expander expander_;
  Bits raw_;
  std::vector<std::uint8_t> buffer_;
  std::size_t buffer_pos_ = 0;
  std::uint64_t carry_ = 0;  // expander bits not yet forming a whole byte
  unsigned carry_bits_ = 0;
};

/// First n keystream bytes for (key, cfg).
std::vector<std::uint8_t> keystream_bytes(const SecretKey& key, const CipherConfig& cfg, std::size_t n);

/// Ciphertext container: "ENGM", version, fingerprint, big-endian length, payload.
struct CiphertextEnvelope {
  static constexpr std::array<std::uint8_t, 4> kMagic{0x45, 0x4E, 0x47, 0x4D};
  static constexpr std::uint8_t kVersion = 0x01;
  static constexpr std::size_t kHeaderSize = 4 + 1 + 8 + 8;

  std::uint8_t version = kVersion;
  std::uint64_t key_fingerprint = 0;
  std::vector<std::uint8_t> payload;

  std::vector<std::uint8_t> serialize() const;

  /// Throws Error(Format) on bad magic, unknown version, or a payload whose
  /// size differs from the declared length.
  static CiphertextEnvelope parse(std::span<const std::uint8_t> bytes);

  friend bool operator==(const CiphertextEnvelope&, const CiphertextEnvelope&) = default;
};

CiphertextEnvelope encrypt(const SecretKey& key, const CipherConfig& cfg,
                           std::span<const std::uint8_t> plaintext);

struct Decrypted {
  std::vector<std::uint8_t> plaintext;
  bool fingerprint_mismatch = false;
};

/// A fingerprint mismatch is reported, not treated as a failure.
Decrypted decrypt(const SecretKey& key, const CipherConfig& cfg, const CiphertextEnvelope& envelope);

}  // namespace engm
