#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace engm {

/// A bit sequence under test: one bit (0/1) per element.
using BitSpan = std::span<const std::uint8_t>;

struct TestResult {
  std::string name;
  double p_value = 0.0;
  bool pass = false;  ///< p_value >= alpha
};

inline constexpr double kDefaultAlpha = 0.01;
/// Uniformity P-values at or above this value count as uniform.
inline constexpr double kUniformityThreshold = 0.0001;

// Minimum sequence lengths.
inline constexpr std::size_t kMinMonobitBits = 100;
inline constexpr std::size_t kMinBlockFrequencyBits = 100;
inline constexpr std::size_t kMinRunsBits = 100;
inline constexpr std::size_t kMinLongestRunBits = 128;
inline constexpr std::size_t kMinCusumBits = 100;
inline constexpr std::size_t kMinSpectralBits = 1000;

/// Frequency (monobit): S = #ones - #zeros, p = erfc(|S| / sqrt(2n)).
TestResult monobit(BitSpan bits, double alpha = kDefaultAlpha);

/// Frequency within blocks of M bits: chi^2 = 4M sum (pi_i - 1/2)^2,
/// p = igamc(N/2, chi^2/2) over the N = n/M complete blocks.
TestResult block_frequency(BitSpan bits, std::size_t block_size = 128, double alpha = kDefaultAlpha);

/// Runs test. Fails outright (p = 0) when the ones proportion violates the
/// frequency prerequisite |pi - 1/2| < 2/sqrt(n).
TestResult runs(BitSpan bits, double alpha = kDefaultAlpha);

/// Longest run of ones in blocks; block size 8, 128 or 10^4 by length.
TestResult longest_run(BitSpan bits, double alpha = kDefaultAlpha);

/// Serial test on overlapping m-bit patterns (with wrap-around). Returns the
/// two P-values (first and second differences of psi^2). Needs m >= 2 and
/// m < floor(log2 n) - 2.
std::array<TestResult, 2> serial(BitSpan bits, unsigned m = 16, double alpha = kDefaultAlpha);

/// Approximate entropy with block length m; needs m < floor(log2 n) - 5.
TestResult approximate_entropy(BitSpan bits, unsigned m = 10, double alpha = kDefaultAlpha);

enum class CusumMode { Forward, Backward };

/// Cumulative sums of the +-1 mapped sequence.
TestResult cusum(BitSpan bits, CusumMode mode, double alpha = kDefaultAlpha);

/// Spectral test on the largest power-of-two prefix of the sequence,
/// radix-2 FFT of the +-1 mapped bits, 95% peak threshold.
TestResult dft_spectral(BitSpan bits, double alpha = kDefaultAlpha);

/// Uniformity of a set of P-values: counts F_i in the ten bins
/// [0, 0.1), [0.1, 0.2), ..., [0.9, 1.0], chi^2 = sum (F_i - s/10)^2 / (s/10),
/// result igamc(9/2, chi^2/2). Needs at least 10 values.
double uniformity(std::span<const double> p_values);

/// Ten-bin histogram used by uniformity().
std::array<std::size_t, 10> p_value_histogram(std::span<const double> p_values);

struct SuiteOptions {
  double alpha = kDefaultAlpha;
  bool include_spectral = false;
  std::size_t block_size = 128;
  unsigned serial_m = 16;
  unsigned apen_m = 10;
};

/// Results of every enabled test over every sequence.
struct SuiteReport {
  struct TestSummary {
    std::string name;
    std::vector<double> p_values;  ///< one per sequence, input order
    std::size_t passes = 0;
    double proportion = 0.0;
    std::array<std::size_t, 10> histogram{};
    double uniformity_p = -1.0;  ///< -1 when fewer than 10 sequences
    bool proportion_ok = false;
    bool uniformity_ok = false;
  };

  double alpha = kDefaultAlpha;
  std::size_t sequences = 0;
  std::size_t sequence_bits = 0;
  double proportion_low = 0.0;   ///< binomial band (1 - alpha) -+ 3 sigma
  double proportion_high = 0.0;
  std::vector<TestSummary> tests;
  double average_uniformity_p = -1.0;
  double average_p_value = 0.0;  ///< mean over every test and sequence
  bool passed = false;

  /// Human-readable table, then "test_name,sequence_index,p_value,pass"
  /// lines, then "uniformity,test_name,p_value" footer lines.
  std::string render() const;
};

/// Runs every enabled test on every sequence. The suite passes when each
/// test's pass proportion is inside the binomial band and, with at least ten
/// sequences, each test's uniformity P-value is >= 0.0001.
SuiteReport run_suite(std::span<const BitSpan> sequences, const SuiteOptions& options = {});

}  // namespace engm
