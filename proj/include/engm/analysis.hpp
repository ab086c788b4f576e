#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "engm/bits.hpp"
#include "engm/dynsys.hpp"

namespace engm {

/// One-dimensional histogram. For real-valued data `edges` holds bins + 1
/// strictly increasing boundaries; for binary data it is {0, 1, 2}.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

/// Counts of (value at n, value at n + T) pairs, row-major [first][second].
class JointHistogram {
 public:
  JointHistogram(std::size_t rows, std::size_t cols);

  void add(std::size_t row, std::size_t col) noexcept {
    ++counts_[row * cols_ + col];
    ++total_;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t at(std::size_t row, std::size_t col) const { return counts_[row * cols_ + col]; }

  std::vector<std::uint64_t> row_marginal() const;
  std::vector<std::uint64_t> col_marginal() const;
  JointHistogram transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Plug-in mutual information of a joint histogram in bits; empty cells
/// contribute nothing. Zero for an empty histogram.
double mutual_information(const JointHistogram& joint);

/// One or more series quantized on a shared set of bins. Lagged pairs are
/// formed inside each member series and pooled.
class QuantizedEnsemble {
 public:
  /// Equal-width bins over the observed min/max of all members. A constant
  /// ensemble puts every value in bin 0.
  static QuantizedEnsemble real(const std::vector<std::vector<double>>& members, std::size_t bins);
  /// Symbols 0/1 taken as-is (two bins).
  static QuantizedEnsemble binary(std::span<const std::uint8_t> bits);

  std::size_t bins() const noexcept { return bins_; }
  /// Number of (n, n + lag) pairs available.
  std::size_t pair_count(std::size_t lag) const noexcept;

  Histogram histogram() const;
  JointHistogram joint(std::size_t lag) const;

  /// Plug-in I(lag) in bits. Throws InsufficientData unless the pair count
  /// exceeds 10 * bins^2.
  double mutual_information(std::size_t lag) const;

 private:
  QuantizedEnsemble() = default;

  std::vector<std::vector<std::uint16_t>> members_;
  std::vector<double> edges_;
  std::size_t bins_ = 0;
};

struct MiPoint {
  std::size_t lag = 0;
  double bits = 0.0;

  friend bool operator==(const MiPoint&, const MiPoint&) = default;
};

using MiCurve = std::vector<MiPoint>;

/// I(T) for a real series with `bins` equal-width bins (log base 2).
/// Requires series.size() > lag + 10 * bins^2 and bins >= 2.
double mutual_information(std::span<const double> series, std::size_t lag, std::size_t bins = 64);

/// I(T) for a 0/1 sequence with a 2x2 joint histogram.
double mutual_information_bits(std::span<const std::uint8_t> bits, std::size_t lag);

/// I(T) for T = 1..t_max.
MiCurve mi_curve(std::span<const double> series, std::size_t t_max, std::size_t bins = 64);
MiCurve mi_curve(const QuantizedEnsemble& ensemble, std::size_t t_max);
MiCurve mi_curve_bits(std::span<const std::uint8_t> bits, std::size_t t_max);

/// Smallest lag whose estimate is below epsilon. Throws NoCrossing.
std::size_t choose_sampling_interval(const MiCurve& curve, double epsilon = 0.01);

/// MI curves of two binary streams, lag-aligned for side-by-side output.
std::pair<MiCurve, MiCurve> mi_binary_compare(std::span<const std::uint8_t> bits_a,
                                              std::span<const std::uint8_t> bits_b,
                                              std::size_t t_max);

/// Reference bits from the standard library's Mersenne Twister (std::mt19937)
/// with a fixed seed: each bit is the top bit of one 32-bit output. This is
/// a non-cryptographic comparison baseline only.
Bits reference_rng_bits(std::size_t n, std::uint32_t seed = 42);

/// x-components of `count` trajectories started from initial conditions
/// drawn uniformly from [-0.9, 0.9]^4 (std::mt19937_64 seeded with `seed`),
/// each after `burn_in_steps` discarded RK4 steps, `length` steps long.
std::vector<std::vector<double>> x_series_ensemble(const SystemParams& params, std::size_t count,
                                                   std::size_t length, std::size_t burn_in_steps,
                                                   std::uint64_t seed = 42);

/// "T,mi_bits" with one row per lag.
std::string to_csv(const MiCurve& curve);
/// "T,mi_a_bits,mi_b_bits" with one row per lag.
std::string to_csv(const MiCurve& a, const MiCurve& b);

}  // namespace engm
