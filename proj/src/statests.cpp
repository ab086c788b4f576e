#include "engm/statests.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "engm/error.hpp"
#include "engm/special_functions.hpp"

namespace engm {

namespace {

void require_length(BitSpan bits, std::size_t minimum, const char* test) {
  if (bits.size() < minimum) {
    throw Error(ErrorCode::InsufficientData, std::string(test) + " needs at least " +
                                                 std::to_string(minimum) + " bits, got " +
                                                 std::to_string(bits.size()));
  }
}

TestResult make_result(std::string name, double p, double alpha) {
  return {std::move(name), p, p >= alpha};
}

std::size_t count_ones(BitSpan bits) {
  std::size_t ones = 0;
  for (auto b : bits) ones += b & 1u;
  return ones;
}

unsigned floor_log2(std::size_t n) { return static_cast<unsigned>(std::bit_width(n) - 1); }

// Overlapping m-bit pattern counts over n windows, wrapping past the end.
std::vector<std::uint64_t> pattern_counts(BitSpan bits, unsigned m) {
  const std::size_t n = bits.size();
  std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
  const std::uint32_t mask = (std::uint32_t{1} << m) - 1;
  std::uint32_t v = 0;
  for (unsigned j = 0; j + 1 < m; ++j) v = (v << 1) | (bits[j % n] & 1u);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + m - 1;
    v = ((v << 1) | (bits[j < n ? j : j % n] & 1u)) & mask;
    ++counts[v];
  }
  return counts;
}

double psi_squared(BitSpan bits, unsigned m) {
  if (m == 0) return 0.0;
  const auto counts = pattern_counts(bits, m);
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c * c;
  const double n = static_cast<double>(bits.size());
  return std::ldexp(static_cast<double>(sum), static_cast<int>(m)) / n - n;
}

double phi(BitSpan bits, unsigned m) {
  if (m == 0) return 0.0;
  const auto counts = pattern_counts(bits, m);
  const double n = static_cast<double>(bits.size());
  double sum = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    sum += p * std::log(p);
  }
  return sum;
}

void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

TestResult monobit(BitSpan bits, double alpha) {
  require_length(bits, kMinMonobitBits, "monobit");
  const double n = static_cast<double>(bits.size());
  const double s = 2.0 * static_cast<double>(count_ones(bits)) - n;
  return make_result("monobit", erfc(std::fabs(s) / std::sqrt(2.0 * n)), alpha);
}

TestResult block_frequency(BitSpan bits, std::size_t block_size, double alpha) {
  require_length(bits, std::max(kMinBlockFrequencyBits, block_size), "block_frequency");
  if (block_size == 0) throw Error(ErrorCode::InvalidArgument, "block size must be positive");
  const std::size_t blocks = bits.size() / block_size;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < blocks; ++i) {
    const double pi = static_cast<double>(count_ones(bits.subspan(i * block_size, block_size))) /
                      static_cast<double>(block_size);
    chi2 += (pi - 0.5) * (pi - 0.5);
  }
  chi2 *= 4.0 * static_cast<double>(block_size);
  return make_result("block_frequency", igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0), alpha);
}

TestResult runs(BitSpan bits, double alpha) {
  require_length(bits, kMinRunsBits, "runs");
  const double n = static_cast<double>(bits.size());
  const double pi = static_cast<double>(count_ones(bits)) / n;
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) return make_result("runs", 0.0, alpha);
  std::size_t v = 1;
  for (std::size_t k = 0; k + 1 < bits.size(); ++k) v += (bits[k] != bits[k + 1]) ? 1 : 0;
  const double q = pi * (1.0 - pi);
  const double p = erfc(std::fabs(static_cast<double>(v) - 2.0 * n * q) / (2.0 * std::sqrt(2.0 * n) * q));
  return make_result("runs", p, alpha);
}

TestResult longest_run(BitSpan bits, double alpha) {
  require_length(bits, kMinLongestRunBits, "longest_run");
  const std::size_t n = bits.size();
  std::size_t m = 0;
  unsigned v_min = 0;
  std::vector<double> pi;
  if (n < 6272) {
    m = 8;
    v_min = 1;
    pi = {0.2148, 0.3672, 0.2305, 0.1875};
  } else if (n < 750000) {
    m = 128;
    v_min = 4;
    pi = {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124};
  } else {
    m = 10000;
    v_min = 10;
    pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
  }
  const std::size_t classes = pi.size();
  const std::size_t blocks = n / m;
  std::vector<double> nu(classes, 0.0);
  for (std::size_t i = 0; i < blocks; ++i) {
    unsigned longest = 0;
    unsigned run = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (bits[i * m + j]) {
        longest = std::max(longest, ++run);
      } else {
        run = 0;
      }
    }
    const std::size_t cls = longest <= v_min ? 0 : std::min<std::size_t>(longest - v_min, classes - 1);
    nu[cls] += 1.0;
  }
  double chi2 = 0.0;
  const double nb = static_cast<double>(blocks);
  for (std::size_t i = 0; i < classes; ++i) {
    const double expected = nb * pi[i];
    chi2 += (nu[i] - expected) * (nu[i] - expected) / expected;
  }
  const double k = static_cast<double>(classes - 1);
  return make_result("longest_run", igamc(k / 2.0, chi2 / 2.0), alpha);
}

std::array<TestResult, 2> serial(BitSpan bits, unsigned m, double alpha) {
  require_length(bits, 16, "serial");
  if (m < 2 || m + 3 > floor_log2(bits.size()) || m > 24) {
    throw Error(ErrorCode::InsufficientData,
                "serial block length " + std::to_string(m) + " too large for " +
                    std::to_string(bits.size()) + " bits");
  }
  const double p0 = psi_squared(bits, m);
  const double p1 = psi_squared(bits, m - 1);
  const double p2 = psi_squared(bits, m - 2);
  const double del1 = p0 - p1;
  const double del2 = p0 - 2.0 * p1 + p2;
  const double pv1 = igamc(std::ldexp(1.0, static_cast<int>(m) - 2), std::max(0.0, del1) / 2.0);
  const double pv2 = igamc(std::ldexp(1.0, static_cast<int>(m) - 3), std::max(0.0, del2) / 2.0);
  return {make_result("serial_1", pv1, alpha), make_result("serial_2", pv2, alpha)};
}

TestResult approximate_entropy(BitSpan bits, unsigned m, double alpha) {
  require_length(bits, 64, "approximate_entropy");
  if (m < 1 || m + 6 > floor_log2(bits.size()) || m > 24) {
    throw Error(ErrorCode::InsufficientData,
                "approximate entropy block length " + std::to_string(m) + " too large for " +
                    std::to_string(bits.size()) + " bits");
  }
  const double n = static_cast<double>(bits.size());
  const double apen = phi(bits, m) - phi(bits, m + 1);
  const double chi2 = 2.0 * n * (std::numbers::ln2 - apen);
  const double p = igamc(std::ldexp(1.0, static_cast<int>(m) - 1), std::max(0.0, chi2) / 2.0);
  return make_result("approximate_entropy", p, alpha);
}

TestResult cusum(BitSpan bits, CusumMode mode, double alpha) {
  require_length(bits, kMinCusumBits, "cusum");
  const std::size_t n = bits.size();
  long long s = 0;
  long long z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t b = mode == CusumMode::Forward ? bits[i] : bits[n - 1 - i];
    s += b ? 1 : -1;
    z = std::max(z, s < 0 ? -s : s);
  }
  const double nd = static_cast<double>(n);
  const double zd = static_cast<double>(z);
  const double root = std::sqrt(nd);
  double sum1 = 0.0;
  const auto k1_start = static_cast<long long>((-nd / zd + 1.0) / 4.0);
  const auto k1_end = static_cast<long long>((nd / zd - 1.0) / 4.0);
  for (long long k = k1_start; k <= k1_end; ++k) {
    const double kd = static_cast<double>(k);
    sum1 += normal_cdf((4.0 * kd + 1.0) * zd / root) - normal_cdf((4.0 * kd - 1.0) * zd / root);
  }
  double sum2 = 0.0;
  const auto k2_start = static_cast<long long>((-nd / zd - 3.0) / 4.0);
  for (long long k = k2_start; k <= k1_end; ++k) {
    const double kd = static_cast<double>(k);
    sum2 += normal_cdf((4.0 * kd + 3.0) * zd / root) - normal_cdf((4.0 * kd + 1.0) * zd / root);
  }
  // 1 - sum1 + sum2 is a probability; only rounding can push it past [0, 1].
  const double p = std::clamp(1.0 - sum1 + sum2, 0.0, 1.0);
  return make_result(mode == CusumMode::Forward ? "cusum_forward" : "cusum_backward", p, alpha);
}

TestResult dft_spectral(BitSpan bits, double alpha) {
  require_length(bits, kMinSpectralBits, "dft_spectral");
  const std::size_t n = std::bit_floor(bits.size());
  std::vector<std::complex<double>> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = bits[i] ? 1.0 : -1.0;
  fft(x);
  const double nd = static_cast<double>(n);
  const double threshold = std::sqrt(std::log(1.0 / 0.05) * nd);
  std::size_t below = 0;
  for (std::size_t j = 0; j < n / 2; ++j) below += std::abs(x[j]) < threshold ? 1 : 0;
  const double expected = 0.95 * nd / 2.0;
  const double d = (static_cast<double>(below) - expected) / std::sqrt(nd * 0.95 * 0.05 / 4.0);
  return make_result("dft_spectral", erfc(std::fabs(d) / std::sqrt(2.0)), alpha);
}

std::array<std::size_t, 10> p_value_histogram(std::span<const double> p_values) {
  std::array<std::size_t, 10> bins{};
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::Domain, "P-value outside [0, 1]");
    const auto i = static_cast<std::size_t>(std::floor(p * 10.0));
    ++bins[std::min<std::size_t>(i, 9)];
  }
  return bins;
}

double uniformity(std::span<const double> p_values) {
  if (p_values.size() < 10) {
    throw Error(ErrorCode::InsufficientData, "uniformity needs at least 10 P-values");
  }
  const auto bins = p_value_histogram(p_values);
  const double expected = static_cast<double>(p_values.size()) / 10.0;
  double chi2 = 0.0;
  for (std::size_t f : bins) {
    const double diff = static_cast<double>(f) - expected;
    chi2 += diff * diff / expected;
  }
  return igamc(9.0 / 2.0, chi2 / 2.0);
}

SuiteReport run_suite(std::span<const BitSpan> sequences, const SuiteOptions& options) {
  if (sequences.empty()) throw Error(ErrorCode::InvalidArgument, "run_suite needs at least one sequence");
  SuiteReport report;
  report.alpha = options.alpha;
  report.sequences = sequences.size();
  report.sequence_bits = sequences.front().size();
  for (BitSpan seq : sequences) {
    if (seq.size() != report.sequence_bits) throw Error(ErrorCode::Length, "run_suite sequences differ in length");
  }

  std::vector<std::string> names = {"monobit",  "block_frequency",     "runs",
                                    "longest_run", "serial_1",         "serial_2",
                                    "approximate_entropy", "cusum_forward", "cusum_backward"};
  if (options.include_spectral) names.push_back("dft_spectral");
  report.tests.resize(names.size());
  for (std::size_t t = 0; t < names.size(); ++t) report.tests[t].name = names[t];

  const double alpha = options.alpha;
  for (BitSpan seq : sequences) {
    require_length(seq, kMinLongestRunBits, "run_suite");
    const unsigned log2n = floor_log2(seq.size());
    const unsigned serial_m = std::min(options.serial_m, log2n - 3);
    const unsigned apen_m = std::min(options.apen_m, log2n - 6);
    std::vector<TestResult> results;
    results.reserve(names.size());
    results.push_back(monobit(seq, alpha));
    results.push_back(block_frequency(seq, std::min(options.block_size, seq.size()), alpha));
    results.push_back(runs(seq, alpha));
    results.push_back(longest_run(seq, alpha));
    const auto ser = serial(seq, serial_m, alpha);
    results.push_back(ser[0]);
    results.push_back(ser[1]);
    results.push_back(approximate_entropy(seq, apen_m, alpha));
    results.push_back(cusum(seq, CusumMode::Forward, alpha));
    results.push_back(cusum(seq, CusumMode::Backward, alpha));
    if (options.include_spectral) results.push_back(dft_spectral(seq, alpha));
    for (std::size_t t = 0; t < results.size(); ++t) {
      report.tests[t].p_values.push_back(results[t].p_value);
      report.tests[t].passes += results[t].pass ? 1 : 0;
    }
  }

  const double s = static_cast<double>(sequences.size());
  const double p_hat = 1.0 - alpha;
  const double sigma = std::sqrt(p_hat * (1.0 - p_hat) / s);
  report.proportion_low = p_hat - 3.0 * sigma;
  report.proportion_high = p_hat + 3.0 * sigma;

  bool all_ok = true;
  double uniformity_sum = 0.0;
  double p_sum = 0.0;
  for (auto& t : report.tests) {
    for (double p : t.p_values) p_sum += p;
    t.proportion = static_cast<double>(t.passes) / s;
    t.histogram = p_value_histogram(t.p_values);
    t.proportion_ok = t.proportion >= report.proportion_low && t.proportion <= report.proportion_high;
    if (sequences.size() >= 10) {
      t.uniformity_p = uniformity(t.p_values);
      t.uniformity_ok = t.uniformity_p >= kUniformityThreshold;
      uniformity_sum += t.uniformity_p;
    } else {
      t.uniformity_ok = true;
    }
    all_ok = all_ok && t.proportion_ok && t.uniformity_ok;
  }
  if (sequences.size() >= 10) {
    report.average_uniformity_p = uniformity_sum / static_cast<double>(report.tests.size());
  }
  report.average_p_value = p_sum / (s * static_cast<double>(report.tests.size()));
  report.passed = all_ok;
  return report;
}

std::string SuiteReport::render() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%zu sequences x %zu bits, alpha = %g, proportion band [%.4f, %.4f]\n",
                sequences, sequence_bits, alpha, proportion_low, proportion_high);
  out += line;
  std::snprintf(line, sizeof(line), "%-20s %-32s %10s %12s  %s\n", "test", "C1 .. C10", "proportion",
                "uniformity", "result");
  out += line;
  for (const auto& t : tests) {
    std::string hist;
    for (std::size_t c : t.histogram) hist += std::to_string(c) + " ";
    char uni[32];
    if (t.uniformity_p >= 0.0) {
      std::snprintf(uni, sizeof(uni), "%.6f", t.uniformity_p);
    } else {
      std::snprintf(uni, sizeof(uni), "n/a");
    }
    std::snprintf(line, sizeof(line), "%-20s %-32s %4zu/%-5zu %12s  %s\n", t.name.c_str(), hist.c_str(),
                  t.passes, sequences, uni, (t.proportion_ok && t.uniformity_ok) ? "PASS" : "FAIL");
    out += line;
  }
  std::snprintf(line, sizeof(line), "average P-value: %.6f\n", average_p_value);
  out += line;
  if (average_uniformity_p >= 0.0) {
    std::snprintf(line, sizeof(line), "average uniformity P-value: %.6f\n", average_uniformity_p);
    out += line;
  }
  out += passed ? "suite: PASS\n" : "suite: FAIL\n";
  out += "test_name,sequence_index,p_value,pass\n";
  for (const auto& t : tests) {
    for (std::size_t i = 0; i < t.p_values.size(); ++i) {
      std::snprintf(line, sizeof(line), "%s,%zu,%.10g,%d\n", t.name.c_str(), i, t.p_values[i],
                    t.p_values[i] >= alpha ? 1 : 0);
      out += line;
    }
  }
  for (const auto& t : tests) {
    if (t.uniformity_p >= 0.0) {
      std::snprintf(line, sizeof(line), "uniformity,%s,%.10g\n", t.name.c_str(), t.uniformity_p);
      out += line;
    }
  }
  return out;
}

}  // namespace engm
