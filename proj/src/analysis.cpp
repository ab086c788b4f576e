#include "engm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "engm/error.hpp"
#include "rk4_kernel.hpp"

namespace engm {

JointHistogram::JointHistogram(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), counts_(rows * cols, 0) {}

std::vector<std::uint64_t> JointHistogram::row_marginal() const {
  std::vector<std::uint64_t> m(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m[r] += counts_[r * cols_ + c];
  }
  return m;
}

std::vector<std::uint64_t> JointHistogram::col_marginal() const {
  std::vector<std::uint64_t> m(cols_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m[c] += counts_[r * cols_ + c];
  }
  return m;
}

JointHistogram JointHistogram::transposed() const {
  JointHistogram t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t.counts_[c * rows_ + r] = counts_[r * cols_ + c];
  }
  t.total_ = total_;
  return t;
}

double mutual_information(const JointHistogram& joint) {
  if (joint.total() == 0) return 0.0;
  const auto pr = joint.row_marginal();
  const auto pc = joint.col_marginal();
  const double n = static_cast<double>(joint.total());
  double sum = 0.0;
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    if (pr[r] == 0) continue;
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      const std::uint64_t k = joint.at(r, c);
      if (k == 0) continue;
      const double kk = static_cast<double>(k);
      sum += kk * std::log2(kk * n / (static_cast<double>(pr[r]) * static_cast<double>(pc[c])));
    }
  }
  // Each term can be negative; the total is non-negative up to rounding.
  return std::max(0.0, sum / n);
}

QuantizedEnsemble QuantizedEnsemble::real(const std::vector<std::vector<double>>& members,
                                          std::size_t bins) {
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "need at least two bins");
  if (bins > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "too many bins");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : members) {
    for (double v : s) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "series contains a non-finite value");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  QuantizedEnsemble q;
  q.bins_ = bins;
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  if (!(hi >= lo)) lo = hi = 0.0;
  q.edges_.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) q.edges_[i] = lo + width * static_cast<double>(i);
  q.members_.reserve(members.size());
  for (const auto& s : members) {
    std::vector<std::uint16_t> idx(s.size(), 0);
    if (hi > lo) {
      const double scale = static_cast<double>(bins) / (hi - lo);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto b = static_cast<std::size_t>((s[i] - lo) * scale);
        idx[i] = static_cast<std::uint16_t>(std::min(b, bins - 1));
      }
    }
    q.members_.push_back(std::move(idx));
  }
  return q;
}

QuantizedEnsemble QuantizedEnsemble::binary(std::span<const std::uint8_t> bits) {
  QuantizedEnsemble q;
  q.bins_ = 2;
  q.edges_ = {0.0, 1.0, 2.0};
  std::vector<std::uint16_t> idx(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw Error(ErrorCode::InvalidArgument, "binary series must contain only 0 and 1");
    idx[i] = bits[i];
  }
  q.members_.push_back(std::move(idx));
  return q;
}

std::size_t QuantizedEnsemble::pair_count(std::size_t lag) const noexcept {
  std::size_t n = 0;
  for (const auto& m : members_) {
    if (m.size() > lag) n += m.size() - lag;
  }
  return n;
}

Histogram QuantizedEnsemble::histogram() const {
  Histogram h;
  h.edges = edges_;
  h.counts.assign(bins_, 0);
  for (const auto& m : members_) {
    for (auto b : m) ++h.counts[b];
    h.total += m.size();
  }
  return h;
}

JointHistogram QuantizedEnsemble::joint(std::size_t lag) const {
  JointHistogram j(bins_, bins_);
  for (const auto& m : members_) {
    for (std::size_t i = 0; i + lag < m.size(); ++i) j.add(m[i], m[i + lag]);
  }
  return j;
}

double QuantizedEnsemble::mutual_information(std::size_t lag) const {
  const std::size_t needed = 10 * bins_ * bins_;
  const std::size_t pairs = pair_count(lag);
  if (pairs <= needed) {
    throw Error(ErrorCode::InsufficientData, "lag " + std::to_string(lag) + " leaves " +
                                                 std::to_string(pairs) + " pairs, need more than " +
                                                 std::to_string(needed));
  }
  return engm::mutual_information(joint(lag));
}

double mutual_information(std::span<const double> series, std::size_t lag, std::size_t bins) {
  const std::vector<std::vector<double>> one{std::vector<double>(series.begin(), series.end())};
  return QuantizedEnsemble::real(one, bins).mutual_information(lag);
}

double mutual_information_bits(std::span<const std::uint8_t> bits, std::size_t lag) {
  return QuantizedEnsemble::binary(bits).mutual_information(lag);
}

MiCurve mi_curve(const QuantizedEnsemble& ensemble, std::size_t t_max) {
  MiCurve curve;
  curve.reserve(t_max);
  for (std::size_t t = 1; t <= t_max; ++t) curve.push_back({t, ensemble.mutual_information(t)});
  return curve;
}

MiCurve mi_curve(std::span<const double> series, std::size_t t_max, std::size_t bins) {
  const std::vector<std::vector<double>> one{std::vector<double>(series.begin(), series.end())};
  return mi_curve(QuantizedEnsemble::real(one, bins), t_max);
}

MiCurve mi_curve_bits(std::span<const std::uint8_t> bits, std::size_t t_max) {
  return mi_curve(QuantizedEnsemble::binary(bits), t_max);
}

std::size_t choose_sampling_interval(const MiCurve& curve, double epsilon) {
  for (const MiPoint& p : curve) {
    if (p.bits < epsilon) return p.lag;
  }
  throw Error(ErrorCode::NoCrossing, "no lag has mutual information below " + std::to_string(epsilon));
}

std::pair<MiCurve, MiCurve> mi_binary_compare(std::span<const std::uint8_t> bits_a,
                                              std::span<const std::uint8_t> bits_b,
                                              std::size_t t_max) {
  return {mi_curve_bits(bits_a, t_max), mi_curve_bits(bits_b, t_max)};
}

Bits reference_rng_bits(std::size_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  Bits bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(gen() >> 31);
  return bits;
}

std::vector<std::vector<double>> x_series_ensemble(const SystemParams& params, std::size_t count,
                                                   std::size_t length, std::size_t burn_in_steps,
                                                   std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uniform(-0.9, 0.9);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SystemState s;
    s.x = uniform(gen);
    s.y = uniform(gen);
    s.z = uniform(gen);
    s.w = uniform(gen);
    std::vector<double> xs;
    xs.reserve(length);
    for (std::size_t i = 0; i < burn_in_steps + length; ++i) {
      s = detail::rk4(s, params.a(), params.b(), params.mu(), params.dt());
      if (!s.finite()) {
        throw Error(ErrorCode::Overflow, "ensemble trajectory " + std::to_string(k) +
                                             " escaped at step " + std::to_string(i + 1));
      }
      if (i >= burn_in_steps) xs.push_back(s.x);
    }
    out.push_back(std::move(xs));
  }
  return out;
}

std::string to_csv(const MiCurve& curve) {
  std::string out = "T,mi_bits\n";
  char line[96];
  for (const MiPoint& p : curve) {
    std::snprintf(line, sizeof(line), "%zu,%.12g\n", p.lag, p.bits);
    out += line;
  }
  return out;
}

std::string to_csv(const MiCurve& a, const MiCurve& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "curves differ in length");
  std::string out = "T,mi_a_bits,mi_b_bits\n";
  char line[128];
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].lag != b[i].lag) throw Error(ErrorCode::InvalidArgument, "curves are not lag-aligned");
    std::snprintf(line, sizeof(line), "%zu,%.12g,%.12g\n", a[i].lag, a[i].bits, b[i].bits);
    out += line;
  }
  return out;
}

}  // namespace engm
