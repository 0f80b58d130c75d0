#include "fawna/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <istream>
#include <sstream>

#include "fawna/rng.hpp"

namespace fawna {

namespace {

constexpr std::int64_t kTrainingSamples = 1'000'000;
constexpr int kMaxLloydIterations = 10'000;
constexpr double kMovementTolerance = 1e-9;  // relative to the source sigma

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double distortion_rate(double variance, const QuantizerModel& q,
                       double rate_bits) {
  q.validate();
  if (!(variance >= 0.0)) throw config_error("variance must be >= 0");
  if (std::isnan(rate_bits) || rate_bits < 0.0)
    throw config_error("rate_bits must be >= 0");
  return variance * q.mb_product * std::exp2(-rate_bits);
}

double TrainedQuantizer::quantize(double value) const {
  // Index = count of thresholds < value, so a value equal to a threshold
  // lands in the lower cell.
  const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), value);
  return codebook[static_cast<std::size_t>(it - thresholds.begin())];
}

std::complex<double> TrainedQuantizer::quantize(std::complex<double> value) const {
  return {quantize(value.real()), quantize(value.imag())};
}

TrainedQuantizer train_gaussian_quantizer(int bits_per_real_dim,
                                          double variance,
                                          std::uint64_t seed) {
  if (bits_per_real_dim < 1 || bits_per_real_dim > 12)
    throw config_error("bits_per_real_dim must lie in [1, 12]");
  if (!(variance > 0.0)) throw config_error("variance must be > 0");

  const double sigma = std::sqrt(variance);
  const std::int64_t half = kTrainingSamples / 2;

  // Antithetic +/- pairs: the empirical set is exactly symmetric about 0, so
  // the fitted codebook inherits the source symmetry instead of drifting with
  // the sampling noise of sparsely populated tail cells.
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(2 * half));
  StreamRng rng(seed, 0);
  for (std::int64_t i = 0; i < half; ++i) {
    const double v = rng.normal() * sigma;
    samples.push_back(v);
    samples.push_back(-v);
  }
  std::sort(samples.begin(), samples.end());

  const std::size_t n = samples.size();
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + samples[i];

  // Companding initialization: the optimal point density for a Gaussian
  // source is a Gaussian of variance 3 sigma^2, so seed the codewords at
  // sqrt(3)-scaled empirical quantiles. The scale is capped to keep the
  // outermost codeword inside the sample support; a cell that starts empty
  // would never update. Plain equal-mass quantiles are a poor start here:
  // at 8+ bits Lloyd settles into a fixed point with ~50% excess distortion.
  const std::size_t levels = std::size_t{1} << bits_per_real_dim;
  std::vector<double> codebook(levels);
  const auto quantile_index = [&](std::size_t k) {
    const auto idx = static_cast<std::size_t>(
        (static_cast<double>(k) + 0.5) * static_cast<double>(n) /
        static_cast<double>(levels));
    return std::min(idx, n - 1);
  };
  const double top = samples[quantile_index(levels - 1)];
  const double scale =
      std::min(std::numbers::sqrt3, top > 0.0 ? samples[n - 1] / top : 1.0);
  for (std::size_t k = 0; k < levels; ++k)
    codebook[k] = scale * samples[quantile_index(k)];

  std::vector<double> thresholds(levels - 1);
  std::vector<std::size_t> bounds(levels + 1);
  bool converged = false;
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    for (std::size_t k = 0; k + 1 < levels; ++k)
      thresholds[k] = 0.5 * (codebook[k] + codebook[k + 1]);

    // Cell k holds samples in (t_{k-1}, t_k]; samples equal to a threshold
    // stay in the lower cell, matching the quantize() tie rule.
    bounds[0] = 0;
    bounds[levels] = n;
    for (std::size_t k = 0; k + 1 < levels; ++k)
      bounds[k + 1] = static_cast<std::size_t>(
          std::upper_bound(samples.begin(), samples.end(), thresholds[k]) -
          samples.begin());

    double movement = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
      const std::size_t count = bounds[k + 1] - bounds[k];
      if (count == 0) continue;  // keep the previous codeword
      const double centroid = static_cast<double>(
          (prefix[bounds[k + 1]] - prefix[bounds[k]]) /
          static_cast<long double>(count));
      movement = std::max(movement, std::abs(centroid - codebook[k]));
      codebook[k] = centroid;
    }
    if (movement < kMovementTolerance * sigma) {
      converged = true;
      break;
    }
  }

  TrainedQuantizer tq;
  tq.bits_per_real_dim = bits_per_real_dim;
  tq.codebook = std::move(codebook);
  tq.thresholds.resize(levels - 1);
  for (std::size_t k = 0; k + 1 < levels; ++k)
    tq.thresholds[k] = 0.5 * (tq.codebook[k] + tq.codebook[k + 1]);
  tq.source_variance = variance;
  tq.converged = converged;
  return tq;
}

double held_out_distortion(const TrainedQuantizer& tq, std::int64_t samples,
                           std::uint64_t seed) {
  if (samples < 1) throw config_error("samples must be >= 1");
  StreamRng rng(seed, 1);
  const double complex_variance = 2.0 * tq.source_variance;
  double sum = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const std::complex<double> y = rng.complex_normal(complex_variance);
    sum += std::norm(tq.quantize(y) - y);
  }
  return sum / static_cast<double>(samples);
}

MomentReport measure_quantizer_moments(const TrainedQuantizer& tq,
                                       std::int64_t trials,
                                       std::uint64_t seed) {
  if (trials < 100'000) throw config_error("moment check needs trials >= 1e5");

  StreamRng rng(seed, 2);
  const double complex_variance = 2.0 * tq.source_variance;

  std::complex<double> sum_q{0.0, 0.0};
  std::complex<double> sum_zq{0.0, 0.0};
  std::complex<double> sum_yqd{0.0, 0.0};
  double sum_q2 = 0.0, sum_zq_abs2 = 0.0, sum_yqd_abs2 = 0.0;
  double sum_y2 = 0.0, sum_z2 = 0.0;

  for (std::int64_t i = 0; i < trials; ++i) {
    const std::complex<double> y = rng.complex_normal(complex_variance);
    const std::complex<double> z = tq.quantize(y);
    const std::complex<double> q = z - y;
    const std::complex<double> zq = z * std::conj(q);
    const std::complex<double> yqd = y * std::conj(q) + std::norm(q);
    sum_q += q;
    sum_zq += zq;
    sum_yqd += yqd;
    sum_q2 += std::norm(q);
    sum_zq_abs2 += std::norm(zq);
    sum_yqd_abs2 += std::norm(yqd);
    sum_y2 += std::norm(y);
    sum_z2 += std::norm(z);
  }

  const double n = static_cast<double>(trials);
  MomentReport rep;
  rep.trials = trials;
  rep.mean_q = sum_q / n;
  rep.mean_zq = sum_zq / n;
  rep.mean_yq_plus_d = sum_yqd / n;
  rep.mean_abs_q2 = sum_q2 / n;
  rep.mean_abs_y2 = sum_y2 / n;
  rep.mean_abs_z2 = sum_z2 / n;
  // SE of a complex mean: sqrt(E|v - Ev|^2 / n).
  rep.se_mean_q = std::sqrt(std::max(0.0, rep.mean_abs_q2 - std::norm(rep.mean_q)) / n);
  rep.se_mean_zq = std::sqrt(
      std::max(0.0, sum_zq_abs2 / n - std::norm(rep.mean_zq)) / n);
  rep.se_mean_yq_plus_d = std::sqrt(
      std::max(0.0, sum_yqd_abs2 / n - std::norm(rep.mean_yq_plus_d)) / n);
  return rep;
}

std::string save_codebook(const TrainedQuantizer& tq) {
  std::ostringstream out;
  out << "bits=" << tq.bits_per_real_dim
      << " variance=" << format_full(tq.source_variance) << "\n";
  for (const double c : tq.codebook) out << format_full(c) << "\n";
  return out.str();
}

TrainedQuantizer load_codebook(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw config_error("codebook: missing header line");
  int bits = 0;
  double variance = 0.0;
  if (std::sscanf(header.c_str(), "bits=%d variance=%lf", &bits, &variance) != 2)
    throw config_error("codebook: malformed header, expected 'bits=<b> variance=<v>'");
  if (bits < 1 || bits > 12 || !(variance > 0.0))
    throw config_error("codebook: header values out of range");

  TrainedQuantizer tq;
  tq.bits_per_real_dim = bits;
  tq.source_variance = variance;
  const std::size_t levels = std::size_t{1} << bits;
  tq.codebook.reserve(levels);
  std::string line;
  while (tq.codebook.size() < levels && std::getline(in, line)) {
    if (line.empty()) continue;
    tq.codebook.push_back(std::stod(line));
  }
  if (tq.codebook.size() != levels)
    throw config_error("codebook: expected " + std::to_string(levels) + " codewords");
  if (!std::is_sorted(tq.codebook.begin(), tq.codebook.end()))
    throw config_error("codebook: codewords must be sorted ascending");

  tq.thresholds.resize(levels - 1);
  for (std::size_t k = 0; k + 1 < levels; ++k)
    tq.thresholds[k] = 0.5 * (tq.codebook[k] + tq.codebook[k + 1]);
  tq.converged = true;
  return tq;
}

TrainedQuantizer load_codebook(const std::string& text) {
  std::istringstream in(text);
  return load_codebook(in);
}

}  // namespace fawna
