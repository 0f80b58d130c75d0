#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fawna/types.hpp"

namespace fawna {

/// Distortion-rate prediction for an optimal fixed-rate quantizer in the
/// high-resolution regime: variance * mb_product * 2^-rate_bits. The caller
/// supplies the (complex) source power, e.g. N0 + |a_i|^2 P/W per interface.
double distortion_rate(double variance, const QuantizerModel& q,
                       double rate_bits);

/// Fixed-rate scalar quantizer fitted to a zero-mean Gaussian source by
/// Lloyd iteration on a seeded empirical sample. Codewords are sorted
/// ascending; thresholds are adjacent-codeword midpoints. A value exactly on
/// a threshold maps to the lower codeword.
struct TrainedQuantizer {
  int bits_per_real_dim = 0;
  std::vector<double> codebook;    // 2^bits entries, strictly increasing
  std::vector<double> thresholds;  // 2^bits - 1 midpoints
  double source_variance = 0.0;    // per real dimension
  bool converged = false;

  /// Nearest codeword, ties toward the lower one.
  double quantize(double value) const;

  /// Real and imaginary parts quantized independently; consumes
  /// 2 * bits_per_real_dim bits per complex sample.
  std::complex<double> quantize(std::complex<double> value) const;
};

/// Lloyd fixed point on a seeded 10^6-sample empirical Gaussian of the given
/// variance (per real dimension): alternate nearest-neighbor partition and
/// centroid steps until the largest centroid movement falls below 1e-9 of the
/// source standard deviation, or 10^4 iterations. Deterministic for a given
/// seed. On hitting the iteration cap the best-so-far codebook is returned
/// with converged = false.
TrainedQuantizer train_gaussian_quantizer(int bits_per_real_dim,
                                          double variance,
                                          std::uint64_t seed);

/// Mean |v - Q(v)|^2 over `samples` held-out draws from the training
/// distribution. Complex draws, both dimensions quantized, so the result is
/// comparable with distortion_rate at l = 2 * bits_per_real_dim applied to
/// the complex variance 2 * source_variance.
double held_out_distortion(const TrainedQuantizer& tq, std::int64_t samples,
                           std::uint64_t seed);

/// Empirical check of the optimal-quantizer moment identities: zero-mean
/// error, error orthogonal to the quantizer output, and
/// E[y q*] = -E[|q|^2]. All means are reported with standard errors.
struct MomentReport {
  std::int64_t trials = 0;
  std::complex<double> mean_q;          // E[q], q = Q(y) - y
  double se_mean_q = 0.0;
  std::complex<double> mean_zq;         // E[z conj(q)], z = Q(y)
  double se_mean_zq = 0.0;
  std::complex<double> mean_yq_plus_d;  // E[y conj(q)] + E[|q|^2]
  double se_mean_yq_plus_d = 0.0;
  double mean_abs_q2 = 0.0;             // E[|q|^2]
  double mean_abs_y2 = 0.0;
  double mean_abs_z2 = 0.0;
};

/// Draws y ~ CN(0, 2 * source_variance), quantizes both dimensions, and
/// accumulates the moment statistics above. Requires trials >= 1e5.
MomentReport measure_quantizer_moments(const TrainedQuantizer& tq,
                                       std::int64_t trials,
                                       std::uint64_t seed);

/// Plain-text codebook format: header "bits=<b> variance=<v>" followed by one
/// codeword per line, full precision. Used for golden-file tests.
std::string save_codebook(const TrainedQuantizer& tq);
TrainedQuantizer load_codebook(std::istream& in);
TrainedQuantizer load_codebook(const std::string& text);

}  // namespace fawna
