#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace fawna {

/// Deterministic per-stream generator: every consumer (quantizer training,
/// simulation batch, bootstrap) owns a stream keyed by (master seed, stream
/// id), so fan-out order and thread count never change the draws. Gaussians
/// come from an explicit Box-Muller transform on the mt19937_64 output, which
/// keeps the sequence pinned by the engine's standardized output alone.
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double variance) { return normal() * std::sqrt(variance); }

  /// Circularly symmetric complex Gaussian with E|z|^2 = variance: two
  /// independent real normals of variance/2 each.
  std::complex<double> complex_normal(double variance) {
    const double sigma = std::sqrt(0.5 * variance);
    const double re = normal() * sigma;
    const double im = normal() * sigma;
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fawna
