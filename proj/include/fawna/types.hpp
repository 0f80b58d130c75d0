#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fawna {

/// Parameter-domain violation (a flag or field is outside its legal range).
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Configuration is well-formed but violates the quantizer-rate floor
/// l = C_f/(r W) >= 1 (or a related feasibility constraint). Carries the
/// largest admissible interface count and bandwidth as hints.
class admissibility_error : public std::domain_error {
 public:
  explicit admissibility_error(const std::string& msg, int max_interfaces = -1,
                               double max_bandwidth = 0.0)
      : std::domain_error(msg),
        max_interfaces_(max_interfaces),
        max_bandwidth_(max_bandwidth) {}

  int max_interfaces() const { return max_interfaces_; }
  double max_bandwidth() const { return max_bandwidth_; }

 private:
  int max_interfaces_;
  double max_bandwidth_;
};

/// Unexpected numerical failure (singular system, non-finite intermediate).
class numerics_error : public std::runtime_error {
 public:
  explicit numerics_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Named constants of high-resolution quantization theory. Only the product
/// of Gersho's constant and Zador's factor enters the capacity formulas.
namespace zg {
inline constexpr double kGershoScalar = 1.0 / 12.0;
inline constexpr double kGershoAsymptotic =
    1.0 / (2.0 * std::numbers::pi * std::numbers::e);
inline constexpr double kZadorScalarGauss =
    6.0 * std::numbers::sqrt3 * std::numbers::pi;
inline constexpr double kZadorAsymptotic =
    2.0 * std::numbers::pi * std::numbers::e;

/// Product for a fixed-rate scalar quantizer of a Gaussian source,
/// pi*sqrt(3)/2 ~ 2.7207. Upper end of the admissible range.
inline constexpr double kScalarGaussProduct =
    std::numbers::pi * std::numbers::sqrt3 / 2.0;

/// Product in the infinite-dimensional limit: exactly 1.
inline constexpr double kAsymptoticProduct = 1.0;
}  // namespace zg

/// Analytical quantizer family used by the capacity formulas: block dimension
/// plus the Gersho-Zador product. dimension == 0 denotes the
/// infinite-dimensional limit, which pins the product to 1.
struct QuantizerModel {
  int dimension = 1;
  double mb_product = zg::kScalarGaussProduct;

  static QuantizerModel scalar() { return {1, zg::kScalarGaussProduct}; }
  static QuantizerModel asymptotic() { return {0, zg::kAsymptoticProduct}; }
  static QuantizerModel with_mb_product(double mb) { return {1, mb}; }

  bool is_asymptotic() const { return dimension == 0; }

  void validate() const {
    if (dimension < 0) throw config_error("quantizer dimension must be >= 1 (0 = asymptotic)");
    if (!(mb_product >= 1.0) || !(mb_product <= zg::kScalarGaussProduct))
      throw config_error("mb_product must lie in [1, pi*sqrt(3)/2]");
    if (dimension == 0 && mb_product != zg::kAsymptoticProduct)
      throw config_error("asymptotic quantizer fixes mb_product = 1");
  }
};

/// Full parameterization of one SIMO link with fiber backhaul: transmit
/// power P [W], one-sided noise density N0 [W/Hz], wireless bandwidth W [Hz],
/// complex interface gains a_1..a_r, and fiber rate C_f [bit/s].
struct LinkConfig {
  double power = 0.0;
  double noise_density = 0.0;
  double bandwidth = 0.0;
  std::vector<std::complex<double>> gains;
  double fiber_rate = 0.0;

  int interfaces() const { return static_cast<int>(gains.size()); }

  /// P/(N0 W), the per-unit-gain interface SNR.
  double snr_ratio() const { return power / (noise_density * bandwidth); }

  /// ||a||^2
  double gain_energy() const {
    double e = 0.0;
    for (const auto& g : gains) e += std::norm(g);
    return e;
  }

  /// Quantizer rate implied by the fiber split: l = C_f/(r W) bits per
  /// complex sample. May be < 1; admissibility is checked at report time.
  double quantizer_rate() const {
    return fiber_rate / (static_cast<double>(interfaces()) * bandwidth);
  }

  bool unit_gains() const {
    for (const auto& g : gains)
      if (g != std::complex<double>(1.0, 0.0)) return false;
    return !gains.empty();
  }

  void validate() const {
    if (!(power > 0.0) || !std::isfinite(power))
      throw config_error("power must be a finite value > 0");
    if (!(noise_density > 0.0) || !std::isfinite(noise_density))
      throw config_error("noise_density must be a finite value > 0");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
      throw config_error("bandwidth must be a finite value > 0");
    if (!(fiber_rate > 0.0) || !std::isfinite(fiber_rate))
      throw config_error("fiber_rate must be a finite value > 0");
    if (gains.empty()) throw config_error("gains must be non-empty");
    for (const auto& g : gains)
      if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
        throw config_error("gains must be finite");
  }

  /// Convenience constructor for the all-ones gain vector used throughout
  /// the interface/bandwidth studies.
  static LinkConfig unit(double power, double noise_density, double bandwidth,
                         int interfaces, double fiber_rate) {
    LinkConfig cfg;
    cfg.power = power;
    cfg.noise_density = noise_density;
    cfg.bandwidth = bandwidth;
    cfg.gains.assign(static_cast<std::size_t>(interfaces > 0 ? interfaces : 0),
                     std::complex<double>(1.0, 0.0));
    cfg.fiber_rate = fiber_rate;
    return cfg;
  }
};

/// One capacity evaluation: the wireless upper bound, the quantize-and-forward
/// penalty, and the resulting achievable-rate lower bound (clamped at 0).
struct CapacityReport {
  double upper_bound = 0.0;     // bit/s
  double phi = 0.0;             // bit/s, penalty of quantize-and-forward
  double lower_bound = 0.0;     // bit/s, max(0, upper_bound - phi)
  double quantizer_rate = 0.0;  // bits per complex sample, l = C_f/(r W)
  std::vector<double> per_interface_snr;  // |a_i|^2 P/(N0 W)
  bool clamped = false;  // true when the formal lower bound was negative
};

}  // namespace fawna
