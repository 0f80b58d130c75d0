#include "fawna/capacity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fawna {

namespace {

void check_rate(double rate_bits) {
  if (std::isnan(rate_bits) || rate_bits < 0.0)
    throw config_error("quantizer rate must be >= 0 bits per complex sample");
}

void check_unit_gains(const LinkConfig& cfg) {
  if (!cfg.unit_gains())
    throw config_error("gains must be exactly all-ones for the unit-gain path");
}

// r rho (1 - psi) / (1 + r rho psi), the argument of the penalty's log1p for
// unit gains, with 1 - psi expanded to mu(1 + rho)/(1 + rho mu) so nothing
// cancels at high rates.
double unit_gain_log_argument(double r, double rho, double mu, double* denom_out) {
  const double psi = (1.0 - mu) / (1.0 + rho * mu);
  const double denom = 1.0 + r * rho * psi;
  if (denom_out) *denom_out = denom;
  const double one_minus_psi = mu * (1.0 + rho) / (1.0 + rho * mu);
  return r * rho * one_minus_psi / denom;
}

}  // namespace

double wireless_capacity(const LinkConfig& cfg) {
  cfg.validate();
  return cfg.bandwidth * std::log2(1.0 + cfg.gain_energy() * cfg.snr_ratio());
}

double snr_retention(const LinkConfig& cfg, const QuantizerModel& q,
                     double rate_bits) {
  cfg.validate();
  q.validate();
  check_rate(rate_bits);
  const double mu = q.mb_product * std::exp2(-rate_bits);
  return (1.0 - mu) / (1.0 + cfg.snr_ratio() * mu);
}

double capacity_penalty(const LinkConfig& cfg, const QuantizerModel& q,
                        double rate_bits) {
  cfg.validate();
  q.validate();
  check_rate(rate_bits);

  const double rho = cfg.snr_ratio();
  const double mu = q.mb_product * std::exp2(-rate_bits);

  // Sherman-Morrison collapse of the (diagonal + rank-one) inverse. The
  // numerator accumulates ||a||^2 rho - cS without subtraction:
  //   ||a||^2 rho - cS = rho mu sum_i |a_i|^2 (1 + rho |a_i|^2) / d_i.
  double s = 0.0;
  double num = 0.0;
  for (const auto& g : cfg.gains) {
    const double e = std::norm(g);
    const double d = 1.0 + rho * mu * e;
    s += e / d;
    num += e * (1.0 + rho * e) / d;
  }
  const double denom = 1.0 + rho * (1.0 - mu) * s;
  if (!(denom > 0.0)) {
    // Quantization too coarse: the effective channel matrix loses positive
    // definiteness and the bound degenerates.
    return std::numeric_limits<double>::infinity();
  }
  const double x = rho * mu * num / denom;
  if (!std::isfinite(x)) throw numerics_error("capacity penalty is not finite");
  return cfg.bandwidth * std::log1p(x) * std::numbers::log2e;
}

double capacity_penalty_unit_gain(const LinkConfig& cfg,
                                  const QuantizerModel& q, double rate_bits) {
  cfg.validate();
  q.validate();
  check_rate(rate_bits);
  check_unit_gains(cfg);

  const double rho = cfg.snr_ratio();
  const double r = static_cast<double>(cfg.interfaces());
  const double mu = q.mb_product * std::exp2(-rate_bits);

  double denom = 0.0;
  const double x = unit_gain_log_argument(r, rho, mu, &denom);
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  if (!std::isfinite(x)) throw numerics_error("capacity penalty is not finite");
  return cfg.bandwidth * std::log1p(x) * std::numbers::log2e;
}

PenaltyEnvelope penalty_decay_envelope(const LinkConfig& cfg,
                                       const QuantizerModel& q,
                                       double rate_bits) {
  cfg.validate();
  q.validate();
  check_rate(rate_bits);
  check_unit_gains(cfg);

  const double rho = cfg.snr_ratio();
  const double r = static_cast<double>(cfg.interfaces());
  const double mu = q.mb_product * std::exp2(-rate_bits);
  const double x = unit_gain_log_argument(r, rho, mu, nullptr);

  PenaltyEnvelope env;
  env.upper = cfg.bandwidth * x * std::numbers::log2e;
  env.lower = env.upper - cfg.bandwidth * std::numbers::log2e * 0.5 * x * x;
  return env;
}

CapacityReport capacity_lower_bound(const LinkConfig& cfg,
                                    const QuantizerModel& q) {
  cfg.validate();
  q.validate();

  const double rate = cfg.quantizer_rate();
  if (rate < 1.0) {
    const int r_max = static_cast<int>(std::floor(cfg.fiber_rate / cfg.bandwidth));
    const double w_max = cfg.fiber_rate / cfg.interfaces();
    std::ostringstream msg;
    msg << "quantizer rate l = " << rate << " is below the floor of 1 bit per "
        << "complex sample; keep interfaces <= " << r_max
        << " or bandwidth <= " << w_max << " Hz";
    throw admissibility_error(msg.str(), r_max, w_max);
  }

  CapacityReport rep;
  rep.quantizer_rate = rate;
  rep.upper_bound = wireless_capacity(cfg);
  rep.phi = cfg.unit_gains() ? capacity_penalty_unit_gain(cfg, q, rate)
                             : capacity_penalty(cfg, q, rate);
  const double formal = rep.upper_bound - rep.phi;
  rep.clamped = !(formal >= 0.0);
  rep.lower_bound = rep.clamped ? 0.0 : formal;

  const double rho = cfg.snr_ratio();
  rep.per_interface_snr.reserve(cfg.gains.size());
  for (const auto& g : cfg.gains) rep.per_interface_snr.push_back(std::norm(g) * rho);
  return rep;
}

}  // namespace fawna
