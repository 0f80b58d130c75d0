#pragma once

#include "fawna/types.hpp"

namespace fawna {

/// Capacity of the wireless hop, W log2(1 + ||a||^2 P/(N0 W)) bit/s. For a
/// fiber rate no smaller than this, it is also the end-to-end upper bound.
double wireless_capacity(const LinkConfig& cfg);

/// SNR retention factor after quantization at rate_bits per complex sample:
///   (1 - M 2^-l) / (1 + rho M 2^-l),  M = mb_product, rho = P/(N0 W).
/// Tends to 1 as the rate grows; negative once M 2^-l exceeds 1.
double snr_retention(const LinkConfig& cfg, const QuantizerModel& q,
                     double rate_bits);

/// Capacity penalty of quantize-and-forward for an arbitrary gain vector.
/// The defining expression contains the inverse of a (diagonal + rank-one)
/// matrix; the Sherman-Morrison identity reduces it to the scalar sum
///   S = sum_i |a_i|^2 / (1 + rho mu |a_i|^2),   mu = M 2^-l,
/// giving  phi = W [log2(1 + ||a||^2 rho) - log2(1 + rho(1-mu) S)].
/// Returns +infinity when the quantization is so coarse that the second log
/// argument is non-positive (the bound degenerates; callers clamp).
double capacity_penalty(const LinkConfig& cfg, const QuantizerModel& q,
                        double rate_bits);

/// Unit-gain specialization: W log2(1 + r rho) - W log2(1 + r rho psi(l)).
/// Rejects configurations whose gain vector is not exactly all-ones.
double capacity_penalty_unit_gain(const LinkConfig& cfg,
                                  const QuantizerModel& q, double rate_bits);

/// Explicit O(2^-l) / Omega(2^-l) envelope around the unit-gain penalty,
/// obtained from x - x^2/2 <= ln(1+x) <= x. Diagnostic use only.
struct PenaltyEnvelope {
  double upper = 0.0;  // bit/s
  double lower = 0.0;  // bit/s
};
PenaltyEnvelope penalty_decay_envelope(const LinkConfig& cfg,
                                       const QuantizerModel& q,
                                       double rate_bits);

/// Evaluates the achievable-rate lower bound at the maximal admissible
/// quantizer rate l = C_f/(r W) (the penalty decreases in l, so the largest
/// rate is optimal). Throws admissibility_error carrying r_max and W_max
/// hints when l < 1. Negative formal bounds are clamped to 0 and flagged.
CapacityReport capacity_lower_bound(const LinkConfig& cfg,
                                    const QuantizerModel& q);

}  // namespace fawna
