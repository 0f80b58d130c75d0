#pragma once

#include <cstdint>
#include <vector>

#include "fawna/quantizer.hpp"
#include "fawna/types.hpp"

namespace fawna {

/// One end-to-end Monte Carlo run: Gaussian signaling through the SIMO
/// channel, per-interface quantization, linear-MMSE combining. Trials are
/// split into a fixed number of batches with independent seeded streams;
/// partials merge in batch order, so the result is bit-identical for any
/// thread count.
struct SimRun {
  LinkConfig cfg;
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  std::vector<TrainedQuantizer> quantizers;  // one per interface
  bool bypass_quantizers = false;            // z = y, diagnostic mode
  int threads = 1;
};

/// Trains one scalar quantizer per interface on the known input power
/// N0 + |a_i|^2 P/W and assembles a run. The realized rate is
/// 2*floor(l/2) bits per complex sample, capped at 24; throws
/// admissibility_error when that would fall below 2.
SimRun prepare_sim_run(const LinkConfig& cfg, std::int64_t trials,
                       std::uint64_t seed, int threads = 1);

struct InterfaceDiagnostics {
  double snr_linear = 0.0;
  double distortion_empirical = 0.0;  // measured E|q_i|^2
  double distortion_predicted = 0.0;  // scalar-quantizer prediction at the realized rate
  double input_power_expected = 0.0;  // N0 + |a_i|^2 P/W
  MomentReport moments;
};

struct SimReport {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double quantizer_rate = 0.0;   // analytic l = C_f/(r W)
  double effective_l = 0.0;      // realized bits per complex sample
  double empirical_rate = 0.0;   // W log2(1 + measured MMSE output SINR), bit/s
  double rate_std_error = 0.0;   // bootstrap SE of empirical_rate, bit/s
  double analytical_lower_bound = 0.0;            // at the analytic rate
  double analytical_lower_bound_effective = 0.0;  // at the realized rate
  double upper_bound = 0.0;      // wireless capacity, bit/s
  std::vector<InterfaceDiagnostics> interfaces;
};

/// Runs the Monte Carlo, estimates the linear-MMSE output SINR from the
/// accumulated second-order statistics, and reports the empirical achievable
/// rate next to the analytical bounds (scalar-quantizer model).
SimReport simulate_link(const SimRun& run);

/// Measured E[|q_i|^2] per interface over all trials.
std::vector<double> empirical_distortion_vector(const SimRun& run);

}  // namespace fawna
