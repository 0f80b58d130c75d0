#pragma once

#include <string>
#include <vector>

#include "fawna/types.hpp"

namespace fawna {

enum class Spacing { linear, logarithmic };

// One evaluated point of a parameter sweep. Rows where the per-interface
// quantizer rate falls below one bit per complex sample are kept but marked
// inadmissible; their penalty and lower bound are NaN while the wireless
// upper bound stays meaningful.
struct SweepRow {
  double value = 0.0;
  bool admissible = true;
  CapacityReport report;
};

struct SweepTable {
  std::string variable;  // fiber_rate | interfaces | bandwidth | power
  std::vector<SweepRow> rows;
};

struct OptimumResult {
  double argmax = 0.0;  // interface count or bandwidth in Hz
  double value = 0.0;   // achievable-rate lower bound at the optimum, bits/sec
  SweepTable profile;   // the scan the search was based on
};

// Exhaustive search for the interface count maximizing the lower bound over
// r = 1..floor(fiber_rate / bandwidth), unit gains. Ties break toward the
// smaller count. Throws admissibility_error when no count is feasible.
OptimumResult optimal_interfaces(double power, double noise_density,
                                 double bandwidth, double fiber_rate,
                                 const QuantizerModel& q);

// Bandwidth maximizing the lower bound for a fixed interface count, unit
// gains. Coarse 512-point logarithmic scan of [fiber_rate/(r*1e4),
// fiber_rate/r] followed by golden-section refinement to 1e-4 relative width.
OptimumResult optimal_bandwidth(double power, double noise_density,
                                int interfaces, double fiber_rate,
                                const QuantizerModel& q);

// Evaluates capacity reports along one swept parameter, the others taken from
// `base`. An interfaces sweep replaces the gain vector with unit gains of the
// rounded count. points >= 1; lo < hi required when points > 1.
SweepTable sweep(const std::string& variable, double lo, double hi, int points,
                 Spacing spacing, const LinkConfig& base,
                 const QuantizerModel& q);

}  // namespace fawna
