#pragma once

#include <string>

#include <json.hpp>

#include "fawna/link_sim.hpp"
#include "fawna/optimizer.hpp"
#include "fawna/types.hpp"

namespace fawna {

// JSON forms keep every numeric field at full round-trip precision. CSV forms
// use 9 significant digits, comma separators, LF line endings.

nlohmann::ordered_json capacity_json(const CapacityReport& rep);
nlohmann::ordered_json sweep_json(const SweepTable& table);
nlohmann::ordered_json optimum_json(const OptimumResult& opt);
nlohmann::ordered_json sim_json(const SimReport& rep);

// field,value rows covering the bounds, the penalty, the quantizer rate and
// the per-interface SNR in linear and dB form.
std::string capacity_csv(const CapacityReport& rep);

// variable,value,upper_bound_bps,phi_bps,lower_bound_bps,quantizer_rate_bits,
// admissible; one row per sweep point.
std::string sweep_csv(const SweepTable& table);

// field,value summary of the optimum (variable, argmax, value_bps). The
// search profile is carried by the JSON form only; use the sweep command for
// a plot-ready profile table.
std::string optimum_csv(const OptimumResult& opt);

}  // namespace fawna
