#include "fawna/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace fawna {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

ordered_json complex_json(const std::complex<double>& z) {
  return ordered_json::array({z.real(), z.imag()});
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

ordered_json row_json(const SweepRow& row) {
  ordered_json j;
  j["value"] = row.value;
  j["admissible"] = row.admissible;
  j["upper_bound_bps"] = row.report.upper_bound;
  j["phi_bps"] = row.report.phi;
  j["lower_bound_bps"] = row.report.lower_bound;
  j["quantizer_rate_bits"] = row.report.quantizer_rate;
  j["clamped"] = row.report.clamped;
  return j;
}

}  // namespace

ordered_json capacity_json(const CapacityReport& rep) {
  ordered_json j;
  j["upper_bound_bps"] = rep.upper_bound;
  j["phi_bps"] = rep.phi;
  j["lower_bound_bps"] = rep.lower_bound;
  j["quantizer_rate_bits"] = rep.quantizer_rate;
  j["clamped"] = rep.clamped;
  auto snr = ordered_json::array();
  for (double s : rep.per_interface_snr)
    snr.push_back(ordered_json{{"linear", s}, {"db", to_db(s)}});
  j["per_interface_snr"] = std::move(snr);
  return j;
}

ordered_json sweep_json(const SweepTable& table) {
  ordered_json j;
  j["variable"] = table.variable;
  auto rows = ordered_json::array();
  for (const auto& row : table.rows) rows.push_back(row_json(row));
  j["rows"] = std::move(rows);
  return j;
}

ordered_json optimum_json(const OptimumResult& opt) {
  ordered_json j;
  j["variable"] = opt.profile.variable;
  j["argmax"] = opt.argmax;
  j["value_bps"] = opt.value;
  j["profile"] = sweep_json(opt.profile);
  return j;
}

ordered_json sim_json(const SimReport& rep) {
  ordered_json j;
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  j["quantizer_rate_bits"] = rep.quantizer_rate;
  j["effective_rate_bits"] = rep.effective_l;
  j["empirical_rate_bps"] = rep.empirical_rate;
  j["rate_std_error_bps"] = rep.rate_std_error;
  j["analytical_lower_bound_bps"] = rep.analytical_lower_bound;
  j["analytical_lower_bound_effective_bps"] =
      rep.analytical_lower_bound_effective;
  j["upper_bound_bps"] = rep.upper_bound;
  auto ifaces = ordered_json::array();
  for (const auto& d : rep.interfaces) {
    ordered_json ji;
    ji["snr_linear"] = d.snr_linear;
    ji["snr_db"] = to_db(d.snr_linear);
    ji["input_power_expected"] = d.input_power_expected;
    ji["distortion_empirical"] = d.distortion_empirical;
    ji["distortion_predicted"] = d.distortion_predicted;
    ordered_json jm;
    jm["trials"] = d.moments.trials;
    jm["mean_q"] = complex_json(d.moments.mean_q);
    jm["se_mean_q"] = d.moments.se_mean_q;
    jm["mean_zq_conj"] = complex_json(d.moments.mean_zq);
    jm["se_mean_zq_conj"] = d.moments.se_mean_zq;
    jm["mean_yq_conj_plus_q2"] = complex_json(d.moments.mean_yq_plus_d);
    jm["se_mean_yq_conj_plus_q2"] = d.moments.se_mean_yq_plus_d;
    jm["mean_abs_q2"] = d.moments.mean_abs_q2;
    jm["mean_abs_y2"] = d.moments.mean_abs_y2;
    jm["mean_abs_z2"] = d.moments.mean_abs_z2;
    ji["moments"] = std::move(jm);
    ifaces.push_back(std::move(ji));
  }
  j["interfaces"] = std::move(ifaces);
  return j;
}

std::string capacity_csv(const CapacityReport& rep) {
  std::string out = "field,value\n";
  out += "upper_bound_bps," + num(rep.upper_bound) + "\n";
  out += "phi_bps," + num(rep.phi) + "\n";
  out += "lower_bound_bps," + num(rep.lower_bound) + "\n";
  out += "quantizer_rate_bits," + num(rep.quantizer_rate) + "\n";
  out += std::string("clamped,") + (rep.clamped ? "1" : "0") + "\n";
  for (std::size_t i = 0; i < rep.per_interface_snr.size(); ++i) {
    const std::string tag = std::to_string(i + 1);
    out += "snr_" + tag + "_linear," + num(rep.per_interface_snr[i]) + "\n";
    out += "snr_" + tag + "_db," + num(to_db(rep.per_interface_snr[i])) + "\n";
  }
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out =
      "variable,value,upper_bound_bps,phi_bps,lower_bound_bps,"
      "quantizer_rate_bits,admissible\n";
  for (const auto& row : table.rows) {
    out += table.variable + "," + num(row.value) + "," +
           num(row.report.upper_bound) + "," + num(row.report.phi) + "," +
           num(row.report.lower_bound) + "," +
           num(row.report.quantizer_rate) + "," +
           (row.admissible ? "1" : "0") + "\n";
  }
  return out;
}

std::string optimum_csv(const OptimumResult& opt) {
  std::string out = "field,value\n";
  out += "variable," + opt.profile.variable + "\n";
  out += "argmax," + num(opt.argmax) + "\n";
  out += "value_bps," + num(opt.value) + "\n";
  return out;
}

}  // namespace fawna
