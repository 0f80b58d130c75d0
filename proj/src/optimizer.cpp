#include "fawna/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fawna/capacity.hpp"

namespace fawna {

namespace {

constexpr int kCoarsePoints = 512;
constexpr double kRateCap = 1e4;      // lower scan edge is C_f/(r * kRateCap)
constexpr double kGoldenTol = 1e-4;

SweepRow evaluate_row(double value, const LinkConfig& cfg,
                      const QuantizerModel& q) {
  SweepRow row;
  row.value = value;
  try {
    row.report = capacity_lower_bound(cfg, q);
  } catch (const admissibility_error&) {
    row.admissible = false;
    row.report.upper_bound = wireless_capacity(cfg);
    row.report.quantizer_rate = cfg.quantizer_rate();
    row.report.phi = std::numeric_limits<double>::quiet_NaN();
    row.report.lower_bound = std::numeric_limits<double>::quiet_NaN();
    const double rho = cfg.snr_ratio();
    row.report.per_interface_snr.reserve(cfg.gains.size());
    for (const auto& g : cfg.gains)
      row.report.per_interface_snr.push_back(std::norm(g) * rho);
  }
  return row;
}

}  // namespace

OptimumResult optimal_interfaces(double power, double noise_density,
                                 double bandwidth, double fiber_rate,
                                 const QuantizerModel& q) {
  q.validate();
  LinkConfig::unit(power, noise_density, bandwidth, 1, fiber_rate).validate();

  const int r_max = static_cast<int>(std::floor(fiber_rate / bandwidth));
  if (r_max < 1)
    throw admissibility_error(
        "bandwidth exceeds the fiber rate; no interface count is feasible", 0,
        fiber_rate);

  OptimumResult best;
  best.value = -std::numeric_limits<double>::infinity();
  best.profile.variable = "interfaces";
  best.profile.rows.reserve(static_cast<std::size_t>(r_max));
  for (int r = 1; r <= r_max; ++r) {
    const LinkConfig cfg =
        LinkConfig::unit(power, noise_density, bandwidth, r, fiber_rate);
    SweepRow row = evaluate_row(static_cast<double>(r), cfg, q);
    if (row.admissible && row.report.lower_bound > best.value) {
      best.value = row.report.lower_bound;
      best.argmax = static_cast<double>(r);
    }
    best.profile.rows.push_back(std::move(row));
  }
  return best;
}

OptimumResult optimal_bandwidth(double power, double noise_density,
                                int interfaces, double fiber_rate,
                                const QuantizerModel& q) {
  q.validate();
  if (interfaces < 1) throw config_error("interfaces must be >= 1");
  const double w_hi = fiber_rate / interfaces;
  const double w_lo = w_hi / kRateCap;
  LinkConfig::unit(power, noise_density, w_hi, interfaces, fiber_rate)
      .validate();
  if (!(w_lo < w_hi))
    throw admissibility_error("bandwidth search interval is degenerate");

  const auto lower_bound_at = [&](double w) {
    const LinkConfig cfg =
        LinkConfig::unit(power, noise_density, w, interfaces, fiber_rate);
    try {
      return capacity_lower_bound(cfg, q).lower_bound;
    } catch (const admissibility_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  OptimumResult best;
  best.profile.variable = "bandwidth";
  best.profile.rows.reserve(kCoarsePoints);
  const double ratio = w_hi / w_lo;
  int best_idx = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kCoarsePoints; ++k) {
    const double w =
        w_lo * std::pow(ratio, static_cast<double>(k) / (kCoarsePoints - 1));
    const LinkConfig cfg =
        LinkConfig::unit(power, noise_density, w, interfaces, fiber_rate);
    SweepRow row = evaluate_row(w, cfg, q);
    if (row.admissible && row.report.lower_bound > best_val) {
      best_val = row.report.lower_bound;
      best_idx = k;
    }
    best.profile.rows.push_back(std::move(row));
  }

  double a = best.profile.rows[static_cast<std::size_t>(std::max(0, best_idx - 1))].value;
  double b = best.profile.rows[static_cast<std::size_t>(
                                   std::min(kCoarsePoints - 1, best_idx + 1))]
                 .value;
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = lower_bound_at(c);
  double fd = lower_bound_at(d);
  while (b - a > kGoldenTol * b) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = lower_bound_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = lower_bound_at(d);
    }
  }
  const double w_star = 0.5 * (a + b);
  const double f_star = lower_bound_at(w_star);

  best.argmax = w_star;
  best.value = f_star;
  if (best_val > f_star) {
    best.argmax = best.profile.rows[static_cast<std::size_t>(best_idx)].value;
    best.value = best_val;
  }
  return best;
}

SweepTable sweep(const std::string& variable, double lo, double hi, int points,
                 Spacing spacing, const LinkConfig& base,
                 const QuantizerModel& q) {
  q.validate();
  const bool known = variable == "fiber_rate" || variable == "interfaces" ||
                     variable == "bandwidth" || variable == "power";
  if (!known) throw config_error("unknown sweep variable: " + variable);
  if (points < 1) throw config_error("sweep needs at least one point");
  if (points > 1 && !(lo < hi))
    throw config_error("sweep range needs lo < hi");
  if (spacing == Spacing::logarithmic && !(lo > 0.0))
    throw config_error("logarithmic spacing needs lo > 0");

  SweepTable table;
  table.variable = variable;
  table.rows.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0
                                 : static_cast<double>(k) / (points - 1);
    double v = spacing == Spacing::linear ? lo + (hi - lo) * t
                                          : lo * std::pow(hi / lo, t);
    LinkConfig cfg = base;
    if (variable == "fiber_rate") {
      cfg.fiber_rate = v;
    } else if (variable == "bandwidth") {
      cfg.bandwidth = v;
    } else if (variable == "power") {
      cfg.power = v;
    } else {
      const int r = static_cast<int>(std::lround(v));
      if (r < 1) throw config_error("interfaces sweep values must round to >= 1");
      v = static_cast<double>(r);
      cfg.gains.assign(static_cast<std::size_t>(r),
                       std::complex<double>(1.0, 0.0));
    }
    table.rows.push_back(evaluate_row(v, cfg, q));
  }
  return table;
}

}  // namespace fawna
