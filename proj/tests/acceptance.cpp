// Acceptance suite: one line per criterion, exit code = number of failures.
// Tolerances and runtime limits are pinned here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fawna/capacity.hpp"
#include "fawna/cli.hpp"
#include "fawna/link_sim.hpp"
#include "fawna/optimizer.hpp"
#include "fawna/quantizer.hpp"

using namespace fawna;
using nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& on_fail) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += on_fail;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cli_json(const std::vector<std::string>& args, Outcome& o) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (code != 0) {
    o.require(false, "CLI exited with code " + std::to_string(code));
    return json::object();
  }
  return json::parse(out.str(), nullptr, false);
}

LinkConfig random_unit_config(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_r(1, 8);
  std::uniform_real_distribution<double> log_rho(-2.0, 4.0);
  const double bandwidth = 1e6;
  return LinkConfig::unit(std::pow(10.0, log_rho(rng)) * bandwidth, 1.0,
                          bandwidth, pick_r(rng), 1e12);
}

// 1. Interface optimum for P/N0 = 20, 200, 2000 (x1e6): r* = 7, 3, 2.
Outcome criterion1() {
  Outcome o;
  const double ratios[] = {20e6, 200e6, 2000e6};
  const double want[] = {7.0, 3.0, 2.0};
  std::string got = "r*=";
  for (int i = 0; i < 3; ++i) {
    const json j = cli_json({"optimize", "--target", "interfaces",
                             "--power-over-n0", fmt(ratios[i]),
                             "--bandwidth-hz", "5e6", "--fiber-bps", "1e8",
                             "--mb-product", "1", "--format", "json"},
                            o);
    if (!o.ok) return o;
    const double argmax = j["argmax"].get<double>();
    got += (i ? "/" : "") + fmt(argmax);
    o.require(argmax == want[i],
              "argmax " + fmt(argmax) + " != " + fmt(want[i]) +
                  " at P/N0 = " + fmt(ratios[i]));
  }
  if (o.ok) o.detail = got;
  return o;
}

// 2. Bandwidth optimum at C_f = 200 Mb/s, r = 2: W* = 54.5 MHz +- 1 MHz.
Outcome criterion2() {
  Outcome o;
  const json j = cli_json({"optimize", "--target", "bandwidth",
                           "--power-over-n0", "100e6", "--interfaces", "2",
                           "--fiber-bps", "2e8", "--mb-product", "1",
                           "--format", "json"},
                          o);
  if (!o.ok) return o;
  const double w = j["argmax"].get<double>();
  o.require(std::abs(w - 54.5e6) <= 1e6, "W* = " + fmt(w) + " Hz");
  if (o.ok) o.detail = "W* = " + fmt(w) + " Hz";
  return o;
}

// 3. Lower bound non-decreasing in fiber rate; relative gap to the upper
//    bound < 1e-6 at 1 Gb/s (upper ~ 6.9773 Mb/s).
Outcome criterion3() {
  Outcome o;
  std::ostringstream out, err;
  const int code = run_cli({"sweep", "--preset", "fig2"}, out, err);
  o.require(code == 0, "sweep exited with code " + std::to_string(code));
  if (!o.ok) return o;

  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);  // header: variable,value,upper,...,lower,...
  double prev = -1.0, last_upper = 0.0, last_lower = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 7) {
      o.require(false, "bad CSV row: " + line);
      return o;
    }
    const double upper = std::stod(fields[2]);
    const double lower = std::stod(fields[4]);
    o.require(lower >= prev, "lower bound decreased at C_f = " + fields[1]);
    prev = lower;
    last_upper = upper;
    last_lower = lower;
    ++rows;
  }
  o.require(rows == 200, "expected 200 rows, got " + std::to_string(rows));
  o.require(std::abs(last_upper - 6977279.9235) < 1.0,
            "upper bound at 1 Gb/s = " + fmt(last_upper));
  const double gap = (last_upper - last_lower) / last_upper;
  o.require(gap < 1e-6, "relative gap " + fmt(gap));
  if (o.ok) o.detail = "gap at 1 Gb/s = " + fmt(gap);
  return o;
}

// 4. Penalty ratio Phi(l+1)/Phi(l) in [0.45, 0.55] for integer l in [10, 40],
//    and Phi inside its decay envelope at every tested l.
Outcome criterion4() {
  Outcome o;
  const LinkConfig cfg = LinkConfig::unit(25e6, 1.0, 1e6, 5, 1e9);
  const QuantizerModel q = QuantizerModel::with_mb_product(1.0);
  double worst_lo = 1.0, worst_hi = 0.0;
  for (int l = 10; l <= 40; ++l) {
    const double phi = capacity_penalty_unit_gain(cfg, q, l);
    const double next = capacity_penalty_unit_gain(cfg, q, l + 1);
    const double ratio = next / phi;
    worst_lo = std::min(worst_lo, ratio);
    worst_hi = std::max(worst_hi, ratio);
    o.require(ratio >= 0.45 && ratio <= 0.55,
              "ratio " + fmt(ratio) + " at l = " + std::to_string(l));
    const PenaltyEnvelope env = penalty_decay_envelope(cfg, q, l);
    o.require(phi <= env.upper * (1.0 + 1e-12),
              "penalty above envelope at l = " + std::to_string(l));
    o.require(phi >= env.lower - 1e-9 * phi,
              "penalty below envelope at l = " + std::to_string(l));
  }
  if (o.ok)
    o.detail = "ratio range [" + fmt(worst_lo) + ", " + fmt(worst_hi) + "]";
  return o;
}

// 5. General-gain penalty matches the unit-gain closed form within 1e-9
//    relative error on 1000 randomized admissible tuples.
Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> mb(1.0, zg::kScalarGaussProduct);
  std::uniform_real_distribution<double> rate(1.0, 40.0);
  double worst = 0.0;
  int accepted = 0, attempts = 0;
  while (accepted < 1000 && ++attempts < 20000) {
    const LinkConfig cfg = random_unit_config(rng);
    const QuantizerModel q = QuantizerModel::with_mb_product(mb(rng));
    const double l = rate(rng);
    const double special = capacity_penalty_unit_gain(cfg, q, l);
    if (!std::isfinite(special)) continue;  // rate too coarse for this tuple
    ++accepted;
    const double general = capacity_penalty(cfg, q, l);
    const double rel = std::abs(general - special) / std::max(special, 1e-300);
    worst = std::max(worst, rel);
    o.require(rel <= 1e-9, "relative error " + fmt(rel));
  }
  o.require(accepted == 1000, "only " + std::to_string(accepted) + " tuples");
  if (o.ok) o.detail = "worst relative error " + fmt(worst);
  return o;
}

// 6. Lower bound non-decreasing in transmit power; penalty non-decreasing in
//    the quantizer model product over [1, pi*sqrt(3)/2]; 1000 tuples each.
Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(616);
  std::uniform_real_distribution<double> rate(1.0, 40.0);
  std::uniform_real_distribution<double> factor(1.0, 10.0);
  std::uniform_real_distribution<double> mb(1.0, zg::kScalarGaussProduct);
  const QuantizerModel scalar = QuantizerModel::scalar();

  for (int t = 0; t < 1000; ++t) {
    LinkConfig cfg = random_unit_config(rng);
    cfg.fiber_rate = rate(rng) * cfg.interfaces() * cfg.bandwidth;
    const double lb1 = capacity_lower_bound(cfg, scalar).lower_bound;
    cfg.power *= factor(rng);
    const double lb2 = capacity_lower_bound(cfg, scalar).lower_bound;
    o.require(lb2 >= lb1 * (1.0 - 1e-12),
              "lower bound fell with power: " + fmt(lb1) + " -> " + fmt(lb2));
  }
  for (int t = 0; t < 1000; ++t) {
    const LinkConfig cfg = random_unit_config(rng);
    const double l = rate(rng);
    double m1 = mb(rng), m2 = mb(rng);
    if (m1 > m2) std::swap(m1, m2);
    const double p1 =
        capacity_penalty_unit_gain(cfg, QuantizerModel::with_mb_product(m1), l);
    const double p2 =
        capacity_penalty_unit_gain(cfg, QuantizerModel::with_mb_product(m2), l);
    if (std::isinf(p1)) {
      o.require(std::isinf(p2), "penalty left infinity as mb grew");
      continue;
    }
    o.require(p2 >= p1 * (1.0 - 1e-12),
              "penalty fell with mb: " + fmt(p1) + " -> " + fmt(p2));
  }
  return o;
}

// 7. Two-level codebook at +-sqrt(2/pi) within 1e-3; 8-bit held-out
//    distortion within 10% of the high-resolution prediction, 1e6 samples.
Outcome criterion7() {
  Outcome o;
  const double target = 0.7978845608028654;  // sqrt(2/pi)
  const TrainedQuantizer one_bit = train_gaussian_quantizer(1, 1.0, 7);
  o.require(one_bit.codebook.size() == 2, "wrong codebook size");
  const double err_lo = std::abs(one_bit.codebook[0] + target);
  const double err_hi = std::abs(one_bit.codebook[1] - target);
  o.require(err_lo < 1e-3 && err_hi < 1e-3,
            "codeword errors " + fmt(err_lo) + ", " + fmt(err_hi));

  const TrainedQuantizer fine = train_gaussian_quantizer(8, 1.0, 42);
  const double measured = held_out_distortion(fine, 1000000, 7);
  const double predicted =
      distortion_rate(2.0, QuantizerModel::scalar(), 16.0);
  const double rel = std::abs(measured / predicted - 1.0);
  o.require(rel < 0.10, "distortion off prediction by " + fmt(rel));
  if (o.ok)
    o.detail = "codeword error " + fmt(std::max(err_lo, err_hi)) +
               ", distortion ratio " + fmt(measured / predicted);
  return o;
}

// 8. Error-moment identities at l = 16: |E[q]|, |E[z q*]|, |E[y q*]+E[|q|^2]|
//    each below 5 standard errors, 1e6 trials per interface.
Outcome criterion8() {
  Outcome o;
  LinkConfig cfg;
  cfg.power = 25e6;
  cfg.noise_density = 1.0;
  cfg.bandwidth = 1e6;
  cfg.fiber_rate = 48e6;  // l = 16 across three interfaces
  cfg.gains = {{1.0, 0.0}, {0.7, 0.3}, {0.4, -0.2}};

  const SimRun run = prepare_sim_run(cfg, 1000000, 1, 4);
  const SimReport rep = simulate_link(run);
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.interfaces.size(); ++i) {
    const MomentReport& m = rep.interfaces[i].moments;
    const double r1 = std::abs(m.mean_q) / m.se_mean_q;
    const double r2 = std::abs(m.mean_zq) / m.se_mean_zq;
    const double r3 = std::abs(m.mean_yq_plus_d) / m.se_mean_yq_plus_d;
    worst = std::max({worst, r1, r2, r3});
    o.require(r1 < 5.0 && r2 < 5.0 && r3 < 5.0,
              "interface " + std::to_string(i) + " moment ratios " + fmt(r1) +
                  "/" + fmt(r2) + "/" + fmt(r3));
  }
  if (o.ok) o.detail = "worst |mean|/se = " + fmt(worst);
  return o;
}

// 9. Simulated MMSE rate within 5% of the analytical lower bound and at most
//    3 bootstrap standard errors above the upper bound; r in {1, 2, 5},
//    unit gains, l = 16, 1e6 trials each.
Outcome criterion9() {
  Outcome o;
  std::string summary;
  for (int r : {1, 2, 5}) {
    const LinkConfig cfg =
        LinkConfig::unit(25e6, 1.0, 1e6, r, 16.0 * r * 1e6);
    const SimRun run = prepare_sim_run(cfg, 1000000, 0, 4);
    const SimReport rep = simulate_link(run);
    const double rel =
        std::abs(rep.empirical_rate - rep.analytical_lower_bound) /
        rep.analytical_lower_bound;
    o.require(rel < 0.05, "r = " + std::to_string(r) +
                              ": empirical off the lower bound by " + fmt(rel));
    o.require(rep.empirical_rate <=
                  rep.upper_bound + 3.0 * rep.rate_std_error,
              "r = " + std::to_string(r) + ": empirical rate " +
                  fmt(rep.empirical_rate) + " above upper bound " +
                  fmt(rep.upper_bound) + " + 3 x " + fmt(rep.rate_std_error));
    if (!summary.empty()) summary += ", ";
    summary += "r" + std::to_string(r) + ": " + fmt(100.0 * rel) + "%";
  }
  if (o.ok) o.detail = "gaps to the lower bound: " + summary;
  return o;
}

struct Criterion {
  const char* description;
  double limit_seconds;
  Outcome (*fn)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"interface optimum tracks the power budget (expect 7/3/2)", 1.0, criterion1},
      {"bandwidth optimum lands at 54.5 MHz +- 1 MHz", 1.0, criterion2},
      {"lower bound rises with fiber rate and closes the gap at 1 Gb/s", 1.0, criterion3},
      {"penalty halves per quantizer bit inside its decay envelope", 1.0, criterion4},
      {"general-gain penalty matches the unit-gain closed form (1e-9)", 1.0, criterion5},
      {"bound monotone in power; penalty monotone in the model product", 1.0, criterion6},
      {"trained quantizers hit the analytic optimum and predicted distortion", 30.0, criterion7},
      {"quantization-error moment identities hold within 5 standard errors", 60.0, criterion8},
      {"simulated MMSE rate tracks the analytical bounds for r = 1, 2, 5", 120.0, criterion9},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed >= c.limit_seconds) {
      o.ok = false;
      if (!o.detail.empty()) o.detail += "; ";
      o.detail += "over the time limit";
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %d: %s [%.2fs < %.0fs]%s%s\n",
                o.ok ? "PASS" : "FAIL", index, c.description, elapsed,
                c.limit_seconds, o.detail.empty() ? "" : " -- ",
                o.detail.c_str());
  }
  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures;
}
