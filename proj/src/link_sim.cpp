#include "fawna/link_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "fawna/capacity.hpp"
#include "fawna/rng.hpp"

namespace fawna {

namespace {

constexpr int kBatches = 64;
constexpr int kBootstrapResamples = 200;
constexpr std::uint64_t kTrainingStreamBase = 1'000'000;
constexpr std::uint64_t kBootstrapStream = 987'654'321;

using cd = std::complex<double>;

// Raw sums over one batch; merging batches is plain summation.
struct BatchStats {
  std::int64_t n = 0;
  double sum_xx = 0.0;            // sum |x|^2
  std::vector<cd> sum_zx;         // sum z_i conj(x)
  std::vector<cd> sum_zz;         // lower triangle of sum z_i conj(z_j), j <= i
  std::vector<cd> sum_q;          // per interface
  std::vector<cd> sum_zq;         // sum z_i conj(q_i)
  std::vector<cd> sum_yqd;        // sum y_i conj(q_i) + |q_i|^2
  std::vector<double> sum_q2, sum_zq_abs2, sum_yqd_abs2, sum_y2, sum_z2;

  explicit BatchStats(int r)
      : sum_zx(r),
        sum_zz(static_cast<std::size_t>(r) * r),
        sum_q(r),
        sum_zq(r),
        sum_yqd(r),
        sum_q2(r),
        sum_zq_abs2(r),
        sum_yqd_abs2(r),
        sum_y2(r),
        sum_z2(r) {}

  void add(const BatchStats& o) {
    n += o.n;
    sum_xx += o.sum_xx;
    for (std::size_t i = 0; i < sum_zx.size(); ++i) sum_zx[i] += o.sum_zx[i];
    for (std::size_t i = 0; i < sum_zz.size(); ++i) sum_zz[i] += o.sum_zz[i];
    for (std::size_t i = 0; i < sum_q.size(); ++i) {
      sum_q[i] += o.sum_q[i];
      sum_zq[i] += o.sum_zq[i];
      sum_yqd[i] += o.sum_yqd[i];
      sum_q2[i] += o.sum_q2[i];
      sum_zq_abs2[i] += o.sum_zq_abs2[i];
      sum_yqd_abs2[i] += o.sum_yqd_abs2[i];
      sum_y2[i] += o.sum_y2[i];
      sum_z2[i] += o.sum_z2[i];
    }
  }
};

BatchStats run_batch(const SimRun& run, int batch, std::int64_t trials) {
  const int r = run.cfg.interfaces();
  BatchStats st(r);
  StreamRng rng(run.seed, static_cast<std::uint64_t>(batch));

  const double symbol_power = run.cfg.power / run.cfg.bandwidth;
  const double noise_power = run.cfg.noise_density;
  const auto& gains = run.cfg.gains;

  std::vector<cd> z(r);
  st.n = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    const cd x = rng.complex_normal(symbol_power);
    st.sum_xx += std::norm(x);
    for (int i = 0; i < r; ++i) {
      const cd y = gains[static_cast<std::size_t>(i)] * x +
                   rng.complex_normal(noise_power);
      const cd zi = run.bypass_quantizers
                        ? y
                        : run.quantizers[static_cast<std::size_t>(i)].quantize(y);
      z[static_cast<std::size_t>(i)] = zi;
      const cd q = zi - y;
      const cd zq = zi * std::conj(q);
      const cd yqd = y * std::conj(q) + std::norm(q);
      st.sum_q[static_cast<std::size_t>(i)] += q;
      st.sum_zq[static_cast<std::size_t>(i)] += zq;
      st.sum_yqd[static_cast<std::size_t>(i)] += yqd;
      st.sum_q2[static_cast<std::size_t>(i)] += std::norm(q);
      st.sum_zq_abs2[static_cast<std::size_t>(i)] += std::norm(zq);
      st.sum_yqd_abs2[static_cast<std::size_t>(i)] += std::norm(yqd);
      st.sum_y2[static_cast<std::size_t>(i)] += std::norm(y);
      st.sum_z2[static_cast<std::size_t>(i)] += std::norm(zi);
      st.sum_zx[static_cast<std::size_t>(i)] += zi * std::conj(x);
    }
    for (int i = 0; i < r; ++i)
      for (int j = 0; j <= i; ++j)
        st.sum_zz[static_cast<std::size_t>(i) * r + j] +=
            z[static_cast<std::size_t>(i)] * std::conj(z[static_cast<std::size_t>(j)]);
  }
  return st;
}

// In-place Cholesky solve of R v = p for Hermitian positive definite R
// (lower triangle supplied row-major). Returns p^H R^-1 p = ||L^-1 p||^2.
double quadratic_form(std::vector<cd> lower, std::vector<cd> p, int r) {
  for (int j = 0; j < r; ++j) {
    double d = lower[static_cast<std::size_t>(j) * r + j].real();
    for (int k = 0; k < j; ++k)
      d -= std::norm(lower[static_cast<std::size_t>(j) * r + k]);
    if (!(d > 0.0))
      throw numerics_error("empirical covariance is not positive definite");
    const double ljj = std::sqrt(d);
    lower[static_cast<std::size_t>(j) * r + j] = ljj;
    for (int i = j + 1; i < r; ++i) {
      cd v = lower[static_cast<std::size_t>(i) * r + j];
      for (int k = 0; k < j; ++k)
        v -= lower[static_cast<std::size_t>(i) * r + k] *
             std::conj(lower[static_cast<std::size_t>(j) * r + k]);
      lower[static_cast<std::size_t>(i) * r + j] = v / ljj;
    }
  }
  // Forward substitution L w = p.
  double norm2 = 0.0;
  for (int i = 0; i < r; ++i) {
    cd v = p[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k)
      v -= lower[static_cast<std::size_t>(i) * r + k] * p[static_cast<std::size_t>(k)];
    v /= lower[static_cast<std::size_t>(i) * r + i].real();
    p[static_cast<std::size_t>(i)] = v;
    norm2 += std::norm(v);
  }
  return norm2;
}

// W log2(1 + SINR) from merged raw sums.
double rate_from_stats(const BatchStats& st, const LinkConfig& cfg) {
  const int r = cfg.interfaces();
  const double n = static_cast<double>(st.n);
  std::vector<cd> cov(st.sum_zz.size());
  for (std::size_t i = 0; i < cov.size(); ++i) cov[i] = st.sum_zz[i] / n;
  std::vector<cd> p(st.sum_zx.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = st.sum_zx[i] / n;
  const double ex2 = st.sum_xx / n;

  const double signal = quadratic_form(std::move(cov), std::move(p), r);
  const double mmse = ex2 - signal;
  if (!(mmse > 0.0))
    throw numerics_error("MMSE estimate collapsed; statistics degenerate");
  const double sinr = signal / mmse;
  return cfg.bandwidth * std::log1p(sinr) * std::numbers::log2e;
}

std::vector<BatchStats> accumulate_batches(const SimRun& run) {
  const int r = run.cfg.interfaces();
  std::vector<std::int64_t> batch_trials(kBatches, run.trials / kBatches);
  for (std::int64_t i = 0; i < run.trials % kBatches; ++i)
    ++batch_trials[static_cast<std::size_t>(i)];

  std::vector<BatchStats> partials(kBatches, BatchStats(r));
  const int workers = std::max(1, std::min(run.threads, kBatches));
  if (workers == 1) {
    for (int b = 0; b < kBatches; ++b)
      partials[static_cast<std::size_t>(b)] =
          run_batch(run, b, batch_trials[static_cast<std::size_t>(b)]);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (;;) {
        const int b = next.fetch_add(1);
        if (b >= kBatches) return;
        partials[static_cast<std::size_t>(b)] =
            run_batch(run, b, batch_trials[static_cast<std::size_t>(b)]);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return partials;
}

void validate_run(const SimRun& run) {
  run.cfg.validate();
  if (run.trials < 10'000)
    throw admissibility_error("simulation needs trials >= 1e4");
  if (!run.bypass_quantizers &&
      run.quantizers.size() != static_cast<std::size_t>(run.cfg.interfaces()))
    throw config_error("one trained quantizer per interface is required");
  if (run.threads < 1) throw config_error("threads must be >= 1");
}

}  // namespace

SimRun prepare_sim_run(const LinkConfig& cfg, std::int64_t trials,
                       std::uint64_t seed, int threads) {
  cfg.validate();
  if (trials < 10'000)
    throw admissibility_error("simulation needs trials >= 1e4");

  const double rate = cfg.quantizer_rate();
  const int bits = static_cast<int>(std::floor(rate / 2.0));
  if (bits < 1)
    throw admissibility_error(
        "realized quantizer rate would be below 2 bits per complex sample; "
        "raise fiber_rate or lower bandwidth/interfaces",
        static_cast<int>(std::floor(cfg.fiber_rate / (2.0 * cfg.bandwidth))),
        cfg.fiber_rate / (2.0 * cfg.interfaces()));

  SimRun run;
  run.cfg = cfg;
  run.trials = trials;
  run.seed = seed;
  run.threads = threads;
  const int capped_bits = std::min(bits, 12);
  const double symbol_power = cfg.power / cfg.bandwidth;
  run.quantizers.reserve(cfg.gains.size());
  for (std::size_t i = 0; i < cfg.gains.size(); ++i) {
    const double input_power =
        cfg.noise_density + std::norm(cfg.gains[i]) * symbol_power;
    run.quantizers.push_back(train_gaussian_quantizer(
        capped_bits, 0.5 * input_power, seed + kTrainingStreamBase + i));
  }
  return run;
}

SimReport simulate_link(const SimRun& run) {
  validate_run(run);
  const int r = run.cfg.interfaces();

  const auto partials = accumulate_batches(run);
  BatchStats total(r);
  for (const auto& part : partials) total.add(part);

  SimReport rep;
  rep.trials = run.trials;
  rep.seed = run.seed;
  rep.quantizer_rate = run.cfg.quantizer_rate();
  rep.effective_l =
      run.bypass_quantizers
          ? std::numeric_limits<double>::infinity()
          : 2.0 * run.quantizers.front().bits_per_real_dim;
  rep.empirical_rate = rate_from_stats(total, run.cfg);
  rep.upper_bound = wireless_capacity(run.cfg);

  // Block bootstrap over the batch partials for the rate's standard error.
  {
    StreamRng boot(run.seed, kBootstrapStream);
    double sum = 0.0, sum2 = 0.0;
    int kept = 0;
    for (int b = 0; b < kBootstrapResamples; ++b) {
      BatchStats resample(r);
      for (int k = 0; k < kBatches; ++k) {
        const auto pick = static_cast<std::size_t>(boot.uniform() * kBatches);
        resample.add(partials[std::min(pick, std::size_t{kBatches - 1})]);
      }
      try {
        const double rate = rate_from_stats(resample, run.cfg);
        sum += rate;
        sum2 += rate * rate;
        ++kept;
      } catch (const numerics_error&) {
        // Degenerate resample; skip it.
      }
    }
    if (kept > 1) {
      const double mean = sum / kept;
      rep.rate_std_error =
          std::sqrt(std::max(0.0, (sum2 / kept - mean * mean) * kept / (kept - 1)));
    }
  }

  // Analytical bounds from the scalar-quantizer model, at the analytic rate
  // and at the realized one.
  const QuantizerModel scalar = QuantizerModel::scalar();
  const double penalty_analytic =
      run.cfg.unit_gains()
          ? capacity_penalty_unit_gain(run.cfg, scalar, rep.quantizer_rate)
          : capacity_penalty(run.cfg, scalar, rep.quantizer_rate);
  rep.analytical_lower_bound = std::max(0.0, rep.upper_bound - penalty_analytic);
  if (run.bypass_quantizers) {
    rep.analytical_lower_bound_effective = rep.upper_bound;
  } else {
    const double penalty_eff =
        run.cfg.unit_gains()
            ? capacity_penalty_unit_gain(run.cfg, scalar, rep.effective_l)
            : capacity_penalty(run.cfg, scalar, rep.effective_l);
    rep.analytical_lower_bound_effective =
        std::max(0.0, rep.upper_bound - penalty_eff);
  }

  const double n = static_cast<double>(total.n);
  const double rho = run.cfg.snr_ratio();
  const double symbol_power = run.cfg.power / run.cfg.bandwidth;
  rep.interfaces.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    auto& d = rep.interfaces[static_cast<std::size_t>(i)];
    const double gain2 = std::norm(run.cfg.gains[static_cast<std::size_t>(i)]);
    d.snr_linear = gain2 * rho;
    d.input_power_expected = run.cfg.noise_density + gain2 * symbol_power;
    d.distortion_empirical = total.sum_q2[static_cast<std::size_t>(i)] / n;
    d.distortion_predicted =
        run.bypass_quantizers
            ? 0.0
            : distortion_rate(d.input_power_expected, scalar, rep.effective_l);
    MomentReport& m = d.moments;
    m.trials = total.n;
    m.mean_q = total.sum_q[static_cast<std::size_t>(i)] / n;
    m.mean_zq = total.sum_zq[static_cast<std::size_t>(i)] / n;
    m.mean_yq_plus_d = total.sum_yqd[static_cast<std::size_t>(i)] / n;
    m.mean_abs_q2 = total.sum_q2[static_cast<std::size_t>(i)] / n;
    m.mean_abs_y2 = total.sum_y2[static_cast<std::size_t>(i)] / n;
    m.mean_abs_z2 = total.sum_z2[static_cast<std::size_t>(i)] / n;
    m.se_mean_q =
        std::sqrt(std::max(0.0, m.mean_abs_q2 - std::norm(m.mean_q)) / n);
    m.se_mean_zq = std::sqrt(
        std::max(0.0, total.sum_zq_abs2[static_cast<std::size_t>(i)] / n -
                          std::norm(m.mean_zq)) /
        n);
    m.se_mean_yq_plus_d = std::sqrt(
        std::max(0.0, total.sum_yqd_abs2[static_cast<std::size_t>(i)] / n -
                          std::norm(m.mean_yq_plus_d)) /
        n);
  }
  return rep;
}

std::vector<double> empirical_distortion_vector(const SimRun& run) {
  validate_run(run);
  const auto partials = accumulate_batches(run);
  BatchStats total(run.cfg.interfaces());
  for (const auto& part : partials) total.add(part);
  std::vector<double> out(total.sum_q2.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = total.sum_q2[i] / static_cast<double>(total.n);
  return out;
}

}  // namespace fawna
