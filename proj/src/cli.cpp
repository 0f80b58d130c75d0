#include "fawna/cli.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fawna/capacity.hpp"
#include "fawna/link_sim.hpp"
#include "fawna/optimizer.hpp"
#include "fawna/report_io.hpp"
#include "fawna/types.hpp"

namespace fawna {

namespace {

// One value slot per flag, shared by all subcommands; only the chosen
// subcommand parses, so there is no cross-talk. Explicit-given checks go
// through the active subcommand at dispatch time.
struct Flags {
  double ratio = 0.0;
  double power = 0.0;
  double noise = 0.0;
  double bandwidth = 0.0;
  int interfaces = 0;
  double fiber = 0.0;
  double mb = 0.0;
  std::string quantizer;
  std::string gains_path;
  std::string format;
  std::string preset;
  std::string target;
  std::string variable;
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
  std::string spacing = "linear";
  std::uint64_t seed = 0;
  std::int64_t trials = 1'000'000;
  int threads = 1;
};

// True when the user supplied `name` on the active subcommand.
class Given {
 public:
  explicit Given(const CLI::App* sub) : sub_(sub) {}
  bool operator()(const std::string& name) const {
    const CLI::Option* o = sub_->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  }

 private:
  const CLI::App* sub_;
};

void add_link_flags(CLI::App* cmd, Flags& f) {
  CLI::Option* ratio = cmd->add_option(
      "--power-over-n0", f.ratio,
      "Transmit power over noise density P/N0 [1/s]");
  CLI::Option* power = cmd->add_option("--power", f.power, "Transmit power P [W]");
  CLI::Option* noise = cmd->add_option("--noise-density", f.noise,
                                       "One-sided noise density N0 [W/Hz]");
  ratio->excludes(power)->excludes(noise);
  cmd->add_option("--bandwidth-hz", f.bandwidth, "Wireless bandwidth W [Hz]");
  cmd->add_option("--interfaces", f.interfaces,
                  "Number of wireless-optical interfaces r");
  cmd->add_option("--fiber-bps", f.fiber, "Fiber rate C_f [bit/s]");
  CLI::Option* mb = cmd->add_option(
      "--mb-product", f.mb,
      "Gersho-Zador product of the quantizer model, in [1, pi*sqrt(3)/2]");
  CLI::Option* quant =
      cmd->add_option("--quantizer", f.quantizer,
                      "Quantizer model: scalar|asymptotic (default scalar)")
          ->check(CLI::IsMember({"scalar", "asymptotic"}));
  mb->excludes(quant);
  cmd->add_option("--gains", f.gains_path,
                  "File of per-interface complex gains, one 're im' pair per line");
  cmd->add_option("--preset", f.preset,
                  "Parameter bundle for a published study configuration")
      ->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

// Fills parameters the selected preset pins, leaving explicit flags alone.
// Returns true when the preset also pins the Gersho-Zador product at 1 (all
// three studies do) and no explicit quantizer choice overrides it.
bool apply_preset(Flags& f, const Given& given) {
  if (f.preset.empty()) return false;
  const auto set_d = [&](const char* name, double& slot, double v) {
    if (!given(name)) slot = v;
  };
  const auto set_i = [&](const char* name, int& slot, int v) {
    if (!given(name)) slot = v;
  };
  const auto set_s = [&](const char* name, std::string& slot, const char* v) {
    if (!given(name)) slot = v;
  };
  if (f.preset == "fig2") {
    set_d("--power-over-n0", f.ratio, 25e6);
    set_d("--bandwidth-hz", f.bandwidth, 1e6);
    set_i("--interfaces", f.interfaces, 5);
    set_d("--fiber-bps", f.fiber, 1e9);
    set_s("--variable", f.variable, "fiber_rate");
    set_d("--lo", f.lo, 5e6);
    set_d("--hi", f.hi, 1e9);
    set_i("--points", f.points, 200);
    set_s("--spacing", f.spacing, "log");
  } else if (f.preset == "fig3") {
    set_d("--power-over-n0", f.ratio, 20e6);
    set_d("--bandwidth-hz", f.bandwidth, 5e6);
    set_d("--fiber-bps", f.fiber, 1e8);
    set_s("--target", f.target, "interfaces");
    set_s("--variable", f.variable, "interfaces");
    set_d("--lo", f.lo, 1.0);
    set_d("--hi", f.hi, 20.0);
    set_i("--points", f.points, 20);
    set_s("--spacing", f.spacing, "linear");
  } else {  // fig4, enforced by the flag's IsMember check
    set_d("--power-over-n0", f.ratio, 100e6);
    set_i("--interfaces", f.interfaces, 2);
    set_d("--fiber-bps", f.fiber, 2e8);
    set_s("--target", f.target, "bandwidth");
    set_s("--variable", f.variable, "bandwidth");
    set_d("--lo", f.lo, 1e4);
    set_d("--hi", f.hi, 1e8);
    set_i("--points", f.points, 512);
    set_s("--spacing", f.spacing, "log");
  }
  return !given("--mb-product") && !given("--quantizer");
}

QuantizerModel resolve_quantizer(const Flags& f, const Given& given,
                                 bool preset_unit_mb) {
  if (given("--mb-product")) return QuantizerModel::with_mb_product(f.mb);
  if (given("--quantizer"))
    return f.quantizer == "asymptotic" ? QuantizerModel::asymptotic()
                                       : QuantizerModel::scalar();
  if (preset_unit_mb) return QuantizerModel::with_mb_product(1.0);
  return QuantizerModel::scalar();
}

void resolve_power(const Flags& f, const Given& given, double& power,
                   double& noise) {
  if (given("--power-over-n0")) {
    power = f.ratio;
    noise = 1.0;
    return;
  }
  if (given("--power") || given("--noise-density")) {
    if (!(given("--power") && given("--noise-density")))
      throw config_error("--power and --noise-density must be given together");
    power = f.power;
    noise = f.noise;
    return;
  }
  if (f.ratio > 0.0) {  // set by a preset
    power = f.ratio;
    noise = 1.0;
    return;
  }
  throw config_error(
      "provide --power-over-n0, or both --power and --noise-density");
}

std::vector<std::complex<double>> load_gains(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open gains file: " + path);
  std::vector<std::complex<double>> gains;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double re = 0.0, im = 0.0;
    if (!(row >> re)) continue;  // blank or comment-only line
    if (!(row >> im))
      throw config_error("gains file " + path + " line " +
                         std::to_string(lineno) + ": expected 're im'");
    gains.emplace_back(re, im);
  }
  if (gains.empty())
    throw config_error("gains file " + path + " holds no gain pairs");
  return gains;
}

// Builds the link configuration from the resolved flags. `skip` names a
// field a sweep will override, which is then not required here.
LinkConfig build_config(const Flags& f, const Given& given,
                        const std::string& skip = "") {
  LinkConfig cfg;
  resolve_power(f, given, cfg.power, cfg.noise_density);
  if (skip == "power") cfg.power = 1.0;  // placeholder, overridden per row

  if (skip != "bandwidth") {
    if (!(f.bandwidth > 0.0))
      throw config_error("--bandwidth-hz is required (or use a preset)");
    cfg.bandwidth = f.bandwidth;
  }
  if (skip != "fiber_rate") {
    if (!(f.fiber > 0.0))
      throw config_error("--fiber-bps is required (or use a preset)");
    cfg.fiber_rate = f.fiber;
  }
  if (skip != "interfaces") {
    if (given("--gains")) {
      cfg.gains = load_gains(f.gains_path);
      if (given("--interfaces") &&
          f.interfaces != static_cast<int>(cfg.gains.size()))
        throw config_error("--interfaces disagrees with the gains file size");
    } else {
      if (f.interfaces < 1)
        throw config_error("--interfaces is required (or use a preset)");
      cfg.gains.assign(static_cast<std::size_t>(f.interfaces),
                       std::complex<double>(1.0, 0.0));
    }
  }
  return cfg;
}

void emit(std::ostream& out, const std::string& format, const std::string& csv,
          const nlohmann::ordered_json& json) {
  if (format == "json")
    out << json.dump(2) << "\n";
  else
    out << csv;
}

int dispatch(const CLI::App& app, Flags& f, std::ostream& out) {
  const CLI::App* sub = app.get_subcommands().front();
  const Given given(sub);
  const bool unit_mb = apply_preset(f, given);
  const QuantizerModel q = resolve_quantizer(f, given, unit_mb);
  const bool simulate = app.got_subcommand("simulate");
  if (!given("--format")) f.format = simulate ? "json" : "csv";

  if (app.got_subcommand("capacity")) {
    const LinkConfig cfg = build_config(f, given);
    const CapacityReport rep = capacity_lower_bound(cfg, q);
    emit(out, f.format, capacity_csv(rep), capacity_json(rep));
    return 0;
  }

  if (app.got_subcommand("sweep")) {
    if (f.variable.empty())
      throw config_error("--variable is required (or use a preset)");
    if (f.points < 1) throw config_error("--points must be >= 1");
    const LinkConfig base = build_config(f, given, f.variable);
    const Spacing spacing =
        f.spacing == "log" ? Spacing::logarithmic : Spacing::linear;
    const SweepTable table =
        sweep(f.variable, f.lo, f.hi, f.points, spacing, base, q);
    emit(out, f.format, sweep_csv(table), sweep_json(table));
    return 0;
  }

  if (app.got_subcommand("optimize")) {
    double power = 0.0, noise = 0.0;
    resolve_power(f, given, power, noise);
    if (!(f.fiber > 0.0))
      throw config_error("--fiber-bps is required (or use a preset)");
    OptimumResult opt;
    if (f.target == "interfaces") {
      if (!(f.bandwidth > 0.0))
        throw config_error("--bandwidth-hz is required (or use a preset)");
      opt = optimal_interfaces(power, noise, f.bandwidth, f.fiber, q);
    } else if (f.target == "bandwidth") {
      if (f.interfaces < 1)
        throw config_error("--interfaces is required (or use a preset)");
      opt = optimal_bandwidth(power, noise, f.interfaces, f.fiber, q);
    } else {
      throw config_error("--target must be 'interfaces' or 'bandwidth'");
    }
    emit(out, f.format, optimum_csv(opt), optimum_json(opt));
    return 0;
  }

  // simulate, guaranteed by require_subcommand(1)
  if (f.format != "json") throw config_error("simulate emits JSON only");
  const LinkConfig cfg = build_config(f, given);
  const SimRun run = prepare_sim_run(cfg, f.trials, f.seed, f.threads);
  const SimReport rep = simulate_link(run);
  out << sim_json(rep).dump(2) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Capacity analysis and Monte Carlo verification for quantize-and-"
      "forward SIMO links with fiber backhaul"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* capacity = app.add_subcommand(
      "capacity", "Evaluate the capacity bounds for one configuration");
  add_link_flags(capacity, f);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Tabulate the bounds along one swept parameter");
  add_link_flags(sweep_cmd, f);
  sweep_cmd
      ->add_option("--variable", f.variable,
                   "Swept parameter: fiber_rate|interfaces|bandwidth|power")
      ->check(CLI::IsMember({"fiber_rate", "interfaces", "bandwidth", "power"}));
  sweep_cmd->add_option("--lo", f.lo, "Sweep range lower edge");
  sweep_cmd->add_option("--hi", f.hi, "Sweep range upper edge");
  sweep_cmd->add_option("--points", f.points, "Number of sweep points");
  sweep_cmd->add_option("--spacing", f.spacing, "Point spacing: linear|log")
      ->check(CLI::IsMember({"linear", "log"}));

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Search for the optimal interface count or bandwidth");
  add_link_flags(optimize, f);
  optimize
      ->add_option("--target", f.target,
                   "Optimization variable: interfaces|bandwidth")
      ->check(CLI::IsMember({"interfaces", "bandwidth"}));

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo link simulation with trained quantizers");
  add_link_flags(simulate, f);
  simulate->add_option("--seed", f.seed, "Master RNG seed");
  simulate->add_option("--trials", f.trials, "Monte Carlo trials (>= 1e4)");
  simulate->add_option("--threads", f.threads, "Worker threads");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("fawna");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(argv_store.size());
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    return dispatch(app, f, out);
  } catch (const config_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const admissibility_error& e) {
    err << "error: " << e.what() << "\n";
    if (e.max_interfaces() >= 0 && e.max_bandwidth() > 0.0)
      err << "hint: at most " << e.max_interfaces()
          << " interfaces at this bandwidth, or bandwidth at most "
          << e.max_bandwidth() << " Hz at this interface count\n";
    return 3;
  } catch (const numerics_error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace fawna
