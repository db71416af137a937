#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"
#include "pdc/version.hpp"

namespace {

using namespace pdc::cli;

struct Flags {
  std::string config_file, out;
  std::vector<std::string> experiments;
  std::vector<double> alpha2, deltas, times;
  std::vector<int> orders;
  double tau_max = 0, tau_min = 0, delta = 0, theta = 0, rtol = 0, atol = 0;
  int points = 0, jobs = 0;
  std::uint64_t seed = 0;
  std::string spacing;
  bool svg = false, long_running = false, dry_run = false;
  std::map<std::string, CLI::Option*> opt;

  bool given(const std::string& name) const {
    auto it = opt.find(name);
    return it != opt.end() && it->second->count() > 0;
  }
};

void add_flags(CLI::App* app, Flags& f, bool sweep) {
  f.opt["config"] = app->add_option("--config", f.config_file, "JSON config file")->check(CLI::ExistingFile);
  f.opt["out"] = app->add_option("--out", f.out, "Output directory (default $PDC_OUT_DIR, else ./pdc_out)");
  f.opt["alpha2"] = app->add_option("--alpha2", f.alpha2, "Initial pump populations alpha0^2")->delimiter(',');
  f.opt["tau-max"] = app->add_option("--tau-max", f.tau_max, "End of the tau grid");
  f.opt["tau-min"] = app->add_option("--tau-min", f.tau_min, "Start of the tau grid");
  f.opt["points"] = app->add_option("--points", f.points, "Number of tau grid points");
  f.opt["spacing"] = app->add_option("--spacing", f.spacing, "Grid spacing")->check(CLI::IsMember({"linear", "log", "random"}));
  f.opt["order"] = app->add_option("--order", f.orders, "Cumulant orders")->delimiter(',');
  f.opt["delta"] = app->add_option("--delta", f.delta, "Relative threshold");
  f.opt["deltas"] = app->add_option("--deltas", f.deltas, "Depletion fractions (fig2)")->delimiter(',');
  f.opt["theta"] = app->add_option("--theta", f.theta, "Witness mixing angle");
  f.opt["times"] = app->add_option("--times", f.times, "Sample times for photon statistics (fig3)")->delimiter(',');
  f.opt["rtol"] = app->add_option("--rtol", f.rtol, "ODE relative tolerance");
  f.opt["atol"] = app->add_option("--atol", f.atol, "ODE absolute tolerance");
  f.opt["seed"] = app->add_option("--seed", f.seed, "Seed for random grids");
  f.opt["jobs"] = app->add_option("--jobs", f.jobs, "Worker threads (0: all cores)");
  f.opt["svg"] = app->add_flag("--svg", f.svg, "Also render SVG plots from the CSVs");
  f.opt["long"] = app->add_flag("--long", f.long_running, "Allow alpha0^2 beyond the desk-scale limit");
  f.opt["dry-run"] = app->add_flag("--dry-run", f.dry_run, "Print the resolved config and exit");
  if (sweep)
    f.opt["experiment"] =
        app->add_option("--experiment", f.experiments, "fig1 fig2 fig3 fig4 fig5 fig8 fig9 fig10")->delimiter(',');
}

void apply_flags(ExperimentConfig& c, const Flags& f) {
  if (f.given("out")) c.out = f.out;
  if (f.given("alpha2")) c.alpha2 = f.alpha2;
  if (f.given("tau-max")) c.tau.max = f.tau_max;
  if (f.given("tau-min")) c.tau.min = f.tau_min;
  if (f.given("points")) c.tau.points = f.points;
  if (f.given("spacing")) c.tau.spacing = f.spacing == "log" ? Spacing::log : f.spacing == "random" ? Spacing::random : Spacing::linear;
  if (f.given("order")) c.orders = f.orders;
  if (f.given("delta")) c.delta = f.delta;
  if (f.given("deltas")) c.deltas = f.deltas;
  if (f.given("theta")) c.theta = f.theta;
  if (f.given("times")) c.times = f.times;
  if (f.given("rtol")) c.rtol = f.rtol;
  if (f.given("atol")) c.atol = f.atol;
  if (f.given("seed")) c.seed = f.seed;
  if (f.given("jobs")) c.jobs = f.jobs;
  if (f.given("svg")) c.svg = f.svg;
  if (f.given("long")) c.long_running = f.long_running;
}

std::vector<ExperimentConfig> resolve(const std::string& command, const Flags& f) {
  std::vector<ExperimentConfig> configs;
  if (!f.config_file.empty())
    configs = load_configs(f.config_file);
  else
    configs.emplace_back();
  if (command == "sweep") {
    if (f.given("experiment")) {
      const ExperimentConfig base = configs.front();
      configs.clear();
      for (const auto& e : f.experiments) {
        configs.push_back(base);
        configs.back().experiment = e;
      }
    }
  } else {
    const std::string id = command == "compare" ? "fig1" : command;
    configs.resize(1);
    configs.front().experiment = id;
  }
  for (auto& c : configs) {
    apply_flags(c, f);
    if (c.out.empty()) {
      const char* env = std::getenv("PDC_OUT_DIR");
      c.out = env && *env ? env : "pdc_out";
    }
  }
  return configs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trilinear down-conversion toolkit: exact, cumulant and analytic dynamics"};
  app.set_version_flag("--version", pdc::kVersion);
  app.require_subcommand(1);
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"simulate", "Exact sector simulation: standard observables vs tau"},
      {"cumulant", "Truncated moment dynamics for the given orders, plus the generated systems"},
      {"analytic", "Second-order closed form, timescales and short-time series"},
      {"witness", "PPT witnesses w4, w6 and the tripartite margin along the exact dynamics"},
      {"compare", "Exact vs cumulant orders with 1% cumulant times (the fig1 analogue)"},
      {"sweep", "Run the figure-analogue experiments named in the config or by --experiment"}};
  std::map<std::string, Flags> flags;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_flags(sub, flags[cmd.name], std::string(cmd.name) == "sweep");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  const Flags& f = flags.at(command);
  try {
    const auto configs = resolve(command, f);
    for (const auto& c : configs) validate(c);
    if (f.dry_run) {
      for (const auto& c : configs) std::cout << to_json(c).dump(2) << "\n";
      return 0;
    }
    // one output directory per invocation
    const RunReport report = execute(configs, configs.front().out, std::cerr);
    std::cout << report.manifest.dump(2) << "\n";
    return report.failures == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
