#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "pdc/experiments.hpp"

namespace pdc::cli {

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {"fig1", "fig2", "fig3",     "fig4",     "fig5",    "fig8",
                                               "fig9", "fig10", "simulate", "cumulant", "analytic", "witness"};
  return ids;
}

namespace {

const char* spacing_name(Spacing s) {
  switch (s) {
    case Spacing::log: return "log";
    case Spacing::random: return "random";
    default: return "linear";
  }
}

Spacing parse_spacing(const std::string& s) {
  if (s == "linear") return Spacing::linear;
  if (s == "log") return Spacing::log;
  if (s == "random") return Spacing::random;
  throw ConfigError("tau.spacing must be linear, log or random, got '" + s + "'");
}

template <class T>
T read(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

json results_json(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("out");
  j.erase("jobs");
  j.erase("svg");
  return j;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json tau = {{"min", c.tau.min}, {"points", c.tau.points}, {"spacing", spacing_name(c.tau.spacing)}};
  tau["max"] = c.tau.max ? json(*c.tau.max) : json(nullptr);
  return {{"experiment", c.experiment}, {"alpha2", c.alpha2}, {"tau", tau},   {"delta", c.delta},
          {"deltas", c.deltas},         {"orders", c.orders}, {"theta", c.theta}, {"rtol", c.rtol},
          {"atol", c.atol},             {"times", c.times},   {"out", c.out},   {"seed", c.seed},
          {"jobs", c.jobs},             {"svg", c.svg},       {"long_running", c.long_running}};
}

std::vector<ExperimentConfig> configs_from_json(const json& j, const ExperimentConfig& base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"experiment", "alpha2", "tau",   "delta", "deltas", "orders",
                                              "theta",      "rtol",   "atol",  "times", "out",    "seed",
                                              "jobs",       "svg",    "long_running"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig c = base;
  if (j.contains("alpha2")) c.alpha2 = read<std::vector<double>>(j, "alpha2");
  if (j.contains("tau")) {
    const json& t = j.at("tau");
    if (!t.is_object()) throw ConfigError("config key 'tau' must be an object");
    for (const auto& [key, value] : t.items())
      if (key != "min" && key != "max" && key != "points" && key != "spacing")
        throw ConfigError("unknown config key 'tau." + key + "'");
    if (t.contains("min")) c.tau.min = read<double>(t, "min");
    if (t.contains("max")) c.tau.max = t.at("max").is_null() ? std::nullopt : std::optional(read<double>(t, "max"));
    if (t.contains("points")) c.tau.points = read<int>(t, "points");
    if (t.contains("spacing")) c.tau.spacing = parse_spacing(read<std::string>(t, "spacing"));
  }
  if (j.contains("delta")) c.delta = read<double>(j, "delta");
  if (j.contains("deltas")) c.deltas = read<std::vector<double>>(j, "deltas");
  if (j.contains("orders")) c.orders = read<std::vector<int>>(j, "orders");
  if (j.contains("theta")) c.theta = read<double>(j, "theta");
  if (j.contains("rtol")) c.rtol = read<double>(j, "rtol");
  if (j.contains("atol")) c.atol = read<double>(j, "atol");
  if (j.contains("times")) c.times = read<std::vector<double>>(j, "times");
  if (j.contains("out")) c.out = read<std::string>(j, "out");
  if (j.contains("seed")) c.seed = read<std::uint64_t>(j, "seed");
  if (j.contains("jobs")) c.jobs = read<int>(j, "jobs");
  if (j.contains("svg")) c.svg = read<bool>(j, "svg");
  if (j.contains("long_running")) c.long_running = read<bool>(j, "long_running");

  std::vector<ExperimentConfig> out;
  if (j.contains("experiment") && j.at("experiment").is_array()) {
    for (const auto& id : read<std::vector<std::string>>(j, "experiment")) {
      out.push_back(c);
      out.back().experiment = id;
    }
    if (out.empty()) throw ConfigError("config key 'experiment' is an empty list");
  } else {
    if (j.contains("experiment")) c.experiment = read<std::string>(j, "experiment");
    out.push_back(c);
  }
  return out;
}

std::vector<ExperimentConfig> load_configs(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return configs_from_json(j, base);
}

void validate(const ExperimentConfig& c) {
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), c.experiment) == ids.end())
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  if (c.alpha2.empty()) throw ConfigError("alpha2 list is empty");
  for (double a : c.alpha2) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("alpha2 values must be positive and finite");
    if (a > kDeskLimit && !c.long_running)
      throw ConfigError("alpha2 above " + std::to_string(static_cast<int>(kDeskLimit)) +
                        " needs long_running (--long)");
  }
  if (c.tau.points < 2) throw ConfigError("tau.points must be at least 2");
  if (!(c.tau.min >= 0.0)) throw ConfigError("tau.min must be nonnegative");
  if (c.tau.max && !(*c.tau.max > c.tau.min)) throw ConfigError("tau.max must exceed tau.min");
  if (c.tau.spacing == Spacing::log && !(c.tau.min > 0.0)) throw ConfigError("log spacing needs tau.min > 0");
  auto check_delta = [](double d) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("delta values must lie in (0, 1)");
  };
  check_delta(c.delta);
  if (c.experiment == "fig2" && c.deltas.empty()) throw ConfigError("deltas list is empty");
  for (double d : c.deltas) check_delta(d);
  const bool needs_orders = c.experiment == "fig1" || c.experiment == "fig10" || c.experiment == "cumulant";
  if (needs_orders && c.orders.empty()) throw ConfigError("orders list is empty");
  for (int n : c.orders)
    if (n < 1 || n > 5) throw ConfigError("cumulant orders must lie in 1..5");
  if (c.experiment == "fig10" && std::ranges::none_of(c.orders, [](int n) { return n >= 2; }))
    throw ConfigError("fig10 needs an order >= 2 (order 1 has no signal population)");
  if (!(c.rtol > 0.0) || !(c.atol > 0.0)) throw ConfigError("tolerances must be positive");
  if (!std::isfinite(c.theta)) throw ConfigError("theta must be finite");
  for (double t : c.times)
    if (!(t >= 0.0)) throw ConfigError("sample times must be nonnegative");
  const bool sweep = c.experiment == "fig8" || c.experiment == "fig10";
  if (sweep && c.alpha2.size() < 4) throw ConfigError(c.experiment + " fits need at least 4 alpha2 values");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& c) { return fnv1a_hex(results_json(c).dump()); }

std::vector<double> make_grid(const GridSpec& g, double default_max, std::uint64_t seed) {
  const double hi = g.max.value_or(default_max);
  switch (g.spacing) {
    case Spacing::log: return log_grid(g.min, hi, g.points);
    case Spacing::random: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(g.min, hi);
      std::vector<double> t(static_cast<std::size_t>(g.points));
      t.front() = g.min;
      for (std::size_t i = 1; i < t.size(); ++i) t[i] = u(rng);
      std::sort(t.begin(), t.end());
      return t;
    }
    default: return linear_grid(g.min, hi, g.points);
  }
}

}  // namespace pdc::cli
