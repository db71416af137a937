#ifndef PDC_TOOLS_CONFIG_HPP
#define PDC_TOOLS_CONFIG_HPP

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdc::cli {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Spacing { linear, log, random };

struct GridSpec {
  double min = 0.0;
  std::optional<double> max;  // default depends on the experiment and alpha0
  int points = 400;
  Spacing spacing = Spacing::linear;
};

/// Experiments: fig1 fig2 fig3 fig4 fig5 fig8 fig9 fig10, plus the single-purpose
/// runs simulate, cumulant, analytic, witness.
struct ExperimentConfig {
  std::string experiment = "fig1";
  std::vector<double> alpha2 = {100.0};
  GridSpec tau;
  double delta = 0.01;
  std::vector<double> deltas = {0.25, 0.1, 0.01};
  std::vector<int> orders = {1, 2, 3, 4};
  double theta = std::numbers::pi / 4;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::vector<double> times;  // sample times for photon statistics
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool svg = false;
  bool long_running = false;  // admits alpha0^2 above kDeskLimit
};

inline constexpr double kDeskLimit = 5000.0;

const std::vector<std::string>& experiment_ids();

json to_json(const ExperimentConfig& c);
/// Reads keys present in `j` on top of `base`; unknown keys are an error.
/// "experiment" may be a list, producing one config per entry.
std::vector<ExperimentConfig> configs_from_json(const json& j, const ExperimentConfig& base = {});
std::vector<ExperimentConfig> load_configs(const std::string& path, const ExperimentConfig& base = {});

/// Throws ConfigError describing the first problem.
void validate(const ExperimentConfig& c);

/// FNV-1a of the canonical JSON of everything that affects results.
std::string config_hash(const ExperimentConfig& c);
std::string fnv1a_hex(const std::string& bytes);

/// The tau grid for one alpha0; `default_max` replaces an unset grid maximum.
std::vector<double> make_grid(const GridSpec& g, double default_max, std::uint64_t seed);

}  // namespace pdc::cli

#endif  // PDC_TOOLS_CONFIG_HPP
