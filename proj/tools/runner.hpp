#ifndef PDC_TOOLS_RUNNER_HPP
#define PDC_TOOLS_RUNNER_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace pdc::cli {

struct OutputFile {
  std::string name;  // relative to the experiment directory
  std::string content;
  std::optional<PlotOptions> plot;  // rendered to <name>.svg when plots are requested
};

struct ExperimentResult {
  std::string experiment;
  std::vector<OutputFile> files;
  json summary;  // deterministic; timings live in the manifest
  std::vector<std::pair<std::string, double>> timings;
};

/// Runs one validated config in memory.
ExperimentResult run_experiment(const ExperimentConfig& c);

struct RunReport {
  int failures = 0;
  json manifest;
};

/// Validates every config, then runs each in turn. Outputs go to out_dir/<experiment>/,
/// followed by out_dir/manifest.json. A failing experiment is recorded and the rest still run.
RunReport execute(const std::vector<ExperimentConfig>& configs, const std::string& out_dir, std::ostream& log);

}  // namespace pdc::cli

#endif  // PDC_TOOLS_RUNNER_HPP
