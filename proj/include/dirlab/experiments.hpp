#pragma once

// The experiment battery E1..E10. Each experiment computes its numbers with
// the library modules and records its assertions in a Report.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirlab/parallel.hpp"
#include "dirlab/report.hpp"

namespace dirlab::replicate {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string id;  // "E1" .. "E10"
  double alpha = 0.5;
  double p = 1.0;
  double q = 2.0;
  double epsilon = 0.25;
  double sigma = 1.0;
  std::uint64_t seed = 20240607;
  int probe_radii = 12;
  double rel_tol = 1e-10;
  int scan_level = 2;        // E7: ratio-scan grid level (compared with level + 1)
  long mc_samples = 100000;  // E7: samples per ARS point
  ExecPolicy policy = default_policy();

  /// Throws ConfigError when a parameter is outside the experiment's range.
  void validate() const;
};

const std::vector<std::string>& experiment_ids();

/// The configuration each experiment runs with by default.
ExperimentConfig default_config(const std::string& id);

Report run_experiment(const ExperimentConfig& cfg);

}  // namespace dirlab::replicate
