#pragma once

#include <iosfwd>

#include "hrlab/config.hpp"

namespace hrlab {

// Runs the experiment named in the config, writing all artifacts into
// cfg.output_dir.  Returns the process exit code: 0 on success, 3 on
// numerical blow-up, 4 when a hard assertion (dichotomy, Gronwall ceiling,
// Phi monotonicity, probe bound) fails.  Validation problems throw
// ValidationError, which the CLI maps to exit code 2.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace hrlab
