#pragma once

#include <array>
#include <optional>
#include <string>

#include "json.hpp"

#include "hrlab/analysis.hpp"

namespace hrlab {

inline constexpr const char* kVersion = "1.0.0";

// Initial data for field experiments.
struct InitialSpec {
  enum class Kind { Zero, Constant, Random };
  Kind kind = Kind::Zero;
  std::array<double, 3> value{0.0, 0.0, 0.0};  // constant
  double e_norm = 1.0;                         // random: target |g|_E
  double decay = 1.0;                          // random: spectral tilt
};

struct SimulateCfg {
  double t_final = 10.0;
  InitialSpec initial;
  bool dump_states = false;
};

struct OdeCfg {
  double t_final = 1000.0;
  std::array<double, 3> initial{0.0, 0.0, 0.0};
  double spike_threshold = 1.0;
  double quiescent_gap = 20.0;
};

// Shared by the ensemble experiments; also usable inline as the absorption
// phase feeding squeeze/lipschitz/determine.
struct AbsorbCfg {
  int ensemble = 16;
  double horizon = 200.0;
  double tail_fraction = 0.2;
  double initial_norm_min = 0.0;   // |g(0)|_E drawn uniformly in this range
  double initial_norm_max = 100.0;
  double dt = 0.0;                 // 0 = stepper dt
  bool warmup = false;
  double warmup_dt = 1e-4;
  double warmup_duration = 0.5;
  bool dump_tail_states = false;
};

struct SqueezeCfg {
  int pairs = 64;
  double t_star = 1.0;
  int m = 0;                    // 0 = select_m from the Lipschitz constant
  double lipschitz_c = 0.0;     // 0 = estimate C_E(M) from the ensemble
  std::optional<double> delta_threshold;  // unset = theoretical default
  double perturbation = 1e-3;   // |h0 - g0|_H
  int embedding_samples = 10000;
  bool monitor_phi = true;
  bool inject_synthetic_violation = false;
  std::string states_file;      // prior absorb dump; empty = inline phase
  AbsorbCfg absorb{6, 30.0, 0.2, 1.0, 3.0, 0.0, false, 1e-4, 0.5, false};
};

struct LipschitzCfg {
  int pairs = 16;
  double t_final = 1.0;
  double perturbation = 1e-3;
  std::string states_file;
  AbsorbCfg absorb{6, 30.0, 0.2, 1.0, 3.0, 0.0, false, 1e-4, 0.5, false};
};

struct DetermineCfg {
  int pairs = 16;
  int m = 8;
  double horizon = 40.0;
  double tol_p = 1e-6;
  double tol_full = 1e-4;
  double window_fraction = 0.2;
  double perturbation = 1e-3;   // applied to modes above m
  std::string states_file;
  AbsorbCfg absorb{6, 30.0, 0.2, 1.0, 3.0, 0.0, false, 1e-4, 0.5, false};
};

struct DimensionCfg {
  int n_rank = 10;
  double lipschitz = 1.0;
  std::optional<double> theta;  // unset = grid scan
  int theta_grid = 99;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  HRParameters params;
  DomainSpec domain{{1.0}, {3}};
  int m_max = 1;
  bool has_domain = false;  // simulate/absorb/squeeze/lipschitz/determine need one
  StepperConfig stepper;

  std::optional<SimulateCfg> simulate;
  std::optional<OdeCfg> ode;
  std::optional<AbsorbCfg> absorb;
  std::optional<SqueezeCfg> squeeze;
  std::optional<LipschitzCfg> lipschitz;
  std::optional<DetermineCfg> determine;
  std::optional<DimensionCfg> dimension;
};

// Parses and validates a config document.  Unknown keys anywhere are
// rejected; exactly the block matching `experiment` may be present.
ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::string& context);
ExperimentConfig load_config(const std::string& path);

// Full resolved echo (every effective value, defaults included).
nlohmann::json echo_config(const ExperimentConfig& cfg);

}  // namespace hrlab
