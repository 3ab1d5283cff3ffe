#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hrlab/model.hpp"

namespace hrlab {

// Time-stepping schemes.  The exponential integrators treat the diffusion
// exactly per mode; reference-rk4 applies classical RK4 to the full stiff
// system at dt / 100 substeps and exists as a slow cross-check.
enum class Scheme { ExponentialEuler, EtdRk2, ReferenceRk4 };

Scheme scheme_from_string(const std::string& name);
std::string scheme_to_string(Scheme s);

struct StepperConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::EtdRk2;
  int record_every = 1;      // sample stride for trajectories
  double blowup_norm = 1e8;  // ceiling on any component L2 norm
  bool linear_only = false;  // zero the nonlinearity (diagnostic runs)

  void validate() const;
};

// Marches one state.  Exponential factors exp(-lambda d dt) and the phi1 /
// phi2 weights are precomputed per mode and component at construction.
class Stepper {
public:
  Stepper(BasisPtr basis, const HRParameters& params,
          const StepperConfig& config);

  // Advances g by one step of config().dt in place.  Throws BlowupError
  // (time unknown at this level) on non-finite intermediate values.
  void advance(State& g);

  const StepperConfig& config() const { return cfg_; }
  const HRParameters& params() const { return params_; }
  const BasisPtr& basis() const { return basis_; }

private:
  void rhs_nonlinear(const State& g, State& out);
  void advance_exponential(State& g);
  void advance_rk4(State& g);

  BasisPtr basis_;
  HRParameters params_;
  StepperConfig cfg_;
  // [component][mode] tables: decay e^{-lambda d h}, h phi1(-lambda d h),
  // h phi2(-lambda d h).
  std::array<std::vector<double>, 3> decay_, hphi1_, hphi2_;
  NonlinearityWorkspace ws_;
  State fa_, fb_, stage_;
  std::array<State, 4> rk_;
};

// Single convenience step.
State step(const State& g, const HRParameters& params,
           const StepperConfig& config);

// Recorded trajectory.  Samples always include t = 0 and the final time.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;                  // empty if store_states false
  std::vector<std::array<double, 6>> norms;   // (L2,H1) for u, v, w
  bool blew_up = false;
  double blowup_time = 0.0;                   // last valid time if blew_up

  double h_norm(std::size_t i) const;  // |g|_H at sample i
  double e_norm(std::size_t i) const;  // |g|_E at sample i
};

Trajectory evolve(const State& g0, const HRParameters& params, double t_final,
                  const StepperConfig& config, bool store_states = true);

// Difference diagnostics xi = g - h under a spectral cutoff m: per sample
// |xi|_H, |P_m xi|_H, |Q_m xi|_H.
struct PairSeries {
  std::vector<double> times, xi, p, q;
  bool blew_up = false;
  double blowup_time = 0.0;
};

struct PairResult {
  Trajectory first, second;
  PairSeries diff;
};

PairResult evolve_pair(const State& g0, const State& h0,
                       const HRParameters& params, double t_final,
                       const StepperConfig& config, int proj_m,
                       bool store_states = false);

// Text series: header "t,comp,norm_L2,norm_H1", one row per sample and
// component, %.17g floats.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Binary coefficient dump, little-endian: magic "HRTRAJ01", u64 mode count
// per component, u64 sample count, then per sample one f64 time followed by
// 3 x modes f64 coefficients (u, v, w).  Requires store_states.
void write_trajectory_dump(const std::string& path, const Trajectory& traj);

// Reads a dump back onto the given basis; mode count must match.
struct TrajectoryDump {
  std::vector<double> times;
  std::vector<State> states;
};
TrajectoryDump read_trajectory_dump(const std::string& path,
                                    const BasisPtr& basis);

}  // namespace hrlab
