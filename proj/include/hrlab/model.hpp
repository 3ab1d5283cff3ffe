#pragma once

#include <array>
#include <vector>

#include "hrlab/spectral.hpp"

namespace hrlab {

// Parameters of the diffusive Hindmarsh-Rose system
//   u_t = d1 Lap u + a u^2 - b u^3 + v - w + J
//   v_t = d2 Lap v + alpha - beta u^2 - v
//   w_t = d3 Lap w + q (u - c) - r w
// with homogeneous Neumann conditions.  All of a, b, alpha, beta, q, r and
// the diffusivities must be positive; J and the reference level c may take
// any sign.
struct HRParameters {
  double d1 = 0.1, d2 = 0.1, d3 = 0.1;
  double a = 3.0, b = 1.0;
  double alpha = 1.0, beta = 5.0;
  double q = 0.0084, r = 0.0021;
  double c = -1.6;
  double J = 3.281;

  void validate() const;

  // The classical bursting regime: J = 3.281, r = 0.0021, q = r * 4
  // (q = r S with S = 4), c = -1.6, phi(u) = 3 u^2 - u^3,
  // psi(u) = 1 - 5 u^2, diffusivities 0.1.
  static HRParameters typical();
};

// One-sided (monotonicity) constant: for all states g, gt,
//   <f(g) - f(gt), g - gt>_H <= C* |g - gt|_H^2,
// with C* = max{1 + q + 2 a^2 / b, 2 + 2 beta^2 / b, 1 + q + r}.
double monotone_constant(const HRParameters& p);

// Constant in the coupled energy estimate for |xi|^2 + |grad xi|^2:
// C_* = 4 (1 + beta / b + a^2 / b) + 2 (q + r).
double coupled_constant(const HRParameters& p);

// Lipschitz constant of f from E to H over a bounded set M:
//   C_E = sqrt(max{4 d1^2 N1^2 (4 a^2 + 2 beta^2) + 128 b^2 d2^2 N2^4 + 2 q^2,
//                  6, 4 + 2 r^2})
// where N1 bounds |u|_L4 and N2 bounds |u|_L6 over M, and d1, d2 are the
// embedding constants |.|_L4 <= d1 |.|_H1, |.|_L6 <= d2 |.|_H1 on the
// domain (not diffusivities).
double lipschitz_E_to_H(const HRParameters& p, double n1, double n2,
                        double delta1, double delta2);

// Reaction term of the space-clamped ODE at y = (u, v, w).
std::array<double, 3> ode_rhs(const std::array<double, 3>& y,
                              const HRParameters& p);

// Scratch buffers for nonlinearity evaluation; reusable across calls on the
// same basis.
struct NonlinearityWorkspace {
  std::vector<double> gu, gv, gw;  // input on grid
  std::vector<double> fu, fv, fw;  // reaction term on grid
};

// Pointwise reaction term f(g) on the collocation grid.  Fills both the
// input images and the reaction images in ws.  Throws BlowupError (with
// unknown time) if the input grid values are not finite.
void nonlinearity_grid(const State& g, const HRParameters& p,
                       NonlinearityWorkspace& ws);

// Galerkin nonlinearity: coefficients of the projection of f(g) onto the
// retained band.  Exact (no aliasing) because the grid satisfies the cubic
// dealiasing floor enforced at basis build time.
void nonlinearity(const State& g, const HRParameters& p,
                  NonlinearityWorkspace& ws, State& out);
State nonlinearity(const State& g, const HRParameters& p);

// Full semiflow right side d g / dt = -A g + f(g) in coefficient space.
void ode_rhs_pde(const State& g, const HRParameters& p,
                 NonlinearityWorkspace& ws, State& out);

// Space-clamped trajectory by classical RK4 at fixed step.  Serves as the
// reference for the PDE integrator on spatially constant data.
struct OdeTrajectory {
  std::vector<double> t;
  std::vector<std::array<double, 3>> y;
};
OdeTrajectory integrate_ode_rk4(const std::array<double, 3>& y0,
                                const HRParameters& p, double t_final,
                                double dt, int record_every = 1);

// Spike/burst summary of a membrane-potential series: a spike is an upward
// crossing of `spike_threshold`, spikes closer than `quiescent_gap` belong
// to one burst.
struct Burst {
  double t_start = 0.0, t_end = 0.0;
  int spikes = 0;
};
std::vector<Burst> spike_burst_table(const std::vector<double>& t,
                                     const std::vector<double>& u,
                                     double spike_threshold = 1.0,
                                     double quiescent_gap = 20.0);

}  // namespace hrlab
