#include "hrlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrlab {

void HRParameters::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ValidationError(std::string("params: ") + name +
                            " must be positive and finite");
    }
  };
  positive(d1, "d1");
  positive(d2, "d2");
  positive(d3, "d3");
  positive(a, "a");
  positive(b, "b");
  positive(alpha, "alpha");
  positive(beta, "beta");
  positive(q, "q");
  positive(r, "r");
  if (!std::isfinite(c) || !std::isfinite(J)) {
    throw ValidationError("params: c and J must be finite");
  }
}

HRParameters HRParameters::typical() { return HRParameters{}; }

double monotone_constant(const HRParameters& p) {
  double c1 = 1.0 + p.q + 2.0 * p.a * p.a / p.b;
  double c2 = 2.0 + 2.0 * p.beta * p.beta / p.b;
  double c3 = 1.0 + p.q + p.r;
  return std::max({c1, c2, c3});
}

double coupled_constant(const HRParameters& p) {
  return 4.0 * (1.0 + p.beta / p.b + p.a * p.a / p.b) + 2.0 * (p.q + p.r);
}

double lipschitz_E_to_H(const HRParameters& p, double n1, double n2,
                        double delta1, double delta2) {
  double t1 = 4.0 * delta1 * delta1 * n1 * n1 *
                  (4.0 * p.a * p.a + 2.0 * p.beta * p.beta) +
              128.0 * p.b * p.b * delta2 * delta2 * std::pow(n2, 4) +
              2.0 * p.q * p.q;
  double t2 = 6.0;
  double t3 = 4.0 + 2.0 * p.r * p.r;
  return std::sqrt(std::max({t1, t2, t3}));
}

std::array<double, 3> ode_rhs(const std::array<double, 3>& y,
                              const HRParameters& p) {
  double u = y[0], v = y[1], w = y[2];
  double u2 = u * u;
  return {p.a * u2 - p.b * u2 * u + v - w + p.J,
          p.alpha - p.beta * u2 - v, p.q * (u - p.c) - p.r * w};
}

void nonlinearity_grid(const State& g, const HRParameters& p,
                       NonlinearityWorkspace& ws) {
  require_same_basis(g.u, g.v);
  require_same_basis(g.u, g.w);
  const SpectralBasis& basis = *g.u.basis;
  basis.to_grid(g.u.c, ws.gu);
  basis.to_grid(g.v.c, ws.gv);
  basis.to_grid(g.w.c, ws.gw);
  const int n = basis.grid_size();
  ws.fu.resize(n);
  ws.fv.resize(n);
  ws.fw.resize(n);
  for (int j = 0; j < n; ++j) {
    double u = ws.gu[j], v = ws.gv[j], w = ws.gw[j];
    if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(w)) {
      throw BlowupError("nonlinearity: non-finite state values on grid",
                        std::numeric_limits<double>::quiet_NaN());
    }
    double u2 = u * u;
    ws.fu[j] = p.a * u2 - p.b * u2 * u + v - w + p.J;
    ws.fv[j] = p.alpha - p.beta * u2 - v;
    ws.fw[j] = p.q * (u - p.c) - p.r * w;
  }
}

void nonlinearity(const State& g, const HRParameters& p,
                  NonlinearityWorkspace& ws, State& out) {
  nonlinearity_grid(g, p, ws);
  const SpectralBasis& basis = *g.u.basis;
  out.u.basis = g.u.basis;
  out.v.basis = g.u.basis;
  out.w.basis = g.u.basis;
  basis.to_coeffs(ws.fu, out.u.c);
  basis.to_coeffs(ws.fv, out.v.c);
  basis.to_coeffs(ws.fw, out.w.c);
}

State nonlinearity(const State& g, const HRParameters& p) {
  NonlinearityWorkspace ws;
  State out;
  nonlinearity(g, p, ws, out);
  return out;
}

void ode_rhs_pde(const State& g, const HRParameters& p,
                 NonlinearityWorkspace& ws, State& out) {
  nonlinearity(g, p, ws, out);
  const SpectralBasis& basis = *g.u.basis;
  for (int i = 0; i < basis.size(); ++i) {
    double lam = basis.eigenvalue(i);
    out.u.c[i] -= p.d1 * lam * g.u.c[i];
    out.v.c[i] -= p.d2 * lam * g.v.c[i];
    out.w.c[i] -= p.d3 * lam * g.w.c[i];
  }
}

OdeTrajectory integrate_ode_rk4(const std::array<double, 3>& y0,
                                const HRParameters& p, double t_final,
                                double dt, int record_every) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) {
    throw ValidationError("ode: dt must be positive and t_final >= 0");
  }
  if (record_every < 1) record_every = 1;
  long n_steps = std::lround(t_final / dt);
  if (n_steps < 0) n_steps = 0;

  auto add = [](const std::array<double, 3>& x, double s,
                const std::array<double, 3>& d) {
    return std::array<double, 3>{x[0] + s * d[0], x[1] + s * d[1],
                                 x[2] + s * d[2]};
  };

  OdeTrajectory traj;
  traj.t.push_back(0.0);
  traj.y.push_back(y0);
  std::array<double, 3> y = y0;
  for (long s = 1; s <= n_steps; ++s) {
    auto k1 = ode_rhs(y, p);
    auto k2 = ode_rhs(add(y, 0.5 * dt, k1), p);
    auto k3 = ode_rhs(add(y, 0.5 * dt, k2), p);
    auto k4 = ode_rhs(add(y, dt, k3), p);
    for (int i = 0; i < 3; ++i) {
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2])) {
      throw BlowupError("ode: non-finite state", (s - 1) * dt);
    }
    if (s % record_every == 0 || s == n_steps) {
      traj.t.push_back(s * dt);
      traj.y.push_back(y);
    }
  }
  return traj;
}

std::vector<Burst> spike_burst_table(const std::vector<double>& t,
                                     const std::vector<double>& u,
                                     double spike_threshold,
                                     double quiescent_gap) {
  if (t.size() != u.size()) {
    throw ValidationError("spike table: t and u must have equal length");
  }
  std::vector<double> spikes;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i - 1] < spike_threshold && u[i] >= spike_threshold) {
      spikes.push_back(t[i]);
    }
  }
  std::vector<Burst> bursts;
  for (double ts : spikes) {
    if (!bursts.empty() && ts - bursts.back().t_end < quiescent_gap) {
      bursts.back().t_end = ts;
      bursts.back().spikes += 1;
    } else {
      bursts.push_back({ts, ts, 1});
    }
  }
  return bursts;
}

}  // namespace hrlab
