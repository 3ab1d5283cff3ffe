#include "hrlab/integrator.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace hrlab {

static_assert(std::endian::native == std::endian::little,
              "binary trajectory dumps assume a little-endian host");

namespace {

// phi1(z) = (e^z - 1) / z, phi2(z) = (e^z - 1 - z) / z^2, with series
// fallback near zero where the direct forms cancel.
double phi1(double z) {
  if (std::abs(z) < 1e-2) {
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  }
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-2) {
    return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
  }
  return (std::expm1(z) - z) / (z * z);
}

const char kDumpMagic[8] = {'H', 'R', 'T', 'R', 'A', 'J', '0', '1'};

}  // namespace

Scheme scheme_from_string(const std::string& name) {
  if (name == "exp-euler") return Scheme::ExponentialEuler;
  if (name == "etd-rk2") return Scheme::EtdRk2;
  if (name == "reference-rk4") return Scheme::ReferenceRk4;
  throw ValidationError("scheme: unknown name '" + name +
                        "' (expected exp-euler, etd-rk2 or reference-rk4)");
}

std::string scheme_to_string(Scheme s) {
  switch (s) {
    case Scheme::ExponentialEuler: return "exp-euler";
    case Scheme::EtdRk2: return "etd-rk2";
    case Scheme::ReferenceRk4: return "reference-rk4";
  }
  return "?";
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("stepper: dt must be positive and finite");
  }
  if (record_every < 1) {
    throw ValidationError("stepper: record_every must be >= 1");
  }
  if (!(blowup_norm > 0.0)) {
    throw ValidationError("stepper: blowup_norm must be positive");
  }
}

Stepper::Stepper(BasisPtr basis, const HRParameters& params,
                 const StepperConfig& config)
    : basis_(std::move(basis)), params_(params), cfg_(config) {
  params_.validate();
  cfg_.validate();
  const int m = basis_->size();
  const double h = cfg_.dt;
  const double diff[3] = {params_.d1, params_.d2, params_.d3};
  for (int comp = 0; comp < 3; ++comp) {
    decay_[comp].resize(m);
    hphi1_[comp].resize(m);
    hphi2_[comp].resize(m);
    for (int k = 0; k < m; ++k) {
      double z = -basis_->eigenvalue(k) * diff[comp] * h;
      decay_[comp][k] = std::exp(z);
      hphi1_[comp][k] = h * phi1(z);
      hphi2_[comp][k] = h * phi2(z);
    }
  }
  fa_ = zero_state(basis_);
  fb_ = zero_state(basis_);
  stage_ = zero_state(basis_);
  for (auto& s : rk_) s = zero_state(basis_);
}

void Stepper::advance(State& g) {
  if (g.u.basis != basis_) {
    throw ValidationError("stepper: state lives on a different basis");
  }
  if (cfg_.scheme == Scheme::ReferenceRk4) {
    advance_rk4(g);
  } else {
    advance_exponential(g);
  }
}

void Stepper::rhs_nonlinear(const State& g, State& out) {
  if (cfg_.linear_only) {
    out = zero_state(basis_);
    return;
  }
  nonlinearity(g, params_, ws_, out);
}

void Stepper::advance_exponential(State& g) {
  const int m = basis_->size();
  rhs_nonlinear(g, fa_);
  std::vector<double>* gc[3] = {&g.u.c, &g.v.c, &g.w.c};
  std::vector<double>* sc[3] = {&stage_.u.c, &stage_.v.c, &stage_.w.c};
  std::vector<double>* ac[3] = {&fa_.u.c, &fa_.v.c, &fa_.w.c};
  if (cfg_.scheme == Scheme::ExponentialEuler) {
    for (int comp = 0; comp < 3; ++comp) {
      for (int k = 0; k < m; ++k) {
        (*gc[comp])[k] = decay_[comp][k] * (*gc[comp])[k] +
                         hphi1_[comp][k] * (*ac[comp])[k];
      }
    }
    return;
  }
  // ETD2RK (predictor a, corrector with phi2 weight).
  for (int comp = 0; comp < 3; ++comp) {
    for (int k = 0; k < m; ++k) {
      (*sc[comp])[k] = decay_[comp][k] * (*gc[comp])[k] +
                       hphi1_[comp][k] * (*ac[comp])[k];
    }
  }
  rhs_nonlinear(stage_, fb_);
  std::vector<double>* bc[3] = {&fb_.u.c, &fb_.v.c, &fb_.w.c};
  for (int comp = 0; comp < 3; ++comp) {
    for (int k = 0; k < m; ++k) {
      (*gc[comp])[k] = (*sc[comp])[k] +
                       hphi2_[comp][k] * ((*bc[comp])[k] - (*ac[comp])[k]);
    }
  }
}

void Stepper::advance_rk4(State& g) {
  const int substeps = 100;
  const double h = cfg_.dt / substeps;
  const int m = basis_->size();
  const double diff[3] = {params_.d1, params_.d2, params_.d3};
  auto rhs = [&](const State& x, State& out) {
    rhs_nonlinear(x, out);
    std::vector<double>* oc[3] = {&out.u.c, &out.v.c, &out.w.c};
    const std::vector<double>* xc[3] = {&x.u.c, &x.v.c, &x.w.c};
    for (int comp = 0; comp < 3; ++comp) {
      for (int k = 0; k < m; ++k) {
        (*oc[comp])[k] -= diff[comp] * basis_->eigenvalue(k) * (*xc[comp])[k];
      }
    }
  };
  for (int s = 0; s < substeps; ++s) {
    rhs(g, rk_[0]);
    stage_ = g;
    axpy(0.5 * h, rk_[0], stage_);
    rhs(stage_, rk_[1]);
    stage_ = g;
    axpy(0.5 * h, rk_[1], stage_);
    rhs(stage_, rk_[2]);
    stage_ = g;
    axpy(h, rk_[2], stage_);
    rhs(stage_, rk_[3]);
    // Combination written to match the scalar RK4 oracle term for term.
    std::vector<double>* gc[3] = {&g.u.c, &g.v.c, &g.w.c};
    for (int comp = 0; comp < 3; ++comp) {
      const std::vector<double>& k1 = comp == 0 ? rk_[0].u.c
                                    : comp == 1 ? rk_[0].v.c
                                                : rk_[0].w.c;
      const std::vector<double>& k2 = comp == 0 ? rk_[1].u.c
                                    : comp == 1 ? rk_[1].v.c
                                                : rk_[1].w.c;
      const std::vector<double>& k3 = comp == 0 ? rk_[2].u.c
                                    : comp == 1 ? rk_[2].v.c
                                                : rk_[2].w.c;
      const std::vector<double>& k4 = comp == 0 ? rk_[3].u.c
                                    : comp == 1 ? rk_[3].v.c
                                                : rk_[3].w.c;
      for (int k = 0; k < m; ++k) {
        (*gc[comp])[k] +=
            h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
      }
    }
  }
}

State step(const State& g, const HRParameters& params,
           const StepperConfig& config) {
  Stepper stepper(g.u.basis, params, config);
  State out = g;
  try {
    stepper.advance(out);
  } catch (const BlowupError&) {
    throw BlowupError("step: state blew up within one step", 0.0);
  }
  for (const std::vector<double>* comp : {&out.u.c, &out.v.c, &out.w.c}) {
    for (double x : *comp) {
      if (!std::isfinite(x)) {
        throw BlowupError("step: state blew up within one step", 0.0);
      }
    }
  }
  return out;
}

double Trajectory::h_norm(std::size_t i) const {
  const auto& n = norms[i];
  return std::sqrt(n[0] * n[0] + n[2] * n[2] + n[4] * n[4]);
}

double Trajectory::e_norm(std::size_t i) const {
  const auto& n = norms[i];
  return std::sqrt(n[1] * n[1] + n[3] * n[3] + n[5] * n[5]);
}

namespace {

std::array<double, 6> sample_norms(const State& g) {
  return {norm(g.u, NormKind::L2), norm(g.u, NormKind::H1),
          norm(g.v, NormKind::L2), norm(g.v, NormKind::H1),
          norm(g.w, NormKind::L2), norm(g.w, NormKind::H1)};
}

// Largest per-component coefficient l2 norm; cheap blow-up sentinel.
double max_component_l2(const State& g) {
  double worst = 0.0;
  for (const std::vector<double>* c : {&g.u.c, &g.v.c, &g.w.c}) {
    double acc = 0.0;
    for (double x : *c) acc += x * x;
    if (!std::isfinite(acc)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

long step_count(double t_final, double dt) {
  if (!(t_final >= 0.0)) {
    throw ValidationError("evolve: t_final must be >= 0");
  }
  return std::lround(t_final / dt);
}

}  // namespace

Trajectory evolve(const State& g0, const HRParameters& params, double t_final,
                  const StepperConfig& config, bool store_states) {
  Stepper stepper(g0.u.basis, params, config);
  const long n_steps = step_count(t_final, config.dt);

  Trajectory traj;
  auto record = [&](double t, const State& g) {
    traj.times.push_back(t);
    traj.norms.push_back(sample_norms(g));
    if (store_states) traj.states.push_back(g);
  };

  State g = g0;
  record(0.0, g);
  for (long s = 1; s <= n_steps; ++s) {
    try {
      stepper.advance(g);
    } catch (const BlowupError&) {
      traj.blew_up = true;
      traj.blowup_time = (s - 1) * config.dt;
      return traj;
    }
    if (max_component_l2(g) > config.blowup_norm) {
      traj.blew_up = true;
      traj.blowup_time = (s - 1) * config.dt;
      return traj;
    }
    if (s % config.record_every == 0 || s == n_steps) {
      record(s * config.dt, g);
    }
  }
  return traj;
}

namespace {

// |xi|, |P_m xi|, |Q_m xi| in H for xi = g - h.
std::array<double, 3> split_norms(const State& g, const State& h, int m) {
  double lo = 0.0, hi = 0.0;
  auto accumulate = [&](const std::vector<double>& a,
                        const std::vector<double>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      double d = a[k] - b[k];
      (static_cast<int>(k) < m ? lo : hi) += d * d;
    }
  };
  accumulate(g.u.c, h.u.c);
  accumulate(g.v.c, h.v.c);
  accumulate(g.w.c, h.w.c);
  return {std::sqrt(lo + hi), std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

PairResult evolve_pair(const State& g0, const State& h0,
                       const HRParameters& params, double t_final,
                       const StepperConfig& config, int proj_m,
                       bool store_states) {
  require_same_basis(g0, h0);
  if (proj_m < 0 || proj_m > g0.u.basis->size()) {
    throw ValidationError("evolve_pair: projection cutoff out of range");
  }
  Stepper stepper(g0.u.basis, params, config);
  const long n_steps = step_count(t_final, config.dt);

  PairResult res;
  auto record = [&](double t, const State& g, const State& h) {
    res.first.times.push_back(t);
    res.first.norms.push_back(sample_norms(g));
    res.second.times.push_back(t);
    res.second.norms.push_back(sample_norms(h));
    if (store_states) {
      res.first.states.push_back(g);
      res.second.states.push_back(h);
    }
    auto s = split_norms(g, h, proj_m);
    res.diff.times.push_back(t);
    res.diff.xi.push_back(s[0]);
    res.diff.p.push_back(s[1]);
    res.diff.q.push_back(s[2]);
  };

  State g = g0, h = h0;
  record(0.0, g, h);
  for (long s = 1; s <= n_steps; ++s) {
    try {
      stepper.advance(g);
      stepper.advance(h);
    } catch (const BlowupError&) {
      res.first.blew_up = res.second.blew_up = res.diff.blew_up = true;
      res.diff.blowup_time = (s - 1) * config.dt;
      return res;
    }
    if (std::max(max_component_l2(g), max_component_l2(h)) >
        config.blowup_norm) {
      res.first.blew_up = res.second.blew_up = res.diff.blew_up = true;
      res.diff.blowup_time = (s - 1) * config.dt;
      return res;
    }
    if (s % config.record_every == 0 || s == n_steps) {
      record(s * config.dt, g, h);
    }
  }
  return res;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw ValidationError("cannot open for writing: " + path);
  std::fputs("t,comp,norm_L2,norm_H1\n", f);
  const char* comps[3] = {"u", "v", "w"};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    for (int comp = 0; comp < 3; ++comp) {
      std::fprintf(f, "%.17g,%s,%.17g,%.17g\n", traj.times[i], comps[comp],
                   traj.norms[i][2 * comp], traj.norms[i][2 * comp + 1]);
    }
  }
  std::fclose(f);
}

void write_trajectory_dump(const std::string& path, const Trajectory& traj) {
  if (traj.states.size() != traj.times.size()) {
    throw ValidationError("dump: trajectory was recorded without states");
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open for writing: " + path);
  f.write(kDumpMagic, 8);
  std::uint64_t m =
      traj.states.empty() ? 0 : traj.states[0].u.basis->size();
  std::uint64_t n = traj.states.size();
  f.write(reinterpret_cast<const char*>(&m), 8);
  f.write(reinterpret_cast<const char*>(&n), 8);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    f.write(reinterpret_cast<const char*>(&traj.times[i]), 8);
    for (const std::vector<double>* c :
         {&traj.states[i].u.c, &traj.states[i].v.c, &traj.states[i].w.c}) {
      f.write(reinterpret_cast<const char*>(c->data()),
              static_cast<std::streamsize>(c->size() * 8));
    }
  }
  if (!f) throw ValidationError("short write: " + path);
}

TrajectoryDump read_trajectory_dump(const std::string& path,
                                    const BasisPtr& basis) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open: " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kDumpMagic, 8) != 0) {
    throw ValidationError("not a trajectory dump: " + path);
  }
  std::uint64_t m = 0, n = 0;
  f.read(reinterpret_cast<char*>(&m), 8);
  f.read(reinterpret_cast<char*>(&n), 8);
  if (!f) throw ValidationError("truncated dump header: " + path);
  if (m != static_cast<std::uint64_t>(basis->size())) {
    throw ValidationError("dump holds " + std::to_string(m) +
                          " modes per component, basis has " +
                          std::to_string(basis->size()));
  }
  TrajectoryDump dump;
  dump.times.resize(n);
  dump.states.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    f.read(reinterpret_cast<char*>(&dump.times[i]), 8);
    State s = zero_state(basis);
    for (std::vector<double>* c : {&s.u.c, &s.v.c, &s.w.c}) {
      f.read(reinterpret_cast<char*>(c->data()),
             static_cast<std::streamsize>(c->size() * 8));
    }
    if (!f) throw ValidationError("truncated dump payload: " + path);
    dump.states.push_back(std::move(s));
  }
  return dump;
}

}  // namespace hrlab
