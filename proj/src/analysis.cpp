#include "hrlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Advances a state without recording; used for warmup preludes.
State advance_for(State g, const HRParameters& params, double duration,
                  const StepperConfig& config) {
  Stepper stepper(g.u.basis, params, config);
  long n = std::lround(duration / config.dt);
  for (long s = 0; s < n; ++s) stepper.advance(g);
  return g;
}

}  // namespace

ScalarField random_field(const BasisPtr& basis, Rng& rng, double decay) {
  ScalarField f = zero_field(basis);
  for (int k = 0; k < basis->size(); ++k) {
    f.c[k] = rng.gaussian() * std::pow(1.0 + basis->eigenvalue(k), -0.5 * decay);
  }
  return f;
}

State random_state(const BasisPtr& basis, Rng& rng, double decay) {
  return {random_field(basis, rng, decay), random_field(basis, rng, decay),
          random_field(basis, rng, decay)};
}

State random_state_with_norm(const BasisPtr& basis, Rng& rng, double target,
                             NormKind kind, double decay) {
  if (!(target >= 0.0)) {
    throw ValidationError("random_state: target norm must be >= 0");
  }
  State g = random_state(basis, rng, decay);
  double cur = norm(g, kind);
  scale(g, cur > 0.0 ? target / cur : 0.0);
  return g;
}

State random_state_with_sup(const BasisPtr& basis, Rng& rng, double sup_target,
                            double decay) {
  if (!(sup_target >= 0.0)) {
    throw ValidationError("random_state: sup target must be >= 0");
  }
  State g = random_state(basis, rng, decay);
  double sup = 0.0;
  for (const ScalarField* f : {&g.u, &g.v, &g.w}) {
    for (double x : basis->to_grid(f->c)) sup = std::max(sup, std::abs(x));
  }
  scale(g, sup > 0.0 ? sup_target / sup : 0.0);
  return g;
}

AbsorptionReport absorption_probe(const std::vector<State>& initials,
                                  const HRParameters& params, double horizon,
                                  const StepperConfig& config,
                                  double tail_fraction,
                                  const std::optional<WarmupSpec>& warmup,
                                  std::vector<Trajectory>* trajectories,
                                  bool store_states) {
  if (initials.empty()) {
    throw ValidationError("absorption: empty initial ensemble");
  }
  if (!(horizon > 0.0)) {
    throw ValidationError("absorption: horizon must be positive");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ValidationError("absorption: tail_fraction must lie in (0, 1]");
  }

  const int n = static_cast<int>(initials.size());
  std::vector<Trajectory> local(n);
  std::vector<char> warm_blowup(n, 0);
  const bool keep_states = trajectories != nullptr && store_states;

  parallel_for(n, [&](int i) {
    State g0 = initials[i];
    if (warmup) {
      StepperConfig wcfg = config;
      wcfg.dt = warmup->dt;
      try {
        g0 = advance_for(std::move(g0), params, warmup->duration, wcfg);
      } catch (const BlowupError&) {
        warm_blowup[i] = 1;
        return;
      }
    }
    local[i] = evolve(g0, params, horizon, config, keep_states);
  });

  AbsorptionReport rep;
  rep.horizon = horizon;
  rep.tail_fraction = tail_fraction;
  rep.warmup_duration = warmup ? warmup->duration : 0.0;
  rep.entry_times.assign(n, kNaN);
  rep.tail_sup.assign(n, kNaN);
  rep.initial_e.assign(n, kNaN);

  const double tail_start = horizon * (1.0 - tail_fraction);
  for (int i = 0; i < n; ++i) {
    rep.initial_e[i] = norm(initials[i], NormKind::H1);
    if (warm_blowup[i] || local[i].blew_up) {
      rep.any_blowup = true;
      continue;
    }
    double sup = 0.0;
    for (std::size_t s = 0; s < local[i].times.size(); ++s) {
      if (local[i].times[s] >= tail_start) {
        sup = std::max(sup, local[i].e_norm(s));
      }
    }
    rep.tail_sup[i] = sup;
  }

  double worst = 0.0;
  for (double s : rep.tail_sup) {
    if (std::isfinite(s)) worst = std::max(worst, s);
  }
  rep.q_estimate = 1.05 * worst;

  rep.all_entered = !rep.any_blowup;
  for (int i = 0; i < n; ++i) {
    if (warm_blowup[i] || local[i].blew_up) {
      rep.all_entered = false;
      continue;
    }
    // First recorded time after which the E-norm never exceeds the estimate.
    const auto& traj = local[i];
    std::size_t entry = traj.times.size();
    for (std::size_t s = traj.times.size(); s-- > 0;) {
      if (traj.e_norm(s) > rep.q_estimate) break;
      entry = s;
    }
    if (entry < traj.times.size()) {
      rep.entry_times[i] = rep.warmup_duration + traj.times[entry];
    } else {
      rep.all_entered = false;
    }
  }

  if (trajectories) *trajectories = std::move(local);
  return rep;
}

int select_m(double lipschitz_c, const SpectralBasis& basis) {
  if (!(lipschitz_c >= 0.0)) {
    throw ValidationError("select_m: Lipschitz constant must be >= 0");
  }
  for (int i = 0; i < basis.size(); ++i) {
    double lam = basis.eigenvalue(i);
    if (lam > 3.0 * lipschitz_c * (std::sqrt(lam) + 1.0)) {
      return i + 1;  // modes are counted from 1
    }
  }
  throw ValidationError(
      "select_m: no retained eigenvalue satisfies the spectral gap "
      "condition; increase m_max");
}

double delta_theoretical(double lambda_m, double c_star, DeltaVariant variant,
                         double lipschitz_c) {
  if (!(lambda_m > 0.0)) {
    throw ValidationError("delta_theoretical: lambda_m must be positive");
  }
  switch (variant) {
    case DeltaVariant::Step2:
      return std::sqrt(2.0) * std::exp(-lambda_m / 6.0) * std::exp(c_star / 2.0);
    case DeltaVariant::Step3: {
      if (!(lipschitz_c > 0.0)) {
        throw ValidationError(
            "delta_theoretical: step3 needs a positive Lipschitz constant");
      }
      double c_m = lipschitz_c * (std::sqrt(lambda_m) + 1.0);
      double x = lambda_m / (2.0 * c_m);
      return std::sqrt(2.0) * (x + 0.5) * std::exp(-x) *
             std::exp(2.0 + 2.0 * lipschitz_c);
    }
  }
  throw ValidationError("delta_theoretical: unknown variant");
}

double phi_value(double p_norm, double q_norm, double lambda_m, double c_m) {
  if (!(c_m > 0.0)) {
    throw ValidationError("phi: c_m must be positive");
  }
  double total = p_norm + q_norm;
  if (!(total > 0.0)) {
    throw ValidationError("phi: undefined for zero difference");
  }
  return total * std::exp(lambda_m * q_norm / (c_m * total));
}

namespace {

// Shared by squeeze_test and phi_monitor: evaluates Phi along a recorded
// difference series and checks nonincrease on windows whose two endpoints
// both satisfy (lambda_m - c_m) |q| >= 2 c_m |p|.
struct PhiCheck {
  int windows = 0;
  bool ok = true;
  bool defined = true;
};

PhiCheck check_phi_series(const PairSeries& diff, double lambda_m, double c_m,
                          double rel_slack, PhiSeries* out) {
  PhiCheck res;
  std::vector<double> phi(diff.times.size(), kNaN);
  std::vector<char> qual(diff.times.size(), 0);
  for (std::size_t i = 0; i < diff.times.size(); ++i) {
    double p = diff.p[i], q = diff.q[i];
    if (!(p + q > 0.0)) {
      res.defined = false;
      break;
    }
    phi[i] = phi_value(p, q, lambda_m, c_m);
    qual[i] = (lambda_m - c_m) * q >= 2.0 * c_m * p ? 1 : 0;
  }
  for (std::size_t i = 0; i + 1 < diff.times.size(); ++i) {
    if (!qual[i] || !qual[i + 1]) continue;
    if (std::isnan(phi[i]) || std::isnan(phi[i + 1])) break;
    res.windows += 1;
    if (phi[i + 1] > phi[i] * (1.0 + rel_slack)) res.ok = false;
  }
  if (out) {
    out->times = diff.times;
    out->p = diff.p;
    out->q = diff.q;
    out->phi = std::move(phi);
    out->qualifying = std::move(qual);
    out->checked_windows = res.windows;
    out->nonincreasing_ok = res.ok;
    out->defined = res.defined;
  }
  return res;
}

}  // namespace

SqueezeReport squeeze_test(const std::vector<std::pair<State, State>>& pairs,
                           const SqueezeOptions& options,
                           const HRParameters& params,
                           const StepperConfig& config) {
  if (pairs.empty()) throw ValidationError("squeeze: empty pair ensemble");
  if (!(options.t_star > 0.0)) {
    throw ValidationError("squeeze: t_star must be positive");
  }
  const BasisPtr& basis = pairs[0].first.u.basis;
  if (options.m < 1 || options.m > basis->size()) {
    throw ValidationError("squeeze: cutoff m out of range [1, " +
                          std::to_string(basis->size()) + "]");
  }

  SqueezeReport rep;
  rep.m = options.m;
  rep.n_rank = 3 * options.m;
  rep.t_star = options.t_star;
  rep.lambda_m = basis->eigenvalue(options.m - 1);
  rep.lambda_m1 = options.m < basis->size() ? basis->eigenvalue(options.m)
                                            : kNaN;
  rep.c_star = monotone_constant(params);
  rep.lipschitz_c = options.lipschitz_c;
  rep.c_m = options.lipschitz_c * (std::sqrt(rep.lambda_m) + 1.0);
  rep.delta_step2 =
      delta_theoretical(rep.lambda_m, rep.c_star, DeltaVariant::Step2);
  rep.delta_step3 =
      options.lipschitz_c > 0.0
          ? delta_theoretical(rep.lambda_m, rep.c_star, DeltaVariant::Step3,
                              options.lipschitz_c)
          : kNaN;
  if (options.delta_threshold) {
    rep.delta_threshold = *options.delta_threshold;
  } else {
    rep.delta_threshold = rep.delta_step2;
    if (std::isfinite(rep.delta_step3)) {
      rep.delta_threshold = std::max(rep.delta_threshold, rep.delta_step3);
    }
  }
  if (!(rep.delta_threshold >= 0.0)) {
    throw ValidationError("squeeze: delta threshold must be >= 0");
  }

  StepperConfig run_cfg = config;
  run_cfg.record_every = options.record_every;

  const int n = static_cast<int>(pairs.size());
  rep.pairs.resize(n);
  parallel_for(n, [&](int i) {
    PairResult pr = evolve_pair(pairs[i].first, pairs[i].second, params,
                                options.t_star, run_cfg, options.m, false);
    SqueezePairRecord& rec = rep.pairs[i];
    if (pr.diff.blew_up) {
      throw BlowupError("squeeze: pair " + std::to_string(i) + " blew up",
                        pr.diff.blowup_time);
    }
    rec.xi0 = pr.diff.xi.front();
    rec.xi1 = pr.diff.xi.back();
    rec.p1 = pr.diff.p.back();
    rec.q1 = pr.diff.q.back();
    if (rec.xi0 > 0.0) {
      rec.delta_emp = rec.xi1 / rec.xi0;
      rec.cone_ok = rec.q1 <= rec.p1 + options.cone_slack;
      rec.contraction_ok = rec.delta_emp <= rep.delta_threshold;
      double worst = 0.0;
      for (std::size_t s = 0; s < pr.diff.times.size(); ++s) {
        double ceiling = std::exp(rep.c_star * pr.diff.times[s]) * rec.xi0;
        worst = std::max(worst, pr.diff.xi[s] / ceiling);
      }
      rec.max_gronwall_ratio = worst;
    } else {
      // xi = 0 satisfies both branches by convention.
      rec.delta_emp = 0.0;
      rec.cone_ok = true;
      rec.contraction_ok = true;
      rec.max_gronwall_ratio = 0.0;
    }
    rec.dichotomy_ok = rec.cone_ok || rec.contraction_ok;
    if (options.monitor_phi && options.lipschitz_c > 0.0 && rec.xi0 > 0.0) {
      PhiCheck pc = check_phi_series(pr.diff, rep.lambda_m, rep.c_m,
                                     options.phi_rel_slack, nullptr);
      rec.phi_windows = pc.windows;
      rec.phi_ok = pc.ok;
    }
  });

  if (options.inject_synthetic_violation) {
    SqueezePairRecord rec;
    rec.synthetic = true;
    rec.xi0 = 1.0;
    rec.xi1 = 1.0;
    rec.p1 = 0.0;
    rec.q1 = 1.0;
    rec.delta_emp = 1.0;
    rec.cone_ok = rec.q1 <= rec.p1 + options.cone_slack;
    rec.contraction_ok = rec.delta_emp <= rep.delta_threshold;
    rec.dichotomy_ok = rec.cone_ok || rec.contraction_ok;
    rec.max_gronwall_ratio = 0.0;
    rep.pairs.push_back(rec);
  }

  rep.verdict = true;
  rep.gronwall_ok = true;
  rep.phi_ok = true;
  for (const auto& rec : rep.pairs) {
    rep.verdict = rep.verdict && rec.dichotomy_ok;
    rep.max_gronwall_ratio =
        std::max(rep.max_gronwall_ratio, rec.max_gronwall_ratio);
    if (rec.max_gronwall_ratio > 1.0 + options.gronwall_slack) {
      rep.gronwall_ok = false;
    }
    rep.phi_ok = rep.phi_ok && rec.phi_ok;
    if (rec.contraction_ok && !rec.synthetic) {
      rep.max_contraction = std::max(rep.max_contraction, rec.delta_emp);
    }
  }
  return rep;
}

PhiSeries phi_monitor(const State& g0, const State& h0, int m, double window,
                      const HRParameters& params, const StepperConfig& config,
                      double lipschitz_c, double rel_slack) {
  require_same_basis(g0, h0);
  const BasisPtr& basis = g0.u.basis;
  if (m < 1 || m > basis->size()) {
    throw ValidationError("phi_monitor: cutoff m out of range");
  }
  if (!(lipschitz_c > 0.0)) {
    throw ValidationError("phi_monitor: Lipschitz constant must be positive");
  }
  if (!(window > 0.0)) {
    throw ValidationError("phi_monitor: window must be positive");
  }
  double lambda_m = basis->eigenvalue(m - 1);
  double c_m = lipschitz_c * (std::sqrt(lambda_m) + 1.0);
  PairResult pr = evolve_pair(g0, h0, params, window, config, m, false);
  if (pr.diff.blew_up) {
    throw BlowupError("phi_monitor: pair blew up", pr.diff.blowup_time);
  }
  PhiSeries series;
  check_phi_series(pr.diff, lambda_m, c_m, rel_slack, &series);
  return series;
}

LipschitzReport lipschitz_probe(const std::vector<std::pair<State, State>>& pairs,
                                const HRParameters& params, double t_final,
                                const StepperConfig& config) {
  if (pairs.empty()) throw ValidationError("lipschitz: empty pair ensemble");
  if (!(t_final > 0.0)) {
    throw ValidationError("lipschitz: horizon must be positive");
  }
  const int n = static_cast<int>(pairs.size());
  std::vector<PairSeries> series(n);
  parallel_for(n, [&](int i) {
    PairResult pr = evolve_pair(pairs[i].first, pairs[i].second, params,
                                t_final, config, 0, false);
    if (pr.diff.blew_up) {
      throw BlowupError("lipschitz: pair " + std::to_string(i) + " blew up",
                        pr.diff.blowup_time);
    }
    if (!(pr.diff.xi.front() > 0.0)) {
      throw ValidationError("lipschitz: pair " + std::to_string(i) +
                            " has identical initial states");
    }
    series[i] = std::move(pr.diff);
  });

  LipschitzReport rep;
  rep.c_star = monotone_constant(params);
  rep.c_coupled = coupled_constant(params);
  rep.times = series[0].times;
  rep.max_ratio.assign(rep.times.size(), 0.0);
  rep.ceiling.resize(rep.times.size());
  for (std::size_t s = 0; s < rep.times.size(); ++s) {
    for (int i = 0; i < n; ++i) {
      rep.max_ratio[s] =
          std::max(rep.max_ratio[s], series[i].xi[s] / series[i].xi.front());
    }
    rep.ceiling[s] = std::min(std::exp(rep.c_star * rep.times[s]),
                              std::exp(0.5 * rep.c_coupled * rep.times[s]));
    rep.worst_margin =
        std::max(rep.worst_margin, rep.max_ratio[s] / rep.ceiling[s]);
  }
  rep.ok = rep.worst_margin <= 1.0 + 1e-6;
  return rep;
}

TimeLipschitzReport time_lipschitz_probe(const std::vector<State>& ensemble,
                                         const HRParameters& params,
                                         double t_star,
                                         const StepperConfig& config,
                                         double c_e) {
  if (ensemble.empty()) {
    throw ValidationError("time_lipschitz: empty ensemble");
  }
  if (!(t_star > 0.0)) {
    throw ValidationError("time_lipschitz: t_star must be positive");
  }
  const int n = static_cast<int>(ensemble.size());
  std::vector<Trajectory> trajs(n);
  parallel_for(n, [&](int i) {
    trajs[i] = evolve(ensemble[i], params, t_star, config, true);
    if (trajs[i].blew_up) {
      throw BlowupError("time_lipschitz: trajectory " + std::to_string(i) +
                            " blew up",
                        trajs[i].blowup_time);
    }
  });

  TimeLipschitzReport rep;
  rep.c_e = c_e;
  for (const auto& traj : trajs) {
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      rep.g_bound = std::max(rep.g_bound, traj.e_norm(s));
    }
  }
  rep.l_bound = (1.0 + c_e) * rep.g_bound * rep.g_bound +
                (params.J + params.alpha + params.q * std::abs(params.c));

  for (const auto& traj : trajs) {
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      for (std::size_t j = i + 1; j < traj.times.size(); ++j) {
        State diff = traj.states[j];
        axpy(-1.0, traj.states[i], diff);
        double dist = norm(diff, NormKind::L2);
        double gap = traj.times[j] - traj.times[i];
        rep.max_ratio = std::max(rep.max_ratio, dist / gap);
      }
    }
  }
  rep.worst_margin = rep.max_ratio / rep.l_bound;
  rep.ok = rep.worst_margin <= 1.0 + 1e-6;
  return rep;
}

double dimension_bound(const DimensionBoundInputs& in) {
  if (in.n_rank < 1) {
    throw ValidationError("dimension: n_rank must be >= 1");
  }
  if (!(in.lipschitz > 0.0)) {
    throw ValidationError("dimension: lipschitz must be positive");
  }
  if (!(in.theta > 0.0 && in.theta < 1.0)) {
    throw ValidationError("dimension: theta must lie in (0, 1)");
  }
  double ratio = std::log(2.0 * std::sqrt(2.0) * in.lipschitz / in.theta + 1.0) /
                 (-std::log(in.theta));
  return in.n_rank * std::max(1.0, ratio);
}

ThetaScan dimension_bound_scan(int n_rank, double lipschitz, int grid_points) {
  if (grid_points < 1) {
    throw ValidationError("dimension: theta grid needs >= 1 point");
  }
  ThetaScan scan;
  scan.best_bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    double theta =
        grid_points == 1
            ? 0.5
            : 0.01 + (0.99 - 0.01) * static_cast<double>(i) / (grid_points - 1);
    double bound = dimension_bound({n_rank, lipschitz, theta});
    scan.thetas.push_back(theta);
    scan.bounds.push_back(bound);
    if (bound < scan.best_bound) {
      scan.best_bound = bound;
      scan.best_theta = theta;
    }
  }
  return scan;
}

DeterminingReport determining_modes_experiment(
    const std::vector<std::pair<State, State>>& pairs, int m, double horizon,
    const HRParameters& params, const StepperConfig& config, double tol_p,
    double tol_full, double window_fraction) {
  if (pairs.empty()) throw ValidationError("determining: empty pair ensemble");
  const BasisPtr& basis = pairs[0].first.u.basis;
  if (m < 1 || m > basis->size()) {
    throw ValidationError("determining: cutoff m out of range");
  }
  if (!(horizon > 0.0)) {
    throw ValidationError("determining: horizon must be positive");
  }
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ValidationError("determining: window_fraction must lie in (0, 1]");
  }

  DeterminingReport rep;
  rep.m = m;
  rep.horizon = horizon;
  rep.window_fraction = window_fraction;
  rep.tol_p = tol_p;
  rep.tol_full = tol_full;
  rep.pairs.resize(pairs.size());

  const double window_start = horizon * (1.0 - window_fraction);
  parallel_for(static_cast<int>(pairs.size()), [&](int i) {
    PairResult pr = evolve_pair(pairs[i].first, pairs[i].second, params,
                                horizon, config, m, false);
    if (pr.diff.blew_up) {
      throw BlowupError("determining: pair " + std::to_string(i) + " blew up",
                        pr.diff.blowup_time);
    }
    DeterminingPairRecord& rec = rep.pairs[i];
    for (std::size_t s = 0; s < pr.diff.times.size(); ++s) {
      if (pr.diff.times[s] < window_start) continue;
      rec.tail_p_sup = std::max(rec.tail_p_sup, pr.diff.p[s]);
      rec.tail_full_sup = std::max(rec.tail_full_sup, pr.diff.xi[s]);
    }
    rec.premise = rec.tail_p_sup <= tol_p;
    rec.conclusion = rec.tail_full_sup <= tol_full;
  });

  for (const auto& rec : rep.pairs) {
    if (rec.premise) {
      rep.premise_count += 1;
      if (!rec.conclusion) rep.counterexamples += 1;
    }
  }
  rep.ok = rep.counterexamples == 0;
  return rep;
}

EmbeddingConstants embedding_constants(const BasisPtr& basis, int samples,
                                       std::uint64_t seed) {
  if (samples < 1) {
    throw ValidationError("embedding: need at least one sample");
  }
  EmbeddingConstants out;
  auto absorb = [&](const ScalarField& f) {
    double h1 = norm(f, NormKind::H1);
    if (!(h1 > 0.0)) return;
    out.delta1 = std::max(out.delta1, norm(f, NormKind::L4) / h1);
    out.delta2 = std::max(out.delta2, norm(f, NormKind::L6) / h1);
    out.samples += 1;
  };

  // Canonical fields: the constant mode (attains |Omega|^{-1/4} for L4),
  // each pure mode, and a smooth decaying profile.
  for (int k = 0; k < basis->size(); ++k) {
    ScalarField f = zero_field(basis);
    f.c[k] = 1.0;
    absorb(f);
  }
  {
    ScalarField f = zero_field(basis);
    for (int k = 0; k < basis->size(); ++k) {
      f.c[k] = std::pow(1.0 + basis->eigenvalue(k), -1.0);
    }
    absorb(f);
  }

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    double decay = rng.uniform(0.0, 3.0);
    absorb(random_field(basis, rng, decay));
  }
  return out;
}

}  // namespace hrlab
