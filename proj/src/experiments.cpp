#include "hrlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <tuple>

namespace hrlab {

namespace {

using nlohmann::json;

struct RunContext {
  const ExperimentConfig& cfg;
  std::filesystem::path dir;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  std::string path(const std::string& name) {
    outputs.push_back(name);
    return (dir / name).string();
  }
};

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open for writing: " + path);
  f << doc.dump(2) << "\n";
}

void write_manifest(RunContext& rc) {
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              rc.started)
                    .count();
  json doc = {{"command", rc.cfg.experiment},
              {"hrlab_version", kVersion},
              {"compiler", __VERSION__},
              {"seed", rc.cfg.seed},
              {"config", echo_config(rc.cfg)},
              {"outputs", rc.outputs},
              {"wall_time_seconds", wall}};
  std::ofstream f(rc.dir / "manifest.json");
  if (!f) throw ValidationError("cannot write manifest");
  f << doc.dump(2) << "\n";
}

json report_envelope(const RunContext& rc, const char* kind) {
  return {{"report", kind},
          {"hrlab_version", kVersion},
          {"seed", rc.cfg.seed},
          {"config", echo_config(rc.cfg)}};
}

State make_initial(const InitialSpec& spec, const BasisPtr& basis, Rng& rng) {
  switch (spec.kind) {
    case InitialSpec::Kind::Zero:
      return zero_state(basis);
    case InitialSpec::Kind::Constant: {
      State g = zero_state(basis);
      double vol = basis->domain().volume();
      g.u.c[0] = spec.value[0] * std::sqrt(vol);
      g.v.c[0] = spec.value[1] * std::sqrt(vol);
      g.w.c[0] = spec.value[2] * std::sqrt(vol);
      return g;
    }
    case InitialSpec::Kind::Random:
      return random_state_with_norm(basis, rng, spec.e_norm, NormKind::H1,
                                    spec.decay);
  }
  throw ValidationError("initial: unknown kind");
}

std::vector<State> absorb_ensemble(const AbsorbCfg& a, const BasisPtr& basis,
                                   Rng& rng) {
  std::vector<State> initials;
  initials.reserve(a.ensemble);
  for (int i = 0; i < a.ensemble; ++i) {
    double target = a.initial_norm_min +
                    (a.initial_norm_max - a.initial_norm_min) *
                        (a.ensemble == 1
                             ? 0.5
                             : static_cast<double>(i) / (a.ensemble - 1));
    initials.push_back(
        random_state_with_norm(basis, rng, target, NormKind::H1, 1.5));
  }
  return initials;
}

StepperConfig absorb_stepper(const AbsorbCfg& a, const StepperConfig& base) {
  StepperConfig cfg = base;
  if (a.dt > 0.0) cfg.dt = a.dt;
  return cfg;
}

std::optional<WarmupSpec> absorb_warmup(const AbsorbCfg& a) {
  if (!a.warmup) return std::nullopt;
  return WarmupSpec{a.warmup_dt, a.warmup_duration};
}

// Tail snapshots (post-entry states) of an absorption run, for use as the
// bounded set M in downstream experiments.
std::vector<State> collect_tail_states(const std::vector<Trajectory>& trajs,
                                       double horizon, double tail_fraction) {
  std::vector<State> out;
  const double tail_start = horizon * (1.0 - tail_fraction);
  for (const auto& traj : trajs) {
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      if (traj.times[s] >= tail_start) out.push_back(traj.states[s]);
    }
  }
  return out;
}

// Snapshots for squeeze/lipschitz/determine: either a prior absorb dump or
// an inline absorption phase.
std::vector<State> gather_snapshots(const std::string& states_file,
                                    const AbsorbCfg& a, const BasisPtr& basis,
                                    const HRParameters& params,
                                    const StepperConfig& stepper, Rng& rng,
                                    std::ostream& log) {
  if (!states_file.empty()) {
    if (!std::filesystem::exists(states_file)) {
      throw ValidationError("missing prerequisite artifact: states_file '" +
                            states_file + "' (run the absorb command first)");
    }
    TrajectoryDump dump = read_trajectory_dump(states_file, basis);
    if (dump.states.empty()) {
      throw ValidationError("states_file '" + states_file + "' holds no states");
    }
    log << "loaded " << dump.states.size() << " states from " << states_file
        << "\n";
    return dump.states;
  }
  std::vector<State> initials = absorb_ensemble(a, basis, rng);
  StepperConfig phase = absorb_stepper(a, stepper);
  // Snapshots only need the tail, sampled coarsely.
  long steps = std::lround(a.horizon / phase.dt);
  phase.record_every = static_cast<int>(std::max(1L, steps / 256));
  std::vector<Trajectory> trajs;
  AbsorptionReport rep =
      absorption_probe(initials, params, a.horizon, phase, a.tail_fraction,
                       absorb_warmup(a), &trajs);
  if (rep.any_blowup) {
    throw BlowupError("inline absorption phase blew up", rep.horizon);
  }
  std::vector<State> snaps =
      collect_tail_states(trajs, a.horizon, a.tail_fraction);
  log << "inline absorption: q_estimate " << rep.q_estimate << ", "
      << snaps.size() << " tail snapshots\n";
  return snaps;
}

// Random H-normalized direction; optionally restricted to modes above m.
State perturbation_direction(const BasisPtr& basis, Rng& rng, double size,
                             int high_from) {
  State dir = random_state(basis, rng, 0.5);
  if (high_from > 0) dir = project(dir, high_from, Band::High);
  double n = norm(dir, NormKind::L2);
  if (!(n > 0.0)) throw ValidationError("perturbation direction vanished");
  scale(dir, size / n);
  return dir;
}

std::vector<std::pair<State, State>> build_pairs(
    const std::vector<State>& snapshots, int count, double perturbation,
    int high_from, const BasisPtr& basis, Rng& rng) {
  if (snapshots.empty()) {
    throw ValidationError("no post-absorption snapshots available");
  }
  std::vector<std::pair<State, State>> pairs;
  pairs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const State& base =
        snapshots[static_cast<std::size_t>(rng.raw() % snapshots.size())];
    State other = base;
    axpy(1.0, perturbation_direction(basis, rng, perturbation, high_from),
         other);
    pairs.emplace_back(base, std::move(other));
  }
  return pairs;
}

// Largest collocation L4/L6 norms of the u component over a state set
// (the ensemble estimates of the paper-level bounds N1, N2).
std::pair<double, double> measure_n1_n2(const std::vector<State>& states) {
  double n1 = 0.0, n2 = 0.0;
  for (const State& g : states) {
    n1 = std::max(n1, norm(g.u, NormKind::L4));
    n2 = std::max(n2, norm(g.u, NormKind::L6));
  }
  return {n1, n2};
}

// ---------------------------------------------------------------------------

int run_simulate(RunContext& rc, std::ostream& log) {
  const ExperimentConfig& cfg = rc.cfg;
  const SimulateCfg& sim = *cfg.simulate;
  BasisPtr basis = SpectralBasis::build(cfg.domain, cfg.m_max);
  Rng rng(cfg.seed);
  State g0 = make_initial(sim.initial, basis, rng);
  Trajectory traj =
      evolve(g0, cfg.params, sim.t_final, cfg.stepper, sim.dump_states);
  write_trajectory_csv(rc.path("trajectory.csv"), traj);
  if (sim.dump_states) {
    write_trajectory_dump(rc.path("trajectory.bin"), traj);
  }
  write_manifest(rc);
  if (traj.blew_up) {
    log << "blow-up at t = " << traj.blowup_time
        << " (last valid time); reduce dt\n";
    return 3;
  }
  log << "simulate: " << traj.times.size() << " samples to t = "
      << traj.times.back() << "\n";
  return 0;
}

int run_ode(RunContext& rc, std::ostream& log) {
  const ExperimentConfig& cfg = rc.cfg;
  const OdeCfg& ode = *cfg.ode;
  OdeTrajectory traj;
  try {
    traj = integrate_ode_rk4(ode.initial, cfg.params, ode.t_final,
                             cfg.stepper.dt, cfg.stepper.record_every);
  } catch (const BlowupError& e) {
    log << "blow-up at t = " << e.last_valid_time() << "\n";
    write_manifest(rc);
    return 3;
  }

  {
    std::FILE* f = std::fopen(rc.path("ode_series.csv").c_str(), "w");
    if (!f) throw ValidationError("cannot write ode_series.csv");
    std::fputs("t,u,v,w\n", f);
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", traj.t[i], traj.y[i][0],
                   traj.y[i][1], traj.y[i][2]);
    }
    std::fclose(f);
  }

  std::vector<double> u(traj.t.size());
  for (std::size_t i = 0; i < traj.t.size(); ++i) u[i] = traj.y[i][0];
  std::vector<Burst> bursts =
      spike_burst_table(traj.t, u, ode.spike_threshold, ode.quiescent_gap);
  {
    std::FILE* f = std::fopen(rc.path("bursts.csv").c_str(), "w");
    if (!f) throw ValidationError("cannot write bursts.csv");
    std::fputs("t_start,t_end,spikes\n", f);
    for (const Burst& b : bursts) {
      std::fprintf(f, "%.17g,%.17g,%d\n", b.t_start, b.t_end, b.spikes);
    }
    std::fclose(f);
  }
  write_manifest(rc);
  log << "ode: " << traj.t.size() << " samples, " << bursts.size()
      << " bursts\n";
  return 0;
}

int run_absorb(RunContext& rc, std::ostream& log) {
  const ExperimentConfig& cfg = rc.cfg;
  const AbsorbCfg& a = *cfg.absorb;
  BasisPtr basis = SpectralBasis::build(cfg.domain, cfg.m_max);
  Rng rng(cfg.seed);
  std::vector<State> initials = absorb_ensemble(a, basis, rng);
  std::vector<Trajectory> trajs;
  AbsorptionReport rep = absorption_probe(
      initials, cfg.params, a.horizon, absorb_stepper(a, cfg.stepper),
      a.tail_fraction, absorb_warmup(a), &trajs, a.dump_tail_states);

  json doc = report_envelope(rc, "absorb");
  doc["result"] = {{"q_estimate", rep.q_estimate},
                   {"ensemble_size", static_cast<int>(initials.size())},
                   {"horizon", rep.horizon},
                   {"tail_fraction", rep.tail_fraction},
                   {"warmup_duration", rep.warmup_duration},
                   {"all_entered", rep.all_entered},
                   {"any_blowup", rep.any_blowup},
                   {"entry_times", rep.entry_times},
                   {"tail_sup", rep.tail_sup},
                   {"initial_e_norms", rep.initial_e}};
  doc["verdict"] = rep.any_blowup ? "blow-up"
                 : rep.all_entered ? "pass"
                                   : "horizon-too-short";
  write_json_file(rc.path("absorb_report.json"), doc);

  {
    std::FILE* f = std::fopen(rc.path("absorb_norms.csv").c_str(), "w");
    if (!f) throw ValidationError("cannot write absorb_norms.csv");
    std::fputs("traj,t,norm_E,norm_H\n", f);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      for (std::size_t s = 0; s < trajs[i].times.size(); ++s) {
        std::fprintf(f, "%zu,%.17g,%.17g,%.17g\n", i, trajs[i].times[s],
                     trajs[i].e_norm(s), trajs[i].h_norm(s));
      }
    }
    std::fclose(f);
  }

  if (a.dump_tail_states && !rep.any_blowup) {
    Trajectory tail;
    const double tail_start = a.horizon * (1.0 - a.tail_fraction);
    for (const auto& traj : trajs) {
      for (std::size_t s = 0; s < traj.times.size(); ++s) {
        if (traj.times[s] < tail_start) continue;
        tail.times.push_back(traj.times[s]);
        tail.states.push_back(traj.states[s]);
        tail.norms.push_back(traj.norms[s]);
      }
    }
    write_trajectory_dump(rc.path("tail_states.bin"), tail);
  }

  write_manifest(rc);
  if (rep.any_blowup) {
    log << "absorption: blow-up in ensemble\n";
    return 3;
  }
  if (!rep.all_entered) {
    log << "warning: some trajectories never entered the probed ball "
           "(horizon too short?)\n";
  }
  log << "absorption: q_estimate = " << rep.q_estimate << "\n";
  return 0;
}

int run_squeeze(RunContext& rc, std::ostream& log) {
  const ExperimentConfig& cfg = rc.cfg;
  const SqueezeCfg& sq = *cfg.squeeze;
  BasisPtr basis = SpectralBasis::build(cfg.domain, cfg.m_max);
  Rng rng(cfg.seed);

  std::vector<State> snaps =
      gather_snapshots(sq.states_file, sq.absorb, basis, cfg.params,
                       cfg.stepper, rng, log);

  double lipschitz_c = sq.lipschitz_c;
  double n1 = 0.0, n2 = 0.0;
  EmbeddingConstants emb;
  if (lipschitz_c <= 0.0) {
    std::tie(n1, n2) = measure_n1_n2(snaps);
    emb = embedding_constants(basis, sq.embedding_samples,
                              cfg.seed ^ 0x9e3779b97f4a7c15ull);
    lipschitz_c =
        lipschitz_E_to_H(cfg.params, n1, n2, emb.delta1, emb.delta2);
    log << "estimated C_E = " << lipschitz_c << " (N1 " << n1 << ", N2 " << n2
        << ", delta1 " << emb.delta1 << ", delta2 " << emb.delta2 << ")\n";
  }
  int m = sq.m > 0 ? sq.m : select_m(lipschitz_c, *basis);
  log << "cutoff m = " << m << " (lambda_m = " << basis->eigenvalue(m - 1)
      << ")\n";

  std::vector<std::pair<State, State>> pairs =
      build_pairs(snaps, sq.pairs, sq.perturbation, 0, basis, rng);

  SqueezeOptions opt;
  opt.m = m;
  opt.t_star = sq.t_star;
  opt.lipschitz_c = lipschitz_c;
  opt.delta_threshold = sq.delta_threshold;
  opt.monitor_phi = sq.monitor_phi;
  opt.record_every = cfg.stepper.record_every;
  opt.inject_synthetic_violation = sq.inject_synthetic_violation;
  SqueezeReport rep = squeeze_test(pairs, opt, cfg.params, cfg.stepper);

  json doc = report_envelope(rc, "squeeze");
  json jp = json::array();
  for (const auto& rec : rep.pairs) {
    jp.push_back({{"xi0", rec.xi0},
                  {"xi1", rec.xi1},
                  {"p1", rec.p1},
                  {"q1", rec.q1},
                  {"delta_emp", rec.delta_emp},
                  {"cone_ok", rec.cone_ok},
                  {"contraction_ok", rec.contraction_ok},
                  {"dichotomy_ok", rec.dichotomy_ok},
                  {"synthetic", rec.synthetic},
                  {"max_gronwall_ratio", rec.max_gronwall_ratio},
                  {"phi_windows", rec.phi_windows},
                  {"phi_ok", rec.phi_ok}});
  }
  doc["result"] = {{"m", rep.m},
                   {"n_rank", rep.n_rank},
                   {"t_star", rep.t_star},
                   {"lambda_m", rep.lambda_m},
                   {"lambda_m_plus_1", rep.lambda_m1},
                   {"c_star", rep.c_star},
                   {"lipschitz_c", rep.lipschitz_c},
                   {"c_m", rep.c_m},
                   {"n1", n1},
                   {"n2", n2},
                   {"delta1", emb.delta1},
                   {"delta2", emb.delta2},
                   {"delta_step2", rep.delta_step2},
                   {"delta_step3", rep.delta_step3},
                   {"delta_threshold", rep.delta_threshold},
                   {"max_contraction", rep.max_contraction},
                   {"max_gronwall_ratio", rep.max_gronwall_ratio},
                   {"gronwall_ok", rep.gronwall_ok},
                   {"phi_ok", rep.phi_ok},
                   {"pairs", jp}};
  bool pass = rep.verdict && rep.gronwall_ok && rep.phi_ok;
  doc["verdict"] = pass ? "pass" : "fail";
  write_json_file(rc.path("squeeze_report.json"), doc);

  {
    std::FILE* f = std::fopen(rc.path("squeeze_pairs.csv").c_str(), "w");
    if (!f) throw ValidationError("cannot write squeeze_pairs.csv");
    std::fputs(
        "pair,synthetic,xi0,xi1,p1,q1,delta_emp,cone_ok,contraction_ok,"
        "dichotomy_ok,max_gronwall_ratio,phi_windows,phi_ok\n",
        f);
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
      const auto& r = rep.pairs[i];
      std::fprintf(f, "%zu,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d,%.17g,%d,%d\n",
                   i, r.synthetic ? 1 : 0, r.xi0, r.xi1, r.p1, r.q1,
                   r.delta_emp, r.cone_ok ? 1 : 0, r.contraction_ok ? 1 : 0,
                   r.dichotomy_ok ? 1 : 0, r.max_gronwall_ratio,
                   r.phi_windows, r.phi_ok ? 1 : 0);
    }
    std::fclose(f);
  }

  write_manifest(rc);
  log << "squeeze: verdict " << (pass ? "pass" : "fail") << " over "
      << rep.pairs.size() << " pairs\n";
  return pass ? 0 : 4;
}

int run_lipschitz(RunContext& rc, std::ostream& log) {
  const ExperimentConfig& cfg = rc.cfg;
  const LipschitzCfg& lc = *cfg.lipschitz;
  BasisPtr basis = SpectralBasis::build(cfg.domain, cfg.m_max);
  Rng rng(cfg.seed);
  std::vector<State> snaps = gather_snapshots(
      lc.states_file, lc.absorb, basis, cfg.params, cfg.stepper, rng, log);
  std::vector<std::pair<State, State>> pairs =
      build_pairs(snaps, lc.pairs, lc.perturbation, 0, basis, rng);
  LipschitzReport rep =
      lipschitz_probe(pairs, cfg.params, lc.t_final, cfg.stepper);

  json doc = report_envelope(rc, "lipschitz");
  doc["result"] = {{"c_star", rep.c_star},
                   {"c_coupled", rep.c_coupled},
                   {"worst_margin", rep.worst_margin},
                   {"pairs", lc.pairs},
                   {"t_final", lc.t_final},
                   {"ok", rep.ok}};
  doc["verdict"] = rep.ok ? "pass" : "fail";
  write_json_file(rc.path("lipschitz_report.json"), doc);
  {
    std::FILE* f = std::fopen(rc.path("lipschitz_series.csv").c_str(), "w");
    if (!f) throw ValidationError("cannot write lipschitz_series.csv");
    std::fputs("t,max_ratio,ceiling\n", f);
    for (std::size_t s = 0; s < rep.times.size(); ++s) {
      std::fprintf(f, "%.17g,%.17g,%.17g\n", rep.times[s], rep.max_ratio[s],
                   rep.ceiling[s]);
    }
    std::fclose(f);
  }
  write_manifest(rc);
  log << "lipschitz: worst margin " << rep.worst_margin << "\n";
  return rep.ok ? 0 : 4;
}

int run_determine(RunContext& rc, std::ostream& log) {
  const ExperimentConfig& cfg = rc.cfg;
  const DetermineCfg& dc = *cfg.determine;
  BasisPtr basis = SpectralBasis::build(cfg.domain, cfg.m_max);
  if (dc.m > basis->size()) {
    throw ValidationError("determine: m exceeds m_max");
  }
  Rng rng(cfg.seed);
  std::vector<State> snaps = gather_snapshots(
      dc.states_file, dc.absorb, basis, cfg.params, cfg.stepper, rng, log);
  std::vector<std::pair<State, State>> pairs =
      build_pairs(snaps, dc.pairs, dc.perturbation, dc.m, basis, rng);
  DeterminingReport rep = determining_modes_experiment(
      pairs, dc.m, dc.horizon, cfg.params, cfg.stepper, dc.tol_p, dc.tol_full,
      dc.window_fraction);

  json doc = report_envelope(rc, "determine");
  json jp = json::array();
  for (const auto& rec : rep.pairs) {
    jp.push_back({{"tail_p_sup", rec.tail_p_sup},
                  {"tail_full_sup", rec.tail_full_sup},
                  {"premise", rec.premise},
                  {"conclusion", rec.conclusion},
                  {"vacuous", !rec.premise}});
  }
  doc["result"] = {{"m", rep.m},
                   {"horizon", rep.horizon},
                   {"window_fraction", rep.window_fraction},
                   {"tol_p", rep.tol_p},
                   {"tol_full", rep.tol_full},
                   {"premise_count", rep.premise_count},
                   {"counterexamples", rep.counterexamples},
                   {"pairs", jp},
                   {"ok", rep.ok}};
  doc["verdict"] = rep.ok ? "pass" : "fail";
  write_json_file(rc.path("determine_report.json"), doc);
  {
    std::FILE* f = std::fopen(rc.path("determine_pairs.csv").c_str(), "w");
    if (!f) throw ValidationError("cannot write determine_pairs.csv");
    std::fputs("pair,tail_p_sup,tail_full_sup,premise,conclusion\n", f);
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
      const auto& r = rep.pairs[i];
      std::fprintf(f, "%zu,%.17g,%.17g,%d,%d\n", i, r.tail_p_sup,
                   r.tail_full_sup, r.premise ? 1 : 0, r.conclusion ? 1 : 0);
    }
    std::fclose(f);
  }
  write_manifest(rc);
  if (rep.premise_count == 0) {
    log << "warning: every pair was vacuous (premise never satisfied)\n";
  }
  log << "determining modes: " << rep.premise_count << " premises, "
      << rep.counterexamples << " counterexamples\n";
  return rep.ok ? 0 : 4;
}

int run_dimension(RunContext& rc, std::ostream& log) {
  const ExperimentConfig& cfg = rc.cfg;
  const DimensionCfg& dc = *cfg.dimension;
  json doc = report_envelope(rc, "dimension");
  if (dc.theta) {
    double bound = dimension_bound({dc.n_rank, dc.lipschitz, *dc.theta});
    doc["result"] = {{"n_rank", dc.n_rank},
                     {"lipschitz", dc.lipschitz},
                     {"theta", *dc.theta},
                     {"bound", bound}};
    log << "dimension bound = " << bound << "\n";
  } else {
    ThetaScan scan = dimension_bound_scan(dc.n_rank, dc.lipschitz,
                                          dc.theta_grid);
    doc["result"] = {{"n_rank", dc.n_rank},
                     {"lipschitz", dc.lipschitz},
                     {"best_theta", scan.best_theta},
                     {"best_bound", scan.best_bound}};
    std::FILE* f = std::fopen(rc.path("theta_scan.csv").c_str(), "w");
    if (!f) throw ValidationError("cannot write theta_scan.csv");
    std::fputs("theta,bound\n", f);
    for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
      std::fprintf(f, "%.17g,%.17g\n", scan.thetas[i], scan.bounds[i]);
    }
    std::fclose(f);
    log << "dimension bound (best over theta grid) = " << scan.best_bound
        << " at theta = " << scan.best_theta << "\n";
  }
  doc["verdict"] = "pass";
  write_json_file(rc.path("dimension_report.json"), doc);
  write_manifest(rc);
  return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  RunContext rc{cfg, std::filesystem::path(cfg.output_dir), {}, {}};
  rc.started = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(rc.dir, ec);
  if (ec) {
    throw ValidationError("cannot create output_dir '" + cfg.output_dir +
                          "': " + ec.message());
  }
  if (cfg.experiment == "simulate") return run_simulate(rc, log);
  if (cfg.experiment == "ode") return run_ode(rc, log);
  if (cfg.experiment == "absorb") return run_absorb(rc, log);
  if (cfg.experiment == "squeeze") return run_squeeze(rc, log);
  if (cfg.experiment == "lipschitz") return run_lipschitz(rc, log);
  if (cfg.experiment == "determine") return run_determine(rc, log);
  if (cfg.experiment == "dimension") return run_dimension(rc, log);
  throw ValidationError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace hrlab
