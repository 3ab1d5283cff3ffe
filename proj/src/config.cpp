#include "hrlab/config.hpp"

#include <fstream>
#include <set>

namespace hrlab {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) {
    throw ValidationError(ctx + ": expected a JSON object");
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& ctx) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(ctx + ": unknown key '" + item.key() + "'");
    }
  }
}

double get_double(const json& j, const char* key, double fallback,
                  const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw ValidationError(ctx + ": '" + key + "' must be a number");
  }
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback,
            const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw ValidationError(ctx + ": '" + key + "' must be an integer");
  }
  return j[key].get<int>();
}

bool get_bool(const json& j, const char* key, bool fallback,
              const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) {
    throw ValidationError(ctx + ": '" + key + "' must be a boolean");
  }
  return j[key].get<bool>();
}

std::string get_string(const json& j, const char* key,
                       const std::string& fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) {
    throw ValidationError(ctx + ": '" + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

std::array<double, 3> get_triple(const json& j, const char* key,
                                 std::array<double, 3> fallback,
                                 const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  const json& a = j[key];
  if (!a.is_array() || a.size() != 3 || !a[0].is_number() ||
      !a[1].is_number() || !a[2].is_number()) {
    throw ValidationError(ctx + ": '" + key +
                          "' must be an array of 3 numbers");
  }
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

HRParameters parse_params(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  check_keys(j,
             {"preset", "d1", "d2", "d3", "a", "b", "alpha", "beta", "q", "r",
              "c", "J"},
             ctx);
  HRParameters p;
  std::string preset = get_string(j, "preset", "paper-typical", ctx);
  if (preset == "paper-typical") {
    p = HRParameters::typical();
  } else {
    throw ValidationError(ctx + ": unknown preset '" + preset + "'");
  }
  p.d1 = get_double(j, "d1", p.d1, ctx);
  p.d2 = get_double(j, "d2", p.d2, ctx);
  p.d3 = get_double(j, "d3", p.d3, ctx);
  p.a = get_double(j, "a", p.a, ctx);
  p.b = get_double(j, "b", p.b, ctx);
  p.alpha = get_double(j, "alpha", p.alpha, ctx);
  p.beta = get_double(j, "beta", p.beta, ctx);
  p.q = get_double(j, "q", p.q, ctx);
  p.r = get_double(j, "r", p.r, ctx);
  p.c = get_double(j, "c", p.c, ctx);
  p.J = get_double(j, "J", p.J, ctx);
  p.validate();
  return p;
}

DomainSpec parse_domain(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  check_keys(j, {"lengths", "grid_points"}, ctx);
  DomainSpec d;
  if (!j.contains("lengths") || !j.contains("grid_points")) {
    throw ValidationError(ctx + ": needs 'lengths' and 'grid_points'");
  }
  for (const auto& x : j["lengths"]) {
    if (!x.is_number()) {
      throw ValidationError(ctx + ": 'lengths' must hold numbers");
    }
    d.lengths.push_back(x.get<double>());
  }
  for (const auto& x : j["grid_points"]) {
    if (!x.is_number_integer()) {
      throw ValidationError(ctx + ": 'grid_points' must hold integers");
    }
    d.grid_points.push_back(x.get<int>());
  }
  d.validate();
  return d;
}

StepperConfig parse_stepper(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  check_keys(j, {"dt", "scheme", "record_every", "blowup_norm", "linear_only"},
             ctx);
  StepperConfig s;
  s.dt = get_double(j, "dt", s.dt, ctx);
  s.scheme = scheme_from_string(
      get_string(j, "scheme", scheme_to_string(s.scheme), ctx));
  s.record_every = get_int(j, "record_every", s.record_every, ctx);
  s.blowup_norm = get_double(j, "blowup_norm", s.blowup_norm, ctx);
  s.linear_only = get_bool(j, "linear_only", s.linear_only, ctx);
  s.validate();
  return s;
}

InitialSpec parse_initial(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  check_keys(j, {"type", "value", "e_norm", "decay"}, ctx);
  InitialSpec spec;
  std::string type = get_string(j, "type", "zero", ctx);
  if (type == "zero") {
    spec.kind = InitialSpec::Kind::Zero;
  } else if (type == "constant") {
    spec.kind = InitialSpec::Kind::Constant;
    spec.value = get_triple(j, "value", spec.value, ctx);
  } else if (type == "random") {
    spec.kind = InitialSpec::Kind::Random;
    spec.e_norm = get_double(j, "e_norm", spec.e_norm, ctx);
    spec.decay = get_double(j, "decay", spec.decay, ctx);
  } else {
    throw ValidationError(ctx + ": unknown initial type '" + type + "'");
  }
  return spec;
}

AbsorbCfg parse_absorb(const json& j, AbsorbCfg cfg, const std::string& ctx) {
  require_object(j, ctx);
  check_keys(j,
             {"ensemble", "horizon", "tail_fraction", "initial_norm_min",
              "initial_norm_max", "dt", "warmup", "warmup_dt",
              "warmup_duration", "dump_tail_states"},
             ctx);
  cfg.ensemble = get_int(j, "ensemble", cfg.ensemble, ctx);
  cfg.horizon = get_double(j, "horizon", cfg.horizon, ctx);
  cfg.tail_fraction = get_double(j, "tail_fraction", cfg.tail_fraction, ctx);
  cfg.initial_norm_min =
      get_double(j, "initial_norm_min", cfg.initial_norm_min, ctx);
  cfg.initial_norm_max =
      get_double(j, "initial_norm_max", cfg.initial_norm_max, ctx);
  cfg.dt = get_double(j, "dt", cfg.dt, ctx);
  cfg.warmup = get_bool(j, "warmup", cfg.warmup, ctx);
  cfg.warmup_dt = get_double(j, "warmup_dt", cfg.warmup_dt, ctx);
  cfg.warmup_duration =
      get_double(j, "warmup_duration", cfg.warmup_duration, ctx);
  cfg.dump_tail_states =
      get_bool(j, "dump_tail_states", cfg.dump_tail_states, ctx);
  if (cfg.ensemble < 1) {
    throw ValidationError(ctx + ": 'ensemble' must be >= 1");
  }
  if (!(cfg.horizon > 0.0)) {
    throw ValidationError(ctx + ": 'horizon' must be positive");
  }
  if (cfg.initial_norm_min < 0.0 ||
      cfg.initial_norm_max < cfg.initial_norm_min) {
    throw ValidationError(ctx + ": bad initial norm range");
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::string& context) {
  require_object(doc, context);
  check_keys(doc,
             {"experiment", "seed", "output_dir", "params", "domain", "m_max",
              "stepper", "simulate", "ode", "absorb", "squeeze", "lipschitz",
              "determine", "dimension"},
             context);

  ExperimentConfig cfg;
  cfg.experiment = get_string(doc, "experiment", "", context);
  static const std::set<std::string> kExperiments = {
      "simulate", "ode", "absorb", "squeeze",
      "lipschitz", "determine", "dimension"};
  if (!kExperiments.count(cfg.experiment)) {
    throw ValidationError(context +
                          ": 'experiment' must name one of simulate, ode, "
                          "absorb, squeeze, lipschitz, determine, dimension");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw ValidationError(context + ": 'seed' must be an integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.output_dir = get_string(doc, "output_dir", cfg.output_dir, context);
  if (doc.contains("params")) {
    cfg.params = parse_params(doc["params"], context + ".params");
  }
  if (doc.contains("domain")) {
    cfg.domain = parse_domain(doc["domain"], context + ".domain");
    cfg.has_domain = true;
  }
  cfg.m_max = get_int(doc, "m_max", cfg.m_max, context);
  if (cfg.m_max < 1) throw ValidationError(context + ": 'm_max' must be >= 1");
  if (doc.contains("stepper")) {
    cfg.stepper = parse_stepper(doc["stepper"], context + ".stepper");
  }

  // Exactly the block matching the experiment may appear.
  for (const char* name : {"simulate", "ode", "absorb", "squeeze", "lipschitz",
                           "determine", "dimension"}) {
    if (doc.contains(name) && cfg.experiment != name) {
      throw ValidationError(context + ": block '" + std::string(name) +
                            "' does not match experiment '" + cfg.experiment +
                            "' (one experiment per file)");
    }
  }

  const std::string ctx = context + "." + cfg.experiment;
  if (cfg.experiment == "simulate") {
    SimulateCfg s;
    if (doc.contains("simulate")) {
      const json& j = doc["simulate"];
      require_object(j, ctx);
      check_keys(j, {"t_final", "initial", "dump_states"}, ctx);
      s.t_final = get_double(j, "t_final", s.t_final, ctx);
      if (j.contains("initial")) {
        s.initial = parse_initial(j["initial"], ctx + ".initial");
      }
      s.dump_states = get_bool(j, "dump_states", s.dump_states, ctx);
    }
    if (!(s.t_final > 0.0)) {
      throw ValidationError(ctx + ": 't_final' must be positive");
    }
    cfg.simulate = s;
  } else if (cfg.experiment == "ode") {
    OdeCfg o;
    if (doc.contains("ode")) {
      const json& j = doc["ode"];
      require_object(j, ctx);
      check_keys(j, {"t_final", "initial", "spike_threshold", "quiescent_gap"},
                 ctx);
      o.t_final = get_double(j, "t_final", o.t_final, ctx);
      o.initial = get_triple(j, "initial", o.initial, ctx);
      o.spike_threshold =
          get_double(j, "spike_threshold", o.spike_threshold, ctx);
      o.quiescent_gap = get_double(j, "quiescent_gap", o.quiescent_gap, ctx);
    }
    if (!(o.t_final > 0.0)) {
      throw ValidationError(ctx + ": 't_final' must be positive");
    }
    cfg.ode = o;
  } else if (cfg.experiment == "absorb") {
    AbsorbCfg a;
    if (doc.contains("absorb")) a = parse_absorb(doc["absorb"], a, ctx);
    cfg.absorb = a;
  } else if (cfg.experiment == "squeeze") {
    SqueezeCfg s;
    if (doc.contains("squeeze")) {
      const json& j = doc["squeeze"];
      require_object(j, ctx);
      check_keys(j,
                 {"pairs", "t_star", "m", "lipschitz_c", "delta_threshold",
                  "perturbation", "embedding_samples", "monitor_phi",
                  "inject_synthetic_violation", "states_file", "absorb"},
                 ctx);
      s.pairs = get_int(j, "pairs", s.pairs, ctx);
      s.t_star = get_double(j, "t_star", s.t_star, ctx);
      s.m = get_int(j, "m", s.m, ctx);
      s.lipschitz_c = get_double(j, "lipschitz_c", s.lipschitz_c, ctx);
      if (j.contains("delta_threshold")) {
        s.delta_threshold = get_double(j, "delta_threshold", 0.0, ctx);
      }
      s.perturbation = get_double(j, "perturbation", s.perturbation, ctx);
      s.embedding_samples =
          get_int(j, "embedding_samples", s.embedding_samples, ctx);
      s.monitor_phi = get_bool(j, "monitor_phi", s.monitor_phi, ctx);
      s.inject_synthetic_violation = get_bool(
          j, "inject_synthetic_violation", s.inject_synthetic_violation, ctx);
      s.states_file = get_string(j, "states_file", s.states_file, ctx);
      if (j.contains("absorb")) {
        s.absorb = parse_absorb(j["absorb"], s.absorb, ctx + ".absorb");
      }
    }
    if (s.pairs < 1) throw ValidationError(ctx + ": 'pairs' must be >= 1");
    if (!(s.t_star > 0.0)) {
      throw ValidationError(ctx + ": 't_star' must be positive");
    }
    if (!(s.perturbation > 0.0)) {
      throw ValidationError(ctx + ": 'perturbation' must be positive");
    }
    cfg.squeeze = s;
  } else if (cfg.experiment == "lipschitz") {
    LipschitzCfg l;
    if (doc.contains("lipschitz")) {
      const json& j = doc["lipschitz"];
      require_object(j, ctx);
      check_keys(j, {"pairs", "t_final", "perturbation", "states_file",
                     "absorb"},
                 ctx);
      l.pairs = get_int(j, "pairs", l.pairs, ctx);
      l.t_final = get_double(j, "t_final", l.t_final, ctx);
      l.perturbation = get_double(j, "perturbation", l.perturbation, ctx);
      l.states_file = get_string(j, "states_file", l.states_file, ctx);
      if (j.contains("absorb")) {
        l.absorb = parse_absorb(j["absorb"], l.absorb, ctx + ".absorb");
      }
    }
    if (l.pairs < 1) throw ValidationError(ctx + ": 'pairs' must be >= 1");
    if (!(l.perturbation > 0.0)) {
      throw ValidationError(ctx + ": 'perturbation' must be positive");
    }
    cfg.lipschitz = l;
  } else if (cfg.experiment == "determine") {
    DetermineCfg d;
    if (doc.contains("determine")) {
      const json& j = doc["determine"];
      require_object(j, ctx);
      check_keys(j,
                 {"pairs", "m", "horizon", "tol_p", "tol_full",
                  "window_fraction", "perturbation", "states_file", "absorb"},
                 ctx);
      d.pairs = get_int(j, "pairs", d.pairs, ctx);
      d.m = get_int(j, "m", d.m, ctx);
      d.horizon = get_double(j, "horizon", d.horizon, ctx);
      d.tol_p = get_double(j, "tol_p", d.tol_p, ctx);
      d.tol_full = get_double(j, "tol_full", d.tol_full, ctx);
      d.window_fraction =
          get_double(j, "window_fraction", d.window_fraction, ctx);
      d.perturbation = get_double(j, "perturbation", d.perturbation, ctx);
      d.states_file = get_string(j, "states_file", d.states_file, ctx);
      if (j.contains("absorb")) {
        d.absorb = parse_absorb(j["absorb"], d.absorb, ctx + ".absorb");
      }
    }
    if (d.pairs < 1) throw ValidationError(ctx + ": 'pairs' must be >= 1");
    if (d.m < 1) throw ValidationError(ctx + ": 'm' must be >= 1");
    cfg.determine = d;
  } else if (cfg.experiment == "dimension") {
    DimensionCfg d;
    if (doc.contains("dimension")) {
      const json& j = doc["dimension"];
      require_object(j, ctx);
      check_keys(j, {"n_rank", "lipschitz", "theta", "theta_grid"}, ctx);
      d.n_rank = get_int(j, "n_rank", d.n_rank, ctx);
      d.lipschitz = get_double(j, "lipschitz", d.lipschitz, ctx);
      if (j.contains("theta")) {
        d.theta = get_double(j, "theta", 0.5, ctx);
      }
      d.theta_grid = get_int(j, "theta_grid", d.theta_grid, ctx);
    }
    cfg.dimension = d;
  }

  // A basis is required for the field experiments.
  static const std::set<std::string> kNeedsDomain = {
      "simulate", "absorb", "squeeze", "lipschitz", "determine"};
  if (kNeedsDomain.count(cfg.experiment)) {
    if (!cfg.has_domain) {
      throw ValidationError(context + ": experiment '" + cfg.experiment +
                            "' needs a 'domain' block");
    }
    if (!doc.contains("m_max")) {
      throw ValidationError(context + ": experiment '" + cfg.experiment +
                            "' needs 'm_max'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config: " + path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return parse_config(doc, path);
}

namespace {

json echo_params(const HRParameters& p) {
  return {{"d1", p.d1}, {"d2", p.d2},       {"d3", p.d3}, {"a", p.a},
          {"b", p.b},   {"alpha", p.alpha}, {"beta", p.beta},
          {"q", p.q},   {"r", p.r},         {"c", p.c},   {"J", p.J}};
}

json echo_absorb(const AbsorbCfg& a) {
  return {{"ensemble", a.ensemble},
          {"horizon", a.horizon},
          {"tail_fraction", a.tail_fraction},
          {"initial_norm_min", a.initial_norm_min},
          {"initial_norm_max", a.initial_norm_max},
          {"dt", a.dt},
          {"warmup", a.warmup},
          {"warmup_dt", a.warmup_dt},
          {"warmup_duration", a.warmup_duration},
          {"dump_tail_states", a.dump_tail_states}};
}

json echo_initial(const InitialSpec& s) {
  switch (s.kind) {
    case InitialSpec::Kind::Zero:
      return {{"type", "zero"}};
    case InitialSpec::Kind::Constant:
      return {{"type", "constant"}, {"value", s.value}};
    case InitialSpec::Kind::Random:
      return {{"type", "random"}, {"e_norm", s.e_norm}, {"decay", s.decay}};
  }
  return {};
}

}  // namespace

json echo_config(const ExperimentConfig& cfg) {
  json doc;
  doc["experiment"] = cfg.experiment;
  doc["seed"] = cfg.seed;
  doc["output_dir"] = cfg.output_dir;
  doc["params"] = echo_params(cfg.params);
  if (cfg.has_domain) {
    doc["domain"] = {{"lengths", cfg.domain.lengths},
                     {"grid_points", cfg.domain.grid_points}};
    doc["m_max"] = cfg.m_max;
  }
  doc["stepper"] = {{"dt", cfg.stepper.dt},
                    {"scheme", scheme_to_string(cfg.stepper.scheme)},
                    {"record_every", cfg.stepper.record_every},
                    {"blowup_norm", cfg.stepper.blowup_norm},
                    {"linear_only", cfg.stepper.linear_only}};
  if (cfg.simulate) {
    doc["simulate"] = {{"t_final", cfg.simulate->t_final},
                       {"initial", echo_initial(cfg.simulate->initial)},
                       {"dump_states", cfg.simulate->dump_states}};
  }
  if (cfg.ode) {
    doc["ode"] = {{"t_final", cfg.ode->t_final},
                  {"initial", cfg.ode->initial},
                  {"spike_threshold", cfg.ode->spike_threshold},
                  {"quiescent_gap", cfg.ode->quiescent_gap}};
  }
  if (cfg.absorb) doc["absorb"] = echo_absorb(*cfg.absorb);
  if (cfg.squeeze) {
    json j = {{"pairs", cfg.squeeze->pairs},
              {"t_star", cfg.squeeze->t_star},
              {"m", cfg.squeeze->m},
              {"lipschitz_c", cfg.squeeze->lipschitz_c},
              {"perturbation", cfg.squeeze->perturbation},
              {"embedding_samples", cfg.squeeze->embedding_samples},
              {"monitor_phi", cfg.squeeze->monitor_phi},
              {"inject_synthetic_violation",
               cfg.squeeze->inject_synthetic_violation},
              {"states_file", cfg.squeeze->states_file},
              {"absorb", echo_absorb(cfg.squeeze->absorb)}};
    if (cfg.squeeze->delta_threshold) {
      j["delta_threshold"] = *cfg.squeeze->delta_threshold;
    }
    doc["squeeze"] = j;
  }
  if (cfg.lipschitz) {
    doc["lipschitz"] = {{"pairs", cfg.lipschitz->pairs},
                        {"t_final", cfg.lipschitz->t_final},
                        {"perturbation", cfg.lipschitz->perturbation},
                        {"states_file", cfg.lipschitz->states_file},
                        {"absorb", echo_absorb(cfg.lipschitz->absorb)}};
  }
  if (cfg.determine) {
    doc["determine"] = {{"pairs", cfg.determine->pairs},
                        {"m", cfg.determine->m},
                        {"horizon", cfg.determine->horizon},
                        {"tol_p", cfg.determine->tol_p},
                        {"tol_full", cfg.determine->tol_full},
                        {"window_fraction", cfg.determine->window_fraction},
                        {"perturbation", cfg.determine->perturbation},
                        {"states_file", cfg.determine->states_file},
                        {"absorb", echo_absorb(cfg.determine->absorb)}};
  }
  if (cfg.dimension) {
    json j = {{"n_rank", cfg.dimension->n_rank},
              {"lipschitz", cfg.dimension->lipschitz},
              {"theta_grid", cfg.dimension->theta_grid}};
    if (cfg.dimension->theta) j["theta"] = *cfg.dimension->theta;
    doc["dimension"] = j;
  }
  return doc;
}

}  // namespace hrlab
