#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hrlab/analysis.hpp"
#include "hrlab/integrator.hpp"

using namespace hrlab;

namespace {

const double kPi = 3.14159265358979323846;

HRParameters mild_params() {
  HRParameters p = HRParameters::typical();
  p.J = 0.5;  // quiescent regime, smooth trajectories
  return p;
}

StepperConfig cfg(double dt, Scheme scheme, int record_every = 1) {
  StepperConfig c;
  c.dt = dt;
  c.scheme = scheme;
  c.record_every = record_every;
  return c;
}

double state_dist(const State& a, const State& b) {
  State d = a;
  axpy(-1.0, b, d);
  return norm(d, NormKind::L2);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("linear flow decays a single mode exactly") {
  auto basis = SpectralBasis::build({{kPi}, {9}}, 3);
  HRParameters p = HRParameters::typical();
  p.d1 = 1.0;

  State g = zero_state(basis);
  g.u.c[1] = 2.0;  // lambda = 1 exactly on [0, pi]

  for (Scheme s : {Scheme::ExponentialEuler, Scheme::EtdRk2}) {
    StepperConfig c = cfg(0.5, s);
    c.linear_only = true;
    State out = step(g, p, c);
    CHECK(out.u.c[1] == 2.0 * std::exp(-0.5));
    CHECK(out.u.c[0] == 0.0);
    CHECK(out.v.c[1] == 0.0);
  }
}

TEST_CASE("linear flow is a contraction") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = HRParameters::typical();
  Rng rng(5);
  StepperConfig c = cfg(0.05, Scheme::EtdRk2);
  c.linear_only = true;
  State g = random_state(basis, rng, 0.5);
  double prev = norm(g, NormKind::L2);
  Stepper stepper(basis, p, c);
  for (int s = 0; s < 40; ++s) {
    stepper.advance(g);
    double cur = norm(g, NormKind::L2);
    CHECK(cur <= prev * (1.0 + 1e-15));
    prev = cur;
  }
}

TEST_CASE("semigroup property") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = mild_params();
  Rng rng(9);
  State g0 = random_state_with_norm(basis, rng, 1.5, NormKind::H1);
  StepperConfig c = cfg(0.01, Scheme::EtdRk2, 1000000);

  Trajectory full = evolve(g0, p, 0.5, c);
  Trajectory part1 = evolve(g0, p, 0.2, c);
  Trajectory part2 = evolve(part1.states.back(), p, 0.3, c);
  CHECK(state_dist(full.states.back(), part2.states.back()) < 1e-9);
}

TEST_CASE("schemes agree at small dt") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = mild_params();
  Rng rng(12);
  State g0 = random_state_with_norm(basis, rng, 1.0, NormKind::H1);

  auto final_state = [&](Scheme s, double dt) {
    return evolve(g0, p, 1.0, cfg(dt, s, 10000000)).states.back();
  };
  State rk4 = final_state(Scheme::ReferenceRk4, 1e-4);
  // The second-order scheme sits on the reference answer.
  CHECK(state_dist(final_state(Scheme::EtdRk2, 1e-4), rk4) < 1e-6);
  // The first-order scheme approaches the same limit linearly in dt.
  double e1 = state_dist(final_state(Scheme::ExponentialEuler, 1e-4), rk4);
  double e2 = state_dist(final_state(Scheme::ExponentialEuler, 2e-5), rk4);
  CHECK(e1 < 5e-3);
  CHECK(e2 < e1 / 3.0);
}

TEST_CASE("Richardson order of the exponential schemes") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = mild_params();
  Rng rng(31);
  State g0 = random_state_with_norm(basis, rng, 1.0, NormKind::H1);

  // reference-rk4 runs dt/100 substeps, so this is effectively dt = 2.5e-5.
  State ref = evolve(g0, p, 1.0, cfg(2.5e-3, Scheme::ReferenceRk4, 1000000))
                  .states.back();
  auto err = [&](Scheme s, double dt) {
    return state_dist(
        evolve(g0, p, 1.0, cfg(dt, s, 1000000)).states.back(), ref);
  };

  for (auto [scheme, order] : {std::pair{Scheme::ExponentialEuler, 1.0},
                               std::pair{Scheme::EtdRk2, 2.0}}) {
    double e1 = err(scheme, 1e-2);
    double e2 = err(scheme, 5e-3);
    double e3 = err(scheme, 2.5e-3);
    double slope = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
    CHECK(slope == doctest::Approx(order).epsilon(0.2));
  }
}

TEST_CASE("pair divergence respects both growth ceilings") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = HRParameters::typical();
  double c_star = monotone_constant(p);
  double c_coupled = coupled_constant(p);
  Rng rng(77);

  for (int trial = 0; trial < 4; ++trial) {
    State g0 = random_state_with_norm(basis, rng, 2.0, NormKind::H1);
    State h0 = g0;
    axpy(1e-4, random_state(basis, rng, 1.0), h0);
    PairResult pr =
        evolve_pair(g0, h0, p, 1.0, cfg(1e-3, Scheme::EtdRk2, 10), 4);
    REQUIRE_FALSE(pr.diff.blew_up);
    double xi0 = pr.diff.xi.front();
    for (std::size_t s = 0; s < pr.diff.times.size(); ++s) {
      double t = pr.diff.times[s];
      double ceiling =
          std::min(std::exp(c_star * t), std::exp(0.5 * c_coupled * t));
      CHECK(pr.diff.xi[s] <= ceiling * xi0 * (1.0 + 1e-6));
      // Split norms are consistent: |xi|^2 = |P xi|^2 + |Q xi|^2.
      double sq = pr.diff.p[s] * pr.diff.p[s] + pr.diff.q[s] * pr.diff.q[s];
      CHECK(std::abs(sq - pr.diff.xi[s] * pr.diff.xi[s]) <=
            1e-12 * (sq + 1e-300));
    }
  }
}

TEST_CASE("identical pair stays identical") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = HRParameters::typical();
  Rng rng(8);
  State g0 = random_state_with_norm(basis, rng, 1.0, NormKind::H1);
  PairResult pr = evolve_pair(g0, g0, p, 0.2, cfg(1e-3, Scheme::EtdRk2, 50), 4);
  for (double x : pr.diff.xi) CHECK(x == 0.0);
}

TEST_CASE("evolution is deterministic") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = HRParameters::typical();
  Rng rng(64);
  State g0 = random_state_with_norm(basis, rng, 1.0, NormKind::H1);
  StepperConfig c = cfg(1e-3, Scheme::EtdRk2, 100);
  Trajectory a = evolve(g0, p, 0.5, c);
  Trajectory b = evolve(g0, p, 0.5, c);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    CHECK(a.states[s].u.c == b.states[s].u.c);
    CHECK(a.states[s].v.c == b.states[s].v.c);
    CHECK(a.states[s].w.c == b.states[s].w.c);
  }
}

TEST_CASE("recording grid includes endpoints") {
  auto basis = SpectralBasis::build({{kPi}, {9}}, 3);
  HRParameters p = mild_params();
  Trajectory traj =
      evolve(zero_state(basis), p, 1.0, cfg(1e-2, Scheme::EtdRk2, 30));
  REQUIRE(traj.times.size() >= 2);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t s = 1; s < traj.times.size(); ++s) {
    CHECK(traj.times[s] > traj.times[s - 1]);
  }
}

TEST_CASE("blow-up is flagged with the last valid time") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = HRParameters::typical();
  Rng rng(4);
  State big = random_state_with_norm(basis, rng, 500.0, NormKind::H1);

  Trajectory traj = evolve(big, p, 10.0, cfg(0.5, Scheme::ExponentialEuler));
  CHECK(traj.blew_up);
  CHECK(traj.blowup_time < 10.0);
  CHECK(std::isfinite(traj.norms.back()[0]));

  // dt so large the predictor stage overflows within the very first step.
  State one = zero_state(basis);
  one.u.c[0] = 1.0;
  CHECK_THROWS_AS(step(one, p, cfg(1e100, Scheme::EtdRk2)), BlowupError);
}

TEST_CASE("trajectory dump roundtrip") {
  auto basis = SpectralBasis::build({{kPi}, {17}}, 8);
  HRParameters p = mild_params();
  Rng rng(21);
  State g0 = random_state_with_norm(basis, rng, 1.0, NormKind::H1);
  Trajectory traj = evolve(g0, p, 0.1, cfg(1e-2, Scheme::EtdRk2, 2));

  auto path = temp_file("hrlab_test_dump.bin");
  write_trajectory_dump(path.string(), traj);
  TrajectoryDump dump = read_trajectory_dump(path.string(), basis);
  REQUIRE(dump.times.size() == traj.times.size());
  for (std::size_t s = 0; s < dump.times.size(); ++s) {
    CHECK(dump.times[s] == traj.times[s]);
    CHECK(dump.states[s].u.c == traj.states[s].u.c);
    CHECK(dump.states[s].v.c == traj.states[s].v.c);
    CHECK(dump.states[s].w.c == traj.states[s].w.c);
  }

  // A basis of a different size must be rejected.
  auto other = SpectralBasis::build({{kPi}, {17}}, 4);
  CHECK_THROWS_AS(read_trajectory_dump(path.string(), other), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("trajectory csv layout") {
  auto basis = SpectralBasis::build({{kPi}, {9}}, 3);
  HRParameters p = mild_params();
  Trajectory traj =
      evolve(zero_state(basis), p, 0.05, cfg(1e-2, Scheme::EtdRk2, 1));
  auto path = temp_file("hrlab_test_traj.csv");
  write_trajectory_csv(path.string(), traj);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,comp,norm_L2,norm_H1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(traj.times.size()) * 3);
  std::filesystem::remove(path);
}

TEST_CASE("scheme names roundtrip") {
  for (Scheme s :
       {Scheme::ExponentialEuler, Scheme::EtdRk2, Scheme::ReferenceRk4}) {
    CHECK(scheme_from_string(scheme_to_string(s)) == s);
  }
  CHECK_THROWS_AS(scheme_from_string("rk5"), ValidationError);
}
