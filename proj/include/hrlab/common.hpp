#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace hrlab {

// Invalid input: bad config values, incompatible operands, violated
// preconditions.  The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical blow-up during time integration (non-finite values or a norm
// beyond the configured ceiling).  Carries the last time at which the state
// was still valid; NaN when the failure site has no clock.  The CLI maps
// this to exit code 3.
class BlowupError : public std::runtime_error {
public:
  BlowupError(const std::string& msg, double last_valid_time)
      : std::runtime_error(msg), last_valid_time_(last_valid_time) {}
  double last_valid_time() const { return last_valid_time_; }

private:
  double last_valid_time_;
};

// Deterministic random source.  Draws are derived from mt19937_64 raw output
// only (shift to 53 bits, explicit Box-Muller), never from std::
// distributions, so a given seed produces the same stream on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second deviate of each pair is
  // cached so draws come in a fixed order.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Independent child stream, e.g. one per ensemble member.
  Rng fork() { return Rng(eng_() ^ 0x9e3779b97f4a7c15ull); }

private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Worker count for parallel_for: HRLAB_THREADS if set (clamped to >= 1),
// otherwise hardware_concurrency.
int worker_count();

// Runs fn(0..n-1) on worker_count() threads.  Each index must write only to
// its own output slot; under that discipline results are independent of the
// schedule and runs are reproducible.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace hrlab
