#pragma once

#include <cstdint>
#include <stdexcept>

#include "leapgen/scheme.hpp"

namespace leapgen {

class TrialCapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LeapOptions {
  std::uint64_t max_trials = 1000000000ull;
  bool build_object = true;          // false: only the core size is produced
  bool keep_decomposition = false;
  bool check_size = false;           // assert size == n on every success
};

struct LeapOutcome {
  ComposedObject object;
  std::uint64_t core_size = 0;
  std::uint64_t trials = 0;          // trials started
  std::uint64_t leap_successes = 0;  // trials with S == n and k in support
  std::uint64_t b_draws = 0;
  std::uint64_t atoms_failed = 0;    // atoms drawn in failed or rejected trials
};

LeapOutcome leap_sample(const SchemeSpec& spec, std::uint64_t n, Rng& rng,
                        const LeapOptions& opt = {});

// r = acceleration order, a = target acceptance in (0,1)
LeapOutcome rejection_leap_sample(const SchemeSpec& spec, std::uint64_t n, int r, double a,
                                  Rng& rng, const LeapOptions& opt = {});

struct SinglePassOutcome {
  ComposedObject object;
  std::uint64_t size = 0;     // achieved size Z_n <= n
  std::uint64_t deficit = 0;  // n - Z_n
  std::uint64_t core_size = 0;
};

// one trial without restart, stopping before the first component that overshoots
SinglePassOutcome single_pass_sample(const SchemeSpec& spec, std::uint64_t n, Rng& rng,
                                     const LeapOptions& opt = {});

double p_inf(const SchemeSpec& spec, int i, double t);
double y_poly(const SchemeSpec& spec, int r, double n, double t);
double rejection_t(const SchemeSpec& spec, double n, double k);
double rejection_weight(const SchemeSpec& spec, int r, double a, double n, double k);

}  // namespace leapgen
