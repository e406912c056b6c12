#pragma once

#include <cstdint>

#include "leapgen/rng.hpp"

namespace leapgen {

// probability num/den with exact integer thresholds
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

bool draw_bernoulli(double p, Rng& rng);
bool draw_bernoulli(Ratio p, Rng& rng);

// P(i) = p^i (1 - p), i >= 0
std::uint64_t draw_geometric(double p, Rng& rng);
std::uint64_t draw_geometric(Ratio p, Rng& rng);

std::uint64_t draw_poisson(double lambda, Rng& rng);
// Poisson conditioned on >= 1, inversion on the shifted cdf
std::uint64_t draw_poisson_ge1(double lambda, Rng& rng);

// P(m) proportional to theta^m / m on m >= min_value (min_value in {1,2})
std::uint64_t draw_logarithmic(double theta, std::uint64_t min_value, Rng& rng);

std::uint64_t draw_binomial(std::uint64_t trials, double p, Rng& rng);
// failures before `successes` successes, success probability p
std::uint64_t draw_negative_binomial(std::uint64_t successes, double p, Rng& rng);

// log(1/(1-t)) - sum_{m < min_value} t^m/m, accurate for small t
double logarithmic_mass(double theta, std::uint64_t min_value);

}  // namespace leapgen
