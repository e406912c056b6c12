#include "leapgen/primitives.hpp"

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/negative_binomial_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace leapgen {

namespace {
void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(what) + ": probability out of range: " + std::to_string(p));
}
void check_ratio(Ratio p, const char* what) {
  if (p.den == 0 || p.num > p.den)
    throw std::invalid_argument(std::string(what) + ": ratio out of range");
}
constexpr double kLargeLambda = 30.0;
}  // namespace

bool draw_bernoulli(double p, Rng& rng) {
  check_prob(p, "bernoulli");
  if (p >= 1.0) return true;
  return rng.uniform01() < p;
}

bool draw_bernoulli(Ratio p, Rng& rng) {
  check_ratio(p, "bernoulli");
  return rng.below(p.den) < p.num;
}

std::uint64_t draw_geometric(double p, Rng& rng) {
  check_prob(p, "geometric");
  if (p >= 1.0) throw std::invalid_argument("geometric: p must be < 1");
  if (p == 0.0) return 0;
  if (p <= 0.5) {
    std::uint64_t i = 0;
    while (rng.uniform01() < p) ++i;
    return i;
  }
  // P(i >= k) = p^k
  return static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_open()) / std::log(p)));
}

std::uint64_t draw_geometric(Ratio p, Rng& rng) {
  check_ratio(p, "geometric");
  if (p.num == p.den) throw std::invalid_argument("geometric: p must be < 1");
  std::uint64_t i = 0;
  while (rng.below(p.den) < p.num) ++i;
  return i;
}

std::uint64_t draw_poisson(double lambda, Rng& rng) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("poisson: rate out of range");
  if (lambda == 0.0) return 0;
  if (lambda > kLargeLambda) {
    boost::random::poisson_distribution<std::uint64_t, double> d(lambda);
    return d(rng);
  }
  double u = rng.uniform01();
  double p = std::exp(-lambda);
  double cum = p;
  std::uint64_t k = 0;
  while (u >= cum && p > 0.0) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cum += p;
  }
  return k;
}

std::uint64_t draw_poisson_ge1(double lambda, Rng& rng) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("poisson_ge1: rate must be positive");
  if (lambda > kLargeLambda) {
    boost::random::poisson_distribution<std::uint64_t, double> d(lambda);
    for (;;) {
      auto k = d(rng);
      if (k >= 1) return k;
    }
  }
  double u = rng.uniform01();
  double p = lambda / std::expm1(lambda);  // P(N=1 | N>=1)
  double cum = p;
  std::uint64_t k = 1;
  while (u >= cum && p > 0.0) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cum += p;
  }
  return k;
}

double logarithmic_mass(double theta, std::uint64_t min_value) {
  double total = -std::log1p(-theta);
  if (min_value <= 1) return total;
  if (theta < 0.25) {
    // direct sum avoids cancellation
    double s = 0.0, pw = 1.0;
    for (std::uint64_t m = 1; m < 200; ++m) {
      pw *= theta;
      if (m >= min_value) s += pw / static_cast<double>(m);
      if (pw < 1e-18 * s) break;
    }
    return s;
  }
  double pw = 1.0;
  for (std::uint64_t m = 1; m < min_value; ++m) {
    pw *= theta;
    total -= pw / static_cast<double>(m);
  }
  return total;
}

std::uint64_t draw_logarithmic(double theta, std::uint64_t min_value, Rng& rng) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("logarithmic: theta out of (0,1)");
  if (min_value < 1) min_value = 1;
  const double z = logarithmic_mass(theta, min_value);
  double u = rng.uniform01() * z;
  double pw = std::pow(theta, static_cast<double>(min_value));
  std::uint64_t m = min_value;
  double cum = pw / static_cast<double>(m);
  while (u >= cum) {
    pw *= theta;
    ++m;
    double term = pw / static_cast<double>(m);
    if (term == 0.0) {
      // rounding left mass unreachable; redraw
      u = rng.uniform01() * z;
      pw = std::pow(theta, static_cast<double>(min_value));
      m = min_value;
      cum = pw / static_cast<double>(m);
      continue;
    }
    cum += term;
  }
  return m;
}

std::uint64_t draw_binomial(std::uint64_t trials, double p, Rng& rng) {
  check_prob(p, "binomial");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  boost::random::binomial_distribution<std::int64_t, double> d(static_cast<std::int64_t>(trials), p);
  return static_cast<std::uint64_t>(d(rng));
}

std::uint64_t draw_negative_binomial(std::uint64_t successes, double p, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("negative_binomial: p out of (0,1]");
  if (successes == 0 || p == 1.0) return 0;
  boost::random::negative_binomial_distribution<std::int64_t, double> d(
      static_cast<std::int64_t>(successes), p);
  return static_cast<std::uint64_t>(d(rng));
}

}  // namespace leapgen
