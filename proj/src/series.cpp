#include "leapgen/series.hpp"

#include <cmath>
#include <sstream>

namespace leapgen {

HighFloat to_high(const Rational& q) {
  HighFloat r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

HighFloat to_high(const BigInt& z) {
  HighFloat r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

long double to_long_double(const Rational& q) {
  return static_cast<long double>(to_high(q));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
  q.canonicalize();
  return q;
}

unsigned euler_phi(unsigned n) {
  unsigned r = n;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

BoltzmannMoments boltzmann_moments(const GfHandle& gf, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("boltzmann_moments: x must be positive");
  if (x > gf.radius || (x == gf.radius && !gf.finite_at_radius))
    throw std::domain_error("boltzmann_moments: divergent derivative at x for class " + gf.name);
  BoltzmannMoments m;
  m.x = x;
  m.value = gf.f(x);
  double d1 = gf.df(x), d2 = gf.d2f(x);
  m.mu = x * d1 / m.value;
  double var = m.mu + x * x * d2 / m.value - m.mu * m.mu;
  m.sigma = std::sqrt(std::max(0.0, var));
  return m;
}

BoltzmannMoments boltzmann_moments_scaled(const TruncatedSeries<double>& s, double x,
                                          const std::string& name, double* tail_bound) {
  const std::size_t N = s.order();
  // growth ratio from window maxima at N/2 and N (robust to periodic gaps)
  const std::size_t w = std::min<std::size_t>(24, N / 4);
  auto window_max = [&](std::size_t end) {
    double m = 0.0;
    for (std::size_t i = end + 1 - w; i <= end; ++i) m = std::max(m, s[i]);
    return m;
  };
  double r = 0.0, shi = 0.0;
  if (w >= 2) {
    shi = window_max(N);
    double slo = window_max(N / 2);
    if (slo > 0.0) r = std::pow(shi / slo, 1.0 / static_cast<double>(N - N / 2));
  }
  if (r >= 1.0 || !std::isfinite(r) || w < 2)
    throw std::domain_error("boltzmann_moments: divergent derivative at x for class " + name);
  double v = 0, m1 = 0, m2 = 0;
  for (std::size_t n = N + 1; n-- > 0;) {
    double dn = static_cast<double>(n);
    v += s[n];
    m1 += dn * s[n];
    m2 += dn * dn * s[n];
  }
  double one_minus = 1.0 - r;
  double nn = static_cast<double>(N + 1);
  double tail = shi * r * (nn * nn / one_minus + 2 * nn / (one_minus * one_minus) +
                             2.0 / (one_minus * one_minus * one_minus));
  if (tail_bound) *tail_bound = tail / v;
  BoltzmannMoments out;
  out.x = x;
  out.value = v;
  out.mu = m1 / v;
  out.sigma = std::sqrt(std::max(0.0, m2 / v - out.mu * out.mu));
  return out;
}

}  // namespace leapgen
