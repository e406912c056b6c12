#include "leapgen/tree_classes.hpp"

#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace leapgen {

namespace {

constexpr std::size_t kEvalOrder = 150;
constexpr std::size_t kMomentOrder = 400;

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

// log-space core coefficients of the schroder mobile core, a_k rho_A^k
std::mutex core_mutex;

}  // namespace

std::shared_ptr<const TreeFamily> TreeFamily::get(TreeKind kind, unsigned arity) {
  if (kind != TreeKind::kary_mobile) arity = 0;
  if (kind == TreeKind::kary_mobile && (arity < 2 || arity > 6))
    throw std::invalid_argument("mobile arity must be in [2,6], got " + std::to_string(arity));
  static std::map<std::pair<int, unsigned>, std::shared_ptr<const TreeFamily>> cache;
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto key = std::make_pair(static_cast<int>(kind), arity);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const TreeFamily> fam(new TreeFamily(kind, arity));
  cache.emplace(key, fam);
  return fam;
}

std::string TreeFamily::name() const {
  switch (eq_.kind) {
    case TreeKind::polya: return "polya";
    case TreeKind::phylo: return "phylo";
    case TreeKind::kary_mobile: return "mobile:" + std::to_string(eq_.arity);
    case TreeKind::schroder_mobile: return "schroder-mobile";
  }
  return "?";
}

TreeFamily::TreeFamily(TreeKind kind, unsigned arity) : eq_{kind, arity} {
  coeffs_ = solve_tree_series<double>(eq_, kEvalOrder).coefficients();
  switch (kind) {
    case TreeKind::polya: rho_A_high_ = exp(HighFloat(-1)); break;
    case TreeKind::phylo: rho_A_high_ = HighFloat(1) / 2; break;
    case TreeKind::kary_mobile: rho_A_high_ = 1 - HighFloat(1) / arity; break;
    case TreeKind::schroder_mobile: rho_A_high_ = 1 - log(HighFloat(2)); break;
  }
  solve_rho();
  double tail = 0;
  auto m = boltzmann_moments_scaled(b_scaled(kMomentOrder), rho_, name(), &tail);
  mu_ = m.mu;
  sigma_ = m.sigma;
  if (std::fabs(m.value - rho_A()) > 1e-12)
    throw std::runtime_error(name() + ": B(rho) does not match the core singularity");
}

double TreeFamily::ratio_estimate(std::size_t N) const {
  const double x0 = 0.25;
  auto g = a_tilde_scaled(N, x0);
  std::size_t n = N;
  while (n > 0 && g[n] == 0.0) --n;
  std::size_t p = period();
  std::size_t m = n - p;
  double r = std::pow(g[m] / g[n], 1.0 / static_cast<double>(p)) * x0;
  return r * std::pow(static_cast<double>(m) / static_cast<double>(n), 1.5 / static_cast<double>(p));
}

void TreeFamily::solve_rho() {
  // bracket from the coefficient ratio, then bisection on B(rho) = rho_A
  double est = ratio_estimate(kEvalOrder);
  std::size_t nhp = static_cast<std::size_t>(std::ceil(42.0 * std::log(10.0) / -std::log(est))) + 10;
  nhp = std::min<std::size_t>(nhp, 400);
  auto a = solve_tree_series<HighFloat>(eq_, nhp).coefficients();
  const HighFloat eps = HighFloat("1e-48");
  auto at = [&](const HighFloat& y) {
    HighFloat s = 0;
    for (std::size_t i = a.size(); i-- > 0;) s = s * y + a[i];
    return s;
  };
  auto F = [&](const HighFloat& x) -> HighFloat {
    HighFloat b;
    switch (eq_.kind) {
      case TreeKind::polya: {
        HighFloat s = 0, xp = x;
        for (unsigned j = 2;; ++j) {
          xp *= x;
          if (xp < eps) break;
          s += at(xp) / j;
        }
        b = x * exp(s);
        break;
      }
      case TreeKind::phylo:
        b = x + at(x * x) / 2;
        break;
      case TreeKind::kary_mobile: {
        b = x;
        for (unsigned d : detail::divisors(eq_.arity)) {
          if (d == 1) continue;
          b += HighFloat(euler_phi(d)) * pow(at(pow(x, d)), eq_.arity / d) / eq_.arity;
        }
        break;
      }
      case TreeKind::schroder_mobile: {
        b = x;
        HighFloat xp = x;
        for (unsigned d = 2;; ++d) {
          xp *= x;
          if (xp < eps) break;
          b += HighFloat(euler_phi(d)) / d * -log1p(-at(xp));
        }
        break;
      }
    }
    return b - rho_A_high_;
  };
  HighFloat lo = est * (1 - 2e-3), hi = est * (1 + 2e-3);
  for (int expand = 0; F(lo) > 0 && expand < 20; ++expand) lo *= HighFloat(0.99);
  for (int expand = 0; F(hi) < 0 && expand < 20; ++expand) hi *= HighFloat(1.01);
  if (F(lo) > 0 || F(hi) < 0) throw std::runtime_error(name() + ": could not bracket rho");
  for (int it = 0; it < 200; ++it) {
    HighFloat mid = (lo + hi) / 2;
    if (F(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  rho_high_ = (lo + hi) / 2;
  rho_ = static_cast<double>(rho_high_);
}

TruncatedSeries<Rational> TreeFamily::a_tilde_exact(std::size_t N) const {
  return solve_tree_series<Rational>(eq_, N);
}

TruncatedSeries<Rational> TreeFamily::b_exact(std::size_t N) const {
  auto g = a_tilde_exact(N);
  return tree_b_series<Rational>(eq_, g, Rational(1));
}

TruncatedSeries<double> TreeFamily::a_tilde_scaled(std::size_t N, double x0) const {
  return solve_tree_series<double>(eq_, N, x0);
}

TruncatedSeries<double> TreeFamily::b_scaled(std::size_t N) const {
  static std::mutex m;
  static std::map<std::pair<const TreeFamily*, std::size_t>, TruncatedSeries<double>> cache;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find({this, N});
    if (it != cache.end()) return it->second;
  }
  auto g = a_tilde_scaled(N, rho_);
  auto b = tree_b_series<double>(eq_, g, rho_);
  std::lock_guard<std::mutex> lock(m);
  cache.emplace(std::make_pair(this, N), b);
  return b;
}

bool TreeFamily::core_support(std::size_t k) const {
  if (k == 0) return false;
  if (eq_.kind == TreeKind::kary_mobile) return (k - 1) % (eq_.arity - 1) == 0;
  return true;
}

Rational TreeFamily::core_coeff_exact(std::size_t k) const {
  if (!core_support(k)) return Rational(0);
  BigInt fact;
  mpz_fac_ui(fact.get_mpz_t(), k);
  switch (eq_.kind) {
    case TreeKind::polya: {
      BigInt num;
      mpz_ui_pow_ui(num.get_mpz_t(), k, k - 1);
      Rational r(num, fact);
      r.canonicalize();
      return r;
    }
    case TreeKind::phylo: {
      BigInt df = 1;
      for (std::size_t i = 3; i + 3 <= 2 * k; i += 2) df *= static_cast<unsigned long>(i);
      Rational r(df, fact);
      r.canonicalize();
      return r;
    }
    case TreeKind::kary_mobile: {
      std::size_t m = (k - 1) / (eq_.arity - 1);
      BigInt num, mf, km;
      mpz_fac_ui(num.get_mpz_t(), m + k - 1);
      mpz_fac_ui(mf.get_mpz_t(), m);
      mpz_ui_pow_ui(km.get_mpz_t(), eq_.arity, m);
      Rational r(num, mf * km * fact);
      r.canonicalize();
      return r;
    }
    case TreeKind::schroder_mobile: {
      // A = z + log(1/(1-A)) - A
      TruncatedSeries<Rational> h(std::size_t{0});
      for (std::size_t m = 1; m <= k; ++m) {
        auto g = h.truncated(m);
        auto l = series_log_inv_one_minus(g);
        TruncatedSeries<Rational> r(m);
        r[1] = 1;
        for (std::size_t i = 0; i <= m; ++i) r[i] += l[i] - g[i];
        h = r;
      }
      return h[k];
    }
  }
  return Rational(0);
}

double TreeFamily::log_core_coeff(std::size_t k) const {
  if (!core_support(k)) return -std::numeric_limits<double>::infinity();
  const double dk = static_cast<double>(k);
  switch (eq_.kind) {
    case TreeKind::polya:
      return (dk - 1) * std::log(dk) - std::lgamma(dk + 1);
    case TreeKind::phylo:
      if (k == 1) return 0.0;
      // (2k-3)!! = (2k-2)! / (2^{k-1} (k-1)!)
      return std::lgamma(2 * dk - 1) - (dk - 1) * std::log(2.0) - std::lgamma(dk) - std::lgamma(dk + 1);
    case TreeKind::kary_mobile: {
      double m = static_cast<double>((k - 1) / (eq_.arity - 1));
      return std::lgamma(m + dk) - std::lgamma(m + 1) - m * std::log(static_cast<double>(eq_.arity)) -
             std::lgamma(dk + 1);
    }
    case TreeKind::schroder_mobile: {
      std::lock_guard<std::mutex> lock(core_mutex);
      auto& cs = const_cast<std::vector<double>&>(core_scaled_);
      if (cs.size() <= k) {
        std::size_t N = std::max<std::size_t>(2 * k, 64);
        double ra = rho_A();
        TruncatedSeries<double> h(std::size_t{0});
        for (std::size_t m = 1; m <= N; ++m) {
          auto g = h.truncated(m);
          auto l = series_log_inv_one_minus(g);
          TruncatedSeries<double> r(m);
          r[1] = ra;
          for (std::size_t i = 0; i <= m; ++i) r[i] += l[i] - g[i];
          h = r;
        }
        cs = h.coefficients();
      }
      return std::log(cs[k]) - dk * std::log(rho_A());
    }
  }
  return 0.0;
}

double TreeFamily::outer(double u) const {
  if (u < 0) throw std::domain_error("outer: negative argument");
  const double ra = rho_A();
  if (u > ra * (1 + 1e-12)) throw std::domain_error(name() + ": core argument beyond singularity");
  u = std::min(u, ra);
  switch (eq_.kind) {
    case TreeKind::polya:
      if (u >= ra) return 1.0;
      return -boost::math::lambert_w0(-u);
    case TreeKind::phylo:
      return 1.0 - std::sqrt(std::max(0.0, 1.0 - 2.0 * u));
    case TreeKind::kary_mobile: {
      const double K = eq_.arity;
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid - std::pow(mid, K) / K < u)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    case TreeKind::schroder_mobile: {
      double lo = 0.0, hi = 0.5;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (2 * mid + std::log1p(-mid) < u)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double TreeFamily::eval_series(double y, double* tail_bound) const {
  const std::size_t N = coeffs_.size() - 1;
  std::size_t n = N;
  while (n > 0 && coeffs_[n] == 0.0) --n;
  std::size_t p = period();
  double r = std::pow(coeffs_[n] / coeffs_[n - p], 1.0 / static_cast<double>(p));
  if (y * r >= 1.0) throw std::domain_error(name() + ": series evaluation point beyond radius");
  double s = 0.0;
  for (std::size_t i = N + 1; i-- > 0;) s = s * y + coeffs_[i];
  if (tail_bound) {
    double yr = y * r;
    *tail_bound = coeffs_[n] * std::pow(y, static_cast<double>(n)) * yr / (1.0 - yr);
  }
  return s;
}

double TreeFamily::B(double x) const {
  if (x <= 0.0) return 0.0;
  switch (eq_.kind) {
    case TreeKind::polya: {
      double s = 0, xp = x;
      for (unsigned j = 2; j < 4000; ++j) {
        xp *= x;
        if (xp < 1e-19) break;
        s += eval(xp) / j;
      }
      return x * std::exp(s);
    }
    case TreeKind::phylo:
      return x + eval(x * x) / 2;
    case TreeKind::kary_mobile: {
      double b = x;
      for (unsigned d : detail::divisors(eq_.arity)) {
        if (d == 1) continue;
        b += euler_phi(d) * std::pow(eval(std::pow(x, d)), eq_.arity / d) / eq_.arity;
      }
      return b;
    }
    case TreeKind::schroder_mobile: {
      double b = x, xp = x;
      for (unsigned d = 2; d < 4000; ++d) {
        xp *= x;
        if (xp < 1e-19) break;
        b += static_cast<double>(euler_phi(d)) / d * -std::log1p(-eval(xp));
      }
      return b;
    }
  }
  return 0.0;
}

double TreeFamily::eval_composed(double y) const { return outer(B(y)); }

double TreeFamily::eval(double y) const {
  if (y < 0) throw std::domain_error("eval: negative argument");
  if (y > rho_ * (1 + 1e-12))
    throw std::domain_error(name() + ": evaluation point x >= radius of convergence");
  if (y == 0.0) return 0.0;
  if (y <= 0.7 * rho_) return eval_series(y);
  // square-root singularity: the composed route loses half the digits here
  if (y >= rho_ * (1 - 1e-13)) return a_tilde_at_rho();
  return eval_composed(std::min(y, rho_));
}

double TreeFamily::eval_series_derivative(double y) const {
  double s = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) s = s * y + static_cast<double>(i) * coeffs_[i];
  return s;
}

}  // namespace leapgen
