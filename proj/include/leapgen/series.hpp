#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "leapgen/kernels.hpp"
#include "leapgen/numeric.hpp"

namespace leapgen {

template <class T>
class TruncatedSeries {
public:
  using value_type = T;

  TruncatedSeries() : c_(1, T(0)) {}
  explicit TruncatedSeries(std::size_t order) : c_(order + 1, T(0)) {}
  explicit TruncatedSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(T(0));
  }

  std::size_t order() const { return c_.size() - 1; }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<T>& coefficients() const { return c_; }
  std::vector<T>& coefficients() { return c_; }

  TruncatedSeries truncated(std::size_t order) const {
    std::vector<T> v(order + 1, T(0));
    std::copy_n(c_.begin(), std::min(order, this->order()) + 1, v.begin());
    return TruncatedSeries(std::move(v));
  }

  bool operator==(const TruncatedSeries& o) const { return c_ == o.c_; }

private:
  std::vector<T> c_;
};

template <class T>
TruncatedSeries<T> series_mul(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  TruncatedSeries<T> r(n);
  if constexpr (std::is_same_v<T, double>) {
    kernels::convolve_acc(a.coefficients().data(), b.coefficients().data(),
                          r.coefficients().data(), n + 1);
  } else {
    for (std::size_t i = 0; i <= n; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

template <class T>
TruncatedSeries<T> series_add(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  TruncatedSeries<T> r(n);
  for (std::size_t i = 0; i <= n; ++i) r[i] = a[i] + b[i];
  return r;
}

template <class T>
TruncatedSeries<T> series_sub(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  TruncatedSeries<T> r(n);
  for (std::size_t i = 0; i <= n; ++i) r[i] = a[i] - b[i];
  return r;
}

template <class T>
TruncatedSeries<T> series_scale(const TruncatedSeries<T>& a, const T& s) {
  TruncatedSeries<T> r = a;
  for (auto& x : r.coefficients()) x *= s;
  return r;
}

// f(factor * z^d), same order
template <class T>
TruncatedSeries<T> series_dilate(const TruncatedSeries<T>& f, std::size_t d, const T& factor) {
  const std::size_t n = f.order();
  TruncatedSeries<T> r(n);
  T pw(1);
  for (std::size_t m = 0; m * d <= n; ++m) {
    r[m * d] = f[m] * pw;
    pw *= factor;
  }
  return r;
}

// z * f
template <class T>
TruncatedSeries<T> series_shift(const TruncatedSeries<T>& f) {
  TruncatedSeries<T> r(f.order());
  for (std::size_t i = 1; i <= f.order(); ++i) r[i] = f[i - 1];
  return r;
}

// exp(f) with f(0) = 0: n g_n = sum_k k f_k g_{n-k}
template <class T>
TruncatedSeries<T> series_exp(const TruncatedSeries<T>& f) {
  if (f[0] != 0) throw std::invalid_argument("series_exp: constant term must vanish");
  const std::size_t n = f.order();
  TruncatedSeries<T> g(n);
  g[0] = T(1);
  std::vector<T> kf(n + 1, T(0));
  for (std::size_t k = 1; k <= n; ++k) kf[k] = T(static_cast<long>(k)) * f[k];
  for (std::size_t m = 1; m <= n; ++m) {
    T s(0);
    for (std::size_t k = 1; k <= m; ++k) s += kf[k] * g[m - k];
    g[m] = s / T(static_cast<long>(m));
  }
  return g;
}

// log(1/(1-f)) with f(0) = 0: n l_n = n f_n + sum_{j<n} j l_j f_{n-j}
template <class T>
TruncatedSeries<T> series_log_inv_one_minus(const TruncatedSeries<T>& f) {
  if (f[0] != 0) throw std::invalid_argument("series_log_inv_one_minus: constant term must vanish");
  const std::size_t n = f.order();
  TruncatedSeries<T> l(n);
  for (std::size_t m = 1; m <= n; ++m) {
    T s = T(static_cast<long>(m)) * f[m];
    for (std::size_t j = 1; j < m; ++j) s += T(static_cast<long>(j)) * l[j] * f[m - j];
    l[m] = s / T(static_cast<long>(m));
  }
  return l;
}

template <class T>
TruncatedSeries<T> series_pow(const TruncatedSeries<T>& f, unsigned e) {
  TruncatedSeries<T> r(f.order());
  r[0] = T(1);
  TruncatedSeries<T> base = f;
  while (e) {
    if (e & 1u) r = series_mul(r, base);
    e >>= 1u;
    if (e) base = series_mul(base, base);
  }
  return r;
}

// 1/(1-f) with f(0) = 0
template <class T>
TruncatedSeries<T> series_inv_one_minus(const TruncatedSeries<T>& f) {
  if (f[0] != 0) throw std::invalid_argument("series_inv_one_minus: constant term must vanish");
  const std::size_t n = f.order();
  TruncatedSeries<T> g(n);
  g[0] = T(1);
  for (std::size_t m = 1; m <= n; ++m) {
    T s(0);
    for (std::size_t j = 1; j <= m; ++j) s += f[j] * g[m - j];
    g[m] = s;
  }
  return g;
}

// value at x by Horner
template <class T, class X>
X series_eval(const TruncatedSeries<T>& f, const X& x) {
  X s(0);
  for (std::size_t i = f.order() + 1; i-- > 0;) s = s * x + X(f[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Fixed-point solvers for the unlabeled tree classes.
// Return the coefficients of A~(x0 z) up to order N; x0 = 1 gives the
// counting series.  Iteration m is exact up to order m, so it runs on the
// truncation at m; one extra full pass confirms the fixed point.

enum class TreeKind { polya, phylo, kary_mobile, schroder_mobile };

struct TreeEquation {
  TreeKind kind = TreeKind::polya;
  unsigned arity = 0;  // k for k-ary mobiles
};

namespace detail {

template <class T>
T power(const T& x, std::size_t e) {
  T r(1);
  for (std::size_t i = 0; i < e; ++i) r *= x;
  return r;
}

inline std::vector<unsigned> divisors(unsigned k) {
  std::vector<unsigned> d;
  for (unsigned i = 1; i <= k; ++i)
    if (k % i == 0) d.push_back(i);
  return d;
}

template <class T>
bool close_enough(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, Rational>) {
    return a == b;
  } else {
    using std::abs;
    using boost::multiprecision::abs;
    T scale = abs(a) > abs(b) ? abs(a) : abs(b);
    T tol = std::is_same_v<T, double> ? T(1e-12) : T(std::numeric_limits<T>::epsilon() * 1e6);
    return abs(a - b) <= tol * scale || abs(a - b) <= tol * T(1e-300);
  }
}

// op(H) spread to z^{d m}, where H(w) = g(c w) truncated at order n/d
template <class T, class Op>
TruncatedSeries<T> apply_dilated(const TruncatedSeries<T>& g, std::size_t d, const T& c, Op op) {
  const std::size_t n = g.order();
  const std::size_t m = n / d;
  TruncatedSeries<T> h(m);
  T pw(1);
  for (std::size_t i = 0; i <= m; ++i) {
    h[i] = g[i] * pw;
    pw *= c;
  }
  TruncatedSeries<T> r = op(h);
  TruncatedSeries<T> out(n);
  for (std::size_t i = 0; i <= m; ++i) out[i * d] = r[i];
  return out;
}

// one application of the defining equation at the order of g
template <class T>
TruncatedSeries<T> tree_step(const TreeEquation& eq, const TruncatedSeries<T>& g, const T& x0) {
  const std::size_t n = g.order();
  TruncatedSeries<T> zterm(n);
  if (n >= 1) zterm[1] = x0;
  switch (eq.kind) {
    case TreeKind::polya: {
      TruncatedSeries<T> s(n);
      T xp(1);
      for (std::size_t i = 1; i <= n; ++i) {
        auto gi = series_dilate(g, i, xp);
        T inv = T(1) / T(static_cast<long>(i));
        for (std::size_t m = 0; m <= n; ++m) s[m] += gi[m] * inv;
        xp *= x0;
      }
      return series_scale(series_shift(series_exp(s)), x0);
    }
    case TreeKind::phylo: {
      auto sq = series_mul(g, g);
      auto g2 = series_dilate(g, 2, x0);
      auto r = zterm;
      T half = T(1) / T(2);
      for (std::size_t m = 0; m <= n; ++m) r[m] += (sq[m] + g2[m]) * half;
      return r;
    }
    case TreeKind::kary_mobile: {
      const unsigned k = eq.arity;
      auto r = zterm;
      T invk = T(1) / T(static_cast<long>(k));
      for (unsigned d : divisors(k)) {
        auto p = apply_dilated(g, d, power(x0, d - 1),
                               [&](const TruncatedSeries<T>& h) { return series_pow(h, k / d); });
        T w = T(static_cast<long>(euler_phi(d))) * invk;
        for (std::size_t m = 0; m <= n; ++m) r[m] += w * p[m];
      }
      return r;
    }
    case TreeKind::schroder_mobile: {
      auto r = zterm;
      T xp(1);
      for (std::size_t d = 1; d <= n; ++d) {
        auto l = apply_dilated(g, d, xp, [](const TruncatedSeries<T>& h) {
          return series_log_inv_one_minus(h);
        });
        T w = T(static_cast<long>(euler_phi(static_cast<unsigned>(d)))) / T(static_cast<long>(d));
        for (std::size_t m = 0; m <= n; ++m) r[m] += w * l[m];
        xp *= x0;
      }
      for (std::size_t m = 0; m <= n; ++m) r[m] -= g[m];
      return r;
    }
  }
  throw std::logic_error("tree_step: unknown kind");
}

}  // namespace detail

template <class T>
TruncatedSeries<T> solve_tree_series(const TreeEquation& eq, std::size_t N, const T& x0 = T(1)) {
  if (N < 1) throw std::invalid_argument("solve_tree_series: order must be >= 1");
  if (eq.kind == TreeKind::kary_mobile && eq.arity < 2)
    throw std::invalid_argument("solve_tree_series: mobile arity must be >= 2");
  TruncatedSeries<T> g(std::size_t{0});
  for (std::size_t m = 1; m <= N; ++m) g = detail::tree_step(eq, g.truncated(m), x0);
  auto check = detail::tree_step(eq, g, x0);
  for (std::size_t i = 0; i <= N; ++i)
    if (!detail::close_enough(check[i], g[i]))
      throw std::runtime_error("solve_tree_series: fixed point not reached at order " +
                               std::to_string(i));
  return g;
}

template <class T>
TruncatedSeries<T> solve_polya_series(std::size_t N) {
  return solve_tree_series<T>({TreeKind::polya, 0}, N);
}
template <class T>
TruncatedSeries<T> solve_phylo_series(std::size_t N) {
  return solve_tree_series<T>({TreeKind::phylo, 0}, N);
}

// ---------------------------------------------------------------------------

struct BoltzmannMoments {
  double x = 0;
  double value = 0;
  double mu = 0;
  double sigma = 0;
};

// closed-form handle: value, first and second derivative
struct GfHandle {
  std::string name;
  double radius = 0;              // radius of convergence
  bool finite_at_radius = false;  // derivatives finite at x == radius
  std::function<double(double)> f, df, d2f;
};

BoltzmannMoments boltzmann_moments(const GfHandle& gf, double x);
// from series coefficients c_n x^n (already scaled: s[n] = c_n x^n), with
// the geometric tail bound from the last coefficient ratio
BoltzmannMoments boltzmann_moments_scaled(const TruncatedSeries<double>& scaled, double x,
                                          const std::string& name, double* tail_bound = nullptr);

}  // namespace leapgen

namespace leapgen {


// B(x0 z) from g = A~(x0 z)
template <class T>
TruncatedSeries<T> tree_b_series(const TreeEquation& eq, const TruncatedSeries<T>& g, const T& x0) {
  const std::size_t n = g.order();
  TruncatedSeries<T> r(n);
  if (n >= 1) r[1] = x0;
  switch (eq.kind) {
    case TreeKind::polya: {
      TruncatedSeries<T> s(n);
      T xp = x0;
      for (std::size_t j = 2; j <= n; ++j) {
        auto gj = series_dilate(g, j, xp);
        T inv = T(1) / T(static_cast<long>(j));
        for (std::size_t m = 0; m <= n; ++m) s[m] += gj[m] * inv;
        xp *= x0;
      }
      return series_scale(series_shift(series_exp(s)), x0);
    }
    case TreeKind::phylo: {
      auto g2 = series_dilate(g, 2, x0);
      for (std::size_t m = 0; m <= n; ++m) r[m] += g2[m] / T(2);
      return r;
    }
    case TreeKind::kary_mobile: {
      const unsigned k = eq.arity;
      for (unsigned d : detail::divisors(k)) {
        if (d == 1) continue;
        auto p = detail::apply_dilated(g, d, detail::power(x0, d - 1),
                                       [&](const TruncatedSeries<T>& h) { return series_pow(h, k / d); });
        T w = T(static_cast<long>(euler_phi(d))) / T(static_cast<long>(k));
        for (std::size_t m = 0; m <= n; ++m) r[m] += w * p[m];
      }
      return r;
    }
    case TreeKind::schroder_mobile: {
      T xp = x0;
      for (std::size_t d = 2; d <= n; ++d) {
        auto l = detail::apply_dilated(g, d, xp, [](const TruncatedSeries<T>& h) {
          return series_log_inv_one_minus(h);
        });
        T w = T(static_cast<long>(euler_phi(static_cast<unsigned>(d)))) / T(static_cast<long>(d));
        for (std::size_t m = 0; m <= n; ++m) r[m] += w * l[m];
        xp *= x0;
      }
      return r;
    }
  }
  throw std::logic_error("tree_b_series: unknown kind");
}

}  // namespace leapgen
