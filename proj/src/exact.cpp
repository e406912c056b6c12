#include "leapgen/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leapgen/series.hpp"

namespace leapgen {

namespace {

BigInt pow_ui(unsigned long b, unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

Rational make_q(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// motzkin constants: s = -1/2, mu = 3, sigma^2 = 3/2, a^1 = -9/8, c^1 = -39/16
template <class T>
T motzkin_y(int r, const T& n, const T& t) {
  using std::sqrt;
  using boost::multiprecision::sqrt;
  if (r < 0 || r > 3) throw std::invalid_argument("acceleration order must be in 0..3");
  const T s = T(-1) / 2, mu = 3, sg = sqrt(T(3) / 2);
  const T a1 = T(-9) / 8, c1 = T(-39) / 16;
  const T smu = sqrt(mu);
  const T sn = sqrt(n);
  T y = 1;
  if (r >= 1) y += -(sg / smu) * (s - 1) * t / sn;
  if (r >= 2) y += ((s - 1) * s * sg * sg / (2 * mu) * t * t + c1 - a1 * mu) / n;
  if (r >= 3)
    y += (s * (1 - s * s) * sg * sg * sg / (6 * mu * smu) * t * t * t +
          (sg * smu * s * a1 - (s - 1) * (sg / smu) * c1) * t) /
         (n * sn);
  return y;
}

template <class T>
T motzkin_w(int r, const T& a, std::uint64_t n, std::uint64_t k) {
  using std::sqrt;
  using boost::multiprecision::sqrt;
  const T nn = T(static_cast<double>(n));
  const T mu = 3, sg = sqrt(T(3) / 2);
  const T t = (T(static_cast<double>(k)) - nn / mu) / (sg * sqrt(nn / (mu * mu * mu)));
  T y = motzkin_y<T>(r, nn, t);
  return y >= a ? a / y : T(1);
}

// long double binomial pmf of Bin(n, 2/3) at all j, by ratios from the mode
std::vector<long double> binom_pmf_two_thirds(std::uint64_t n) {
  std::vector<long double> w(n + 1);
  const std::uint64_t mode = (2 * (n + 1)) / 3 > n ? n : (2 * (n + 1)) / 3;
  w[mode] = 1.0L;
  for (std::uint64_t j = mode; j < n; ++j)
    w[j + 1] = w[j] * 2.0L * static_cast<long double>(n - j) / static_cast<long double>(j + 1);
  for (std::uint64_t j = mode; j > 0; --j)
    w[j - 1] = w[j] * static_cast<long double>(j) / (2.0L * static_cast<long double>(n - j + 1));
  long double total = 0;
  for (auto x : w) total += x;
  for (auto& x : w) x /= total;
  return w;
}

struct FloatLaws {
  std::vector<long double> P;  // Bin(n, 2/3) mass at 2k
  std::vector<long double> u;  // Cat_k 4^{-k}
  long double s = 0, q = 0;    // M_n 3^{-n}, q_n
  long double uniform(std::size_t k) const { return u[k] * P[k] / s; }
  long double leap(std::size_t k) const { return (2.0L / 3) * P[k] / q; }
};

FloatLaws motzkin_float_laws(std::uint64_t n) {
  auto pmf = binom_pmf_two_thirds(n);
  const std::uint64_t K = n / 2;
  FloatLaws L;
  L.P.resize(K + 1);
  L.u.resize(K + 1);
  L.u[0] = 1.0L;
  for (std::uint64_t k = 0; k < K; ++k)
    L.u[k + 1] = L.u[k] * static_cast<long double>(2 * k + 1) / static_cast<long double>(2 * (k + 2));
  for (std::uint64_t k = 0; k <= K; ++k) {
    L.P[k] = pmf[2 * k];
    L.s += L.u[k] * L.P[k];
  }
  // q_n = 1/3 + (1/3)(-1/3)^n by the two-term recurrence
  long double q0 = 2.0L / 3, q1 = 2.0L / 9;
  L.q = n == 0 ? q0 : q1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    long double qi = (2.0L / 3) * q1 + (1.0L / 3) * q0;
    q0 = q1;
    q1 = qi;
    L.q = qi;
  }
  return L;
}

// 1/2 sum_k P_k |u_k / s - f_k|, final accumulation by the dispatched kernel
double half_weighted_abs(const FloatLaws& L, const std::vector<long double>& f) {
  std::vector<double> p(L.P.size()), e(L.P.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = static_cast<double>(L.P[k]);
    e[k] = static_cast<double>(L.u[k] / L.s - f[k]);
  }
  return kernels::weighted_abs_sum(p.data(), e.data(), p.size()) / 2;
}

HighFloat high_eps() { return boost::multiprecision::pow(HighFloat(10), -60); }

}  // namespace

// ---------------------------------------------------------------------------
// counts

std::vector<BigInt> catalan_numbers(std::size_t k_max) {
  std::vector<BigInt> c(k_max + 1);
  c[0] = 1;
  for (std::size_t k = 0; k < k_max; ++k) {
    c[k + 1] = c[k] * static_cast<unsigned long>(2 * (2 * k + 1));
    c[k + 1] /= static_cast<unsigned long>(k + 2);
  }
  return c;
}

std::vector<BigInt> motzkin_numbers(std::size_t n_max) {
  std::vector<BigInt> m(n_max + 1);
  m[0] = 1;
  if (n_max >= 1) m[1] = 1;
  for (std::size_t n = 2; n <= n_max; ++n) {
    m[n] = m[n - 1] * static_cast<unsigned long>(2 * n + 1) + m[n - 2] * static_cast<unsigned long>(3 * (n - 1));
    m[n] /= static_cast<unsigned long>(n + 2);
  }
  return m;
}

std::vector<BigInt> motzkin_row(std::size_t n) {
  const std::size_t K = n / 2;
  auto cat = catalan_numbers(K);
  std::vector<BigInt> row(K + 1);
  BigInt b = 1;  // binom(n, j)
  std::size_t j = 0;
  for (std::size_t k = 0; k <= K; ++k) {
    while (j < 2 * k) {
      b *= static_cast<unsigned long>(n - j);
      b /= static_cast<unsigned long>(j + 1);
      ++j;
    }
    row[k] = cat[k] * b;
  }
  return row;
}

CountTable motzkin_counts(std::size_t n_max) {
  CountTable t;
  t.a = catalan_numbers(n_max / 2);
  t.c_nk.resize(n_max + 1);
  t.c.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    t.c_nk[n] = motzkin_row(n);
    BigInt s = 0;
    for (auto& x : t.c_nk[n]) s += x;
    t.c[n] = s;
  }
  return t;
}

// ---------------------------------------------------------------------------
// success probabilities

std::vector<Rational> q_series_exact(std::size_t n_max) {
  // (1-p)(1-pz) / ((1-pz)^2 - (1-p)^2 z^2), p = 1/3
  //   = (2/3 - 2z/9) / (1 - 2z/3 - z^2/3)
  std::vector<Rational> q(n_max + 1);
  const Rational num0(2, 3), num1(-2, 9), c1(2, 3), c2(1, 3);
  for (std::size_t n = 0; n <= n_max; ++n) {
    Rational v = n == 0 ? num0 : (n == 1 ? num1 : Rational(0));
    if (n >= 1) v += c1 * q[n - 1];
    if (n >= 2) v += c2 * q[n - 2];
    v.canonicalize();
    q[n] = v;
  }
  return q;
}

std::vector<double> q_series(const SchemeSpec& spec, std::size_t n_max) {
  TruncatedSeries<double> bh(n_max), dh(n_max);
  if (spec.sampler->is_walk()) {
    // B(rho z)/B(rho) = z^a (1-p)^2/(1-pz)^2, D(rho z)/D(rho) = (1-p)/(1-pz)
    const double p = spec.weight_u * spec.rho;
    const std::size_t atom = spec.cls == SchemeClass::motzkin ? 2 : 1;
    const double Brho = std::pow(spec.rho, static_cast<double>(atom)) / ((1 - p) * (1 - p));
    const double Drho = 1 / (1 - p);
    double pw = 1;
    for (std::size_t i = 0; i <= n_max; ++i) {
      dh[i] = pw / Drho;
      if (i + atom <= n_max)
        bh[i + atom] = static_cast<double>(i + 1) * pw * std::pow(spec.rho, static_cast<double>(atom)) / Brho;
      pw *= p;
    }
    // spec.B_rho and spec.D_rho are the stored values; a wrong rho shows up here
    for (auto& x : bh.coefficients()) x *= Brho / spec.B_rho;
    for (auto& x : dh.coefficients()) x *= Drho / spec.D_rho;
  } else {
    auto b = spec.family->b_scaled(std::max<std::size_t>(n_max, 1));
    const double scale = spec.rho / spec.family->rho();
    double pw = 1;
    for (std::size_t i = 0; i <= n_max; ++i) {
      bh[i] = b[i] * pw / spec.B_rho;
      pw *= scale;
    }
    dh[0] = 1;
  }
  auto inv = series_inv_one_minus(bh);
  auto q = series_mul(dh, inv);
  std::vector<double> out(n_max + 1);
  // periodic schemes: only cores in the support count as successes
  if (spec.support.period > 1) {
    TruncatedSeries<double> acc(n_max);
    TruncatedSeries<double> pw(n_max);
    pw[0] = 1;
    for (std::size_t k = 0; k <= n_max; ++k) {
      if (spec.support.contains(k))
        for (std::size_t i = 0; i <= n_max; ++i) acc[i] += pw[i];
      pw = series_mul(pw, bh);
      bool zero = true;
      for (double x : pw.coefficients()) zero = zero && x == 0.0;
      if (zero) break;
    }
    q = series_mul(dh, acc);
  }
  for (std::size_t i = 0; i <= n_max; ++i) out[i] = q[i];
  return out;
}

// ---------------------------------------------------------------------------
// distortion and core laws

Rational distortion(std::uint64_t n, std::uint64_t k) {
  if (2 * k > n) throw std::invalid_argument("distortion: k outside the support at this n");
  thread_local std::vector<BigInt> M{1, 1}, cat{1};
  while (M.size() <= n) {
    const std::size_t m = M.size();
    BigInt v = M[m - 1] * static_cast<unsigned long>(2 * m + 1) + M[m - 2] * static_cast<unsigned long>(3 * (m - 1));
    v /= static_cast<unsigned long>(m + 2);
    M.push_back(v);
  }
  while (cat.size() <= k) {
    const std::size_t j = cat.size() - 1;
    BigInt v = cat[j] * static_cast<unsigned long>(2 * (2 * j + 1));
    v /= static_cast<unsigned long>(j + 2);
    cat.push_back(v);
  }
  // c_n rho^n / (q_n D(rho) a_k B(rho)^k), q_n = (3^n + (-1)^n) / 3^{n+1}
  BigInt qnum = pow_ui(3, n) + (n % 2 ? -1 : 1);
  return make_q(M[n] * pow_ui(4, k) * 2, qnum * cat[k]);
}

ExactDist motzkin_core_law_uniform(std::uint64_t n) {
  auto row = motzkin_row(n);
  BigInt c = 0;
  for (auto& x : row) c += x;
  ExactDist d;
  d.n = n;
  d.total = 0;
  for (auto& x : row) {
    d.prob.push_back(make_q(x, c));
    d.total += d.prob.back();
  }
  return d;
}

ExactDist motzkin_core_law_leap(std::uint64_t n) {
  auto q = q_series_exact(n)[n];
  ExactDist d;
  d.n = n;
  d.total = 0;
  // binom(n,2k) 4^k 3^{-n} / (q_n D(rho))
  BigInt b = 1;
  std::uint64_t j = 0;
  const Rational den = q * Rational(3, 2);
  const BigInt p3 = pow_ui(3, n);
  for (std::uint64_t k = 0; 2 * k <= n; ++k) {
    while (j < 2 * k) {
      b *= static_cast<unsigned long>(n - j);
      b /= static_cast<unsigned long>(j + 1);
      ++j;
    }
    Rational p = make_q(b * pow_ui(4, k), p3);
    p /= den;
    p.canonicalize();
    d.prob.push_back(p);
    d.total += p;
  }
  return d;
}

std::vector<HighFloat> motzkin_core_law_rej(std::uint64_t n, int r, double a, HighFloat* W) {
  auto leap = motzkin_core_law_leap(n);
  std::vector<HighFloat> p(leap.prob.size());
  HighFloat tot = 0;
  const HighFloat ah(a);
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = to_high(leap.prob[k]) * motzkin_w<HighFloat>(r, ah, n, k);
    tot += p[k];
  }
  for (auto& x : p) x /= tot;
  if (W) *W = tot;
  return p;
}

std::vector<long double> motzkin_core_law_rej_float(std::uint64_t n, int r, double a, long double* W) {
  auto L = motzkin_float_laws(n);
  std::vector<long double> p(L.P.size());
  long double tot = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = L.leap(k) * motzkin_w<long double>(r, a, n, k);
    tot += p[k];
  }
  for (auto& x : p) x /= tot;
  if (W) *W = tot;
  return p;
}

// ---------------------------------------------------------------------------
// total variation

Rational tv_exact(std::uint64_t n) {
  auto q = q_series_exact(n)[n];
  // Q = 3^{n+1} q_n is an integer and pi'(k) = 2 binom(n,2k) 4^k / Q
  Rational Qr = q * Rational(pow_ui(3, n + 1));
  Qr.canonicalize();
  if (Qr.get_den() != 1) throw std::logic_error("tv_exact: 3^{n+1} q_n is not an integer");
  const BigInt Q = Qr.get_num();
  auto row = motzkin_row(n);
  BigInt c = 0;
  for (auto& x : row) c += x;
  BigInt sum = 0, signed_sum = 0, b = 1, p4 = 1;
  std::uint64_t j = 0;
  for (std::uint64_t k = 0; 2 * k <= n; ++k) {
    while (j < 2 * k) {
      b *= static_cast<unsigned long>(n - j);
      b /= static_cast<unsigned long>(j + 1);
      ++j;
    }
    BigInt diff = row[k] * Q - 2 * b * p4 * c;
    signed_sum += diff;
    sum += abs(diff);
    p4 *= 4;
  }
  if (signed_sum != 0) throw std::logic_error("tv_exact: leap law does not sum to one");
  return make_q(sum, 2 * c * Q);
}

long double tv_float(std::uint64_t n) {
  auto L = motzkin_float_laws(n);
  std::vector<long double> f(L.P.size(), (2.0L / 3) / L.q);
  return half_weighted_abs(L, f);
}

TvValue tv_rej_exact(std::uint64_t n, int r, double a) {
  TvValue out;
  if (r == 0) {
    // constant weights: the rejection law is the leap law
    out.value = to_high(tv_exact(n));
    out.error_bound = out.value * high_eps();
    out.W = HighFloat(a);
    return out;
  }
  auto uni = motzkin_core_law_uniform(n);
  auto rej = motzkin_core_law_rej(n, r, a, &out.W);
  HighFloat s = 0;
  for (std::size_t k = 0; k < rej.size(); ++k) s += abs(to_high(uni.prob[k]) - rej[k]);
  out.value = s / 2;
  // a few roundings per term at 64 digits
  out.error_bound = HighFloat(8 * (rej.size() + 1)) * high_eps();
  return out;
}

long double tv_rej_float(std::uint64_t n, int r, double a, long double* W) {
  auto L = motzkin_float_laws(n);
  auto rej = motzkin_core_law_rej_float(n, r, a, W);
  // pi_rej(k) = P_k f_k
  std::vector<long double> f(rej.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = L.P[k] > 0 ? rej[k] / L.P[k] : 0.0L;
  return half_weighted_abs(L, f);
}

// ---------------------------------------------------------------------------
// heights

const BigInt& HeightTable::at(std::size_t k, std::size_t h) const {
  static const BigInt zero = 0;
  if (k >= a.size() || h >= a[k].size()) return zero;
  return a[k][h];
}

HeightTable dyck_height_table(std::size_t k_max, std::size_t h_max) {
  h_max = std::min(h_max, k_max);
  auto cat = catalan_numbers(k_max);
  // f[k] for the current bound h: walks of semilength k with height <= h
  std::vector<BigInt> prev(k_max + 1, BigInt(0)), cur(k_max + 1);
  HeightTable t;
  t.a.assign(k_max + 1, {});
  for (std::size_t k = 0; k <= k_max; ++k) t.a[k].assign(std::min(k, h_max) + 1, BigInt(0));
  for (std::size_t h = 0; h <= h_max; ++h) {
    // ballot DP bounded by h; f_h[k] = Cat_k once k <= h
    std::vector<BigInt> v(h + 2, BigInt(0)), w(h + 2, BigInt(0));
    v[0] = 1;
    cur[0] = 1;
    for (std::size_t i = 1; i <= 2 * k_max; ++i) {
      const std::size_t top = std::min({i, h, 2 * k_max - i});
      for (std::size_t y = (i & 1); y <= top; y += 2) {
        w[y] = 0;
        if (y >= 1) w[y] += v[y - 1];
        if (y + 1 <= h && y + 1 <= i - 1) w[y] += v[y + 1];
      }
      std::swap(v, w);
      if ((i & 1) == 0) cur[i / 2] = v[0];
    }
    for (std::size_t k = 0; k <= k_max; ++k) {
      if (k <= h) cur[k] = cat[k];
      if (h < t.a[k].size()) t.a[k][h] = cur[k] - (h == 0 ? BigInt(0) : prev[k]);
    }
    std::swap(prev, cur);
  }
  return t;
}

namespace {

void check_height_table(std::uint64_t n, const HeightTable& t) {
  const std::size_t K = n / 2;
  if (t.a.size() <= K || t.a[K].size() < K + 1)
    throw std::invalid_argument("height table too small for n = " + std::to_string(n));
}

}  // namespace

ExactDist height_law(std::uint64_t n, const HeightQuery& q, const HeightTable& t) {
  if (q.dist == CoreDist::rej) throw std::invalid_argument("height_law: rejection law is not rational; use height_law_high");
  check_height_table(n, t);
  const std::size_t K = n / 2;
  auto cat = catalan_numbers(K);
  ExactDist core = q.dist == CoreDist::uniform ? motzkin_core_law_uniform(n) : motzkin_core_law_leap(n);
  ExactDist d;
  d.n = n;
  d.prob.assign(K + 1, Rational(0));
  for (std::size_t k = 0; k <= K; ++k) {
    if (core.prob[k] == 0) continue;
    Rational wk = core.prob[k] / Rational(cat[k]);
    wk.canonicalize();
    for (std::size_t h = 0; h <= k; ++h) {
      const BigInt& c = t.at(k, h);
      if (c == 0) continue;
      d.prob[h] += wk * Rational(c);
    }
  }
  d.total = 0;
  for (auto& p : d.prob) {
    p.canonicalize();
    d.total += p;
  }
  return d;
}

std::vector<HighFloat> height_law_high(std::uint64_t n, const HeightQuery& q, const HeightTable& t) {
  check_height_table(n, t);
  const std::size_t K = n / 2;
  auto cat = catalan_numbers(K);
  std::vector<HighFloat> core(K + 1);
  if (q.dist == CoreDist::rej) {
    core = motzkin_core_law_rej(n, q.r, q.a);
  } else {
    auto e = q.dist == CoreDist::uniform ? motzkin_core_law_uniform(n) : motzkin_core_law_leap(n);
    for (std::size_t k = 0; k <= K; ++k) core[k] = to_high(e.prob[k]);
  }
  std::vector<HighFloat> out(K + 1, HighFloat(0));
  for (std::size_t k = 0; k <= K; ++k) {
    HighFloat wk = core[k] / to_high(cat[k]);
    for (std::size_t h = 0; h <= k; ++h) {
      const BigInt& c = t.at(k, h);
      if (c != 0) out[h] += wk * to_high(c);
    }
  }
  return out;
}

HighFloat tv_height(std::uint64_t n, const HeightQuery& q, const HeightTable& t) {
  if (q.dist == CoreDist::uniform) return HighFloat(0);
  if (q.dist == CoreDist::leap) {
    auto u = height_law(n, HeightQuery{CoreDist::uniform}, t);
    auto l = height_law(n, q, t);
    Rational s = 0;
    for (std::size_t h = 0; h < u.prob.size(); ++h) s += abs(u.prob[h] - l.prob[h]);
    s /= 2;
    return to_high(s);
  }
  auto u = height_law_high(n, HeightQuery{CoreDist::uniform}, t);
  auto l = height_law_high(n, q, t);
  HighFloat s = 0;
  for (std::size_t h = 0; h < u.size(); ++h) s += abs(u[h] - l[h]);
  return s / 2;
}

// ---------------------------------------------------------------------------
// tree core laws

FloatDist generic_core_law(const SchemeSpec& spec, std::uint64_t n, CoreDist dist) {
  if (spec.sampler->is_walk() || !spec.family) throw std::invalid_argument("generic_core_law: tree schemes only");
  if (n > 500) throw std::invalid_argument("generic_core_law: n must be <= 500");
  if (n < 1) throw std::invalid_argument("generic_core_law: n must be >= 1");
  if (dist == CoreDist::rej) throw std::invalid_argument("generic_core_law: rejection law not supported");
  const auto& fam = *spec.family;
  auto b = fam.b_scaled(std::max<std::uint64_t>(n, 16)).truncated(n);
  for (auto& x : b.coefficients()) x /= spec.B_rho;
  // [z^n] bh^k for k = 0..n
  std::vector<double> coef(n + 1, 0.0);
  TruncatedSeries<double> pw(n);
  pw[0] = 1;
  for (std::uint64_t k = 1; k <= n; ++k) {
    pw = series_mul(pw, b);
    coef[k] = pw[n];
  }
  FloatDist d;
  d.n = n;
  d.prob.assign(n + 1, 0.0);
  double tot = 0;
  if (dist == CoreDist::leap) {
    for (std::uint64_t k = 1; k <= n; ++k)
      if (spec.support.contains(k)) d.prob[k] = coef[k];
  } else {
    // a_k B(rho)^k [z^n](B(rho z)/B(rho))^k, scaled by its maximum in log space
    std::vector<double> lw(n + 1, -INFINITY);
    double mx = -INFINITY;
    for (std::uint64_t k = 1; k <= n; ++k) {
      if (!spec.support.contains(k) || coef[k] <= 0) continue;
      lw[k] = fam.log_core_coeff(k) + static_cast<double>(k) * std::log(spec.B_rho) + std::log(coef[k]);
      mx = std::max(mx, lw[k]);
    }
    for (std::uint64_t k = 1; k <= n; ++k)
      if (std::isfinite(lw[k])) d.prob[k] = std::exp(lw[k] - mx);
  }
  for (double x : d.prob) tot += x;
  for (auto& x : d.prob) x /= tot;
  d.total = 0;
  for (double x : d.prob) d.total += x;
  return d;
}

// ---------------------------------------------------------------------------
// expansion coefficients

HighFloat richardson_limit(const std::function<HighFloat(std::uint64_t)>& f, std::uint64_t K, unsigned m) {
  HighFloat r = 0;
  HighFloat fact_m = 1;
  for (unsigned i = 2; i <= m; ++i) fact_m *= i;
  for (unsigned j = 0; j <= m; ++j) {
    HighFloat binom = 1;
    for (unsigned i = 0; i < j; ++i) binom = binom * (m - i) / (i + 1);
    HighFloat term = f(K + j) * boost::multiprecision::pow(HighFloat(static_cast<double>(K + j)), m) * binom;
    if ((m + j) % 2) term = -term;
    r += term;
  }
  return r / fact_m;
}

ExpansionEstimate estimate_expansion(const std::function<HighFloat(std::uint64_t)>& scaled, std::uint64_t K,
                                     unsigned m) {
  auto one = [&](std::uint64_t KK) {
    HighFloat kappa = richardson_limit(scaled, KK, m);
    HighFloat first = richardson_limit(
        [&](std::uint64_t k) { return HighFloat(static_cast<double>(k)) * (scaled(k) / kappa - 1); }, KK, m);
    return std::make_pair(kappa, first);
  };
  auto [k1, f1] = one(K);
  auto [k2, f2] = one(K / 2);
  ExpansionEstimate e;
  e.kappa = k1;
  e.first = f1;
  e.spread = abs(f1 - f2);
  return e;
}

ExpansionEstimate catalan_expansion(std::uint64_t K, unsigned m) {
  auto cat = catalan_numbers(K + m + 1);
  auto scaled = [&](std::uint64_t k) {
    HighFloat kk(static_cast<double>(k));
    return to_high(cat[k]) / boost::multiprecision::pow(HighFloat(4), kk) * kk * sqrt(kk);
  };
  return estimate_expansion(scaled, K, m);
}

ExpansionEstimate motzkin_expansion(std::uint64_t K, unsigned m) {
  auto M = motzkin_numbers(K + m + 1);
  auto scaled = [&](std::uint64_t k) {
    HighFloat kk(static_cast<double>(k));
    return to_high(M[k]) / boost::multiprecision::pow(HighFloat(3), kk) * kk * sqrt(kk);
  };
  return estimate_expansion(scaled, K, m);
}

}  // namespace leapgen
