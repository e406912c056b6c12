#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "leapgen/numeric.hpp"
#include "leapgen/scheme.hpp"

namespace leapgen {

// exact law over an integer index (core size or height)
struct ExactDist {
  std::uint64_t n = 0;
  std::vector<Rational> prob;
  Rational total;  // sum of prob, kept as a check
};

struct FloatDist {
  std::uint64_t n = 0;
  std::vector<double> prob;
  double total = 0;
};

// c_n, a_k = Catalan(k), c_{n,k} = Cat_k binom(n,2k) for the Motzkin scheme
struct CountTable {
  std::vector<BigInt> c;                  // c_n, n = 0..n_max
  std::vector<BigInt> a;                  // Catalan(k), k = 0..n_max/2
  std::vector<std::vector<BigInt>> c_nk;  // row n, k = 0..n/2
  Rational rho{1, 3}, B_rho{1, 4}, D_rho{3, 2};
};

CountTable motzkin_counts(std::size_t n_max);
std::vector<BigInt> catalan_numbers(std::size_t k_max);
std::vector<BigInt> motzkin_numbers(std::size_t n_max);  // three-term recurrence
std::vector<BigInt> motzkin_row(std::size_t n);          // c_{n,k}, k = 0..n/2

// q_n = [z^n] D(rho z)/D(rho) / (1 - B(rho z)/B(rho)); exact for motzkin
std::vector<Rational> q_series_exact(std::size_t n_max);
// floating version for any scheme; uses spec.rho as given
std::vector<double> q_series(const SchemeSpec& spec, std::size_t n_max);

// d_{n,k} = c_n rho^n / (q_n D(rho) a_k B(rho)^k)  (motzkin, exact)
Rational distortion(std::uint64_t n, std::uint64_t k);

// core-size laws at size n (motzkin): uniform, leap, rejection
ExactDist motzkin_core_law_uniform(std::uint64_t n);
ExactDist motzkin_core_law_leap(std::uint64_t n);
std::vector<HighFloat> motzkin_core_law_rej(std::uint64_t n, int r, double a, HighFloat* W = nullptr);
std::vector<long double> motzkin_core_law_rej_float(std::uint64_t n, int r, double a, long double* W = nullptr);

// d_TV(pi_n, pi'_n)
Rational tv_exact(std::uint64_t n);
long double tv_float(std::uint64_t n);

struct TvValue {
  HighFloat value;
  HighFloat error_bound;  // |true - value| <= error_bound
  HighFloat W;            // acceptance normalizer W_n
};
// d_TV(pi_n, pi^rej_n); exact counts and distortions, w_{n,k} in 64-digit floats
TvValue tv_rej_exact(std::uint64_t n, int r, double a);
long double tv_rej_float(std::uint64_t n, int r, double a, long double* W = nullptr);

// a[k][h] = number of Dyck walks of semilength k and height exactly h
struct HeightTable {
  std::vector<std::vector<BigInt>> a;
  const BigInt& at(std::size_t k, std::size_t h) const;
};
HeightTable dyck_height_table(std::size_t k_max, std::size_t h_max);

enum class CoreDist { uniform, leap, rej };
struct HeightQuery {
  CoreDist dist = CoreDist::uniform;
  int r = 1;
  double a = 0.5;
};

// law of the height of a size-n motzkin walk; exact for uniform and leap
ExactDist height_law(std::uint64_t n, const HeightQuery& q, const HeightTable& t);
std::vector<HighFloat> height_law_high(std::uint64_t n, const HeightQuery& q, const HeightTable& t);
// distance between the uniform height law and the one under q.dist
HighFloat tv_height(std::uint64_t n, const HeightQuery& q, const HeightTable& t);

// core-size law for a tree scheme at n <= 500 (floating)
FloatDist generic_core_law(const SchemeSpec& spec, std::uint64_t n, CoreDist dist = CoreDist::uniform);

// limit of f(k) as k -> inf for f(k) = L + b1/k + ... ; order m Richardson at k = K..K+m
HighFloat richardson_limit(const std::function<HighFloat(std::uint64_t)>& f, std::uint64_t K, unsigned m);

struct ExpansionEstimate {
  HighFloat kappa;   // leading constant
  HighFloat first;   // first correction coefficient
  HighFloat spread;  // |estimate(K) - estimate(K/2)|
};
// log-coefficients l(k) = log(f_k rho^k k^{1-s}); estimates kappa and f^1
ExpansionEstimate estimate_expansion(const std::function<HighFloat(std::uint64_t)>& scaled, std::uint64_t K,
                                     unsigned m);
ExpansionEstimate catalan_expansion(std::uint64_t K = 400, unsigned m = 12);
ExpansionEstimate motzkin_expansion(std::uint64_t K = 400, unsigned m = 12);

}  // namespace leapgen
