#include <cmath>

#include "doctest.h"
#include "leapgen/boltzmann.hpp"
#include "leapgen/exact.hpp"
#include "leapgen/scheme.hpp"
#include "leapgen/series.hpp"
#include "leapgen/tree_classes.hpp"
#include "oracles.hpp"

using namespace leapgen;

TEST_CASE("series_mul examples") {
  TruncatedSeries<Rational> a(std::vector<Rational>{1, 1, 0, 0});
  auto sq = series_mul(a, a);
  CHECK(sq == TruncatedSeries<Rational>(std::vector<Rational>{1, 2, 1, 0}));
  TruncatedSeries<Rational> zero(3);
  CHECK(series_mul(a, zero) == zero);

  // z^2/(1-z)^2 = (sum_{i>=1} z^i)^2
  TruncatedSeries<Rational> geo(6);
  for (int i = 1; i <= 6; ++i) geo[i] = 1;
  auto b = series_mul(geo, geo);
  CHECK(b == TruncatedSeries<Rational>(std::vector<Rational>{0, 0, 1, 2, 3, 4, 5}));

  // truncation at the smaller order
  TruncatedSeries<Rational> c(2);
  c[0] = 1;
  CHECK(series_mul(geo, c).order() == 2);
}

TEST_CASE("series_mul double path (SIMD convolution) agrees with rationals") {
  Rng r(5);
  const std::size_t n = 300;
  TruncatedSeries<double> a(n), b(n);
  TruncatedSeries<Rational> qa(n), qb(n);
  for (std::size_t i = 0; i <= n; ++i) {
    auto x = static_cast<long>(r.below(1000)), y = static_cast<long>(r.below(1000));
    a[i] = static_cast<double>(x) / 1024;
    b[i] = static_cast<double>(y) / 1024;
    qa[i] = Rational(x) / 1024;
    qb[i] = Rational(y) / 1024;
  }
  auto d = series_mul(a, b);
  auto q = series_mul(qa, qb);
  for (std::size_t i = 0; i <= n; ++i) CHECK(d[i] == doctest::Approx(to_double(q[i])).epsilon(1e-14));
}

TEST_CASE("series exp/log/pow against naive expansions") {
  oracle::Poly f(10, 0);
  TruncatedSeries<Rational> s(9);
  for (int i = 1; i < 10; ++i) {
    Rational c(i, i + 2);
    c.canonicalize();
    f[i] = c;
    s[i] = c;
  }
  auto e1 = series_exp(s);
  auto e2 = oracle::exp_naive(f);
  auto l1 = series_log_inv_one_minus(s);
  auto l2 = oracle::log_inv_naive(f);
  auto p1 = series_pow(s, 3);
  auto p2 = oracle::powr(f, 3);
  for (int i = 0; i < 10; ++i) {
    CHECK(e1[i] == e2[i]);
    CHECK(l1[i] == l2[i]);
    CHECK(p1[i] == p2[i]);
  }
  s[0] = 1;
  CHECK_THROWS_AS(series_exp(s), std::invalid_argument);
}

TEST_CASE("solve_polya_series: N=7 example and enumeration to 12") {
  auto g = solve_polya_series<Rational>(7);
  std::vector<long> want{0, 1, 1, 2, 4, 9, 20, 48};
  for (int i = 0; i <= 7; ++i) CHECK(g[i] == want[i]);
  auto brute = oracle::rooted_trees(12);
  auto g12 = solve_polya_series<Rational>(12);
  CHECK(g12[0] == 0);
  for (int n = 1; n <= 12; ++n) CHECK(g12[n] == static_cast<long>(brute[n].size()));
}

TEST_CASE("solve_phylo_series: N=8 example and enumeration to 12") {
  auto g = solve_phylo_series<Rational>(8);
  std::vector<long> want{0, 1, 1, 1, 2, 3, 6, 11, 23};
  for (int i = 0; i <= 8; ++i) CHECK(g[i] == want[i]);
  auto brute = oracle::binary_trees(12);
  auto g12 = solve_phylo_series<Rational>(12);
  for (int n = 1; n <= 12; ++n) CHECK(g12[n] == static_cast<long>(brute[n].size()));
}

TEST_CASE("mobile series match brute-force enumeration") {
  for (unsigned k : {2u, 3u, 4u, 5u}) {
    auto brute = oracle::mobiles(11, k);
    auto g = solve_tree_series<Rational>({TreeKind::kary_mobile, k}, 11);
    for (int n = 1; n <= 11; ++n) CHECK(g[n] == static_cast<long>(brute[n].size()));
  }
  auto brute = oracle::mobiles(10, 0);
  auto g = solve_tree_series<Rational>({TreeKind::schroder_mobile, 0}, 10);
  for (int n = 1; n <= 10; ++n) CHECK(g[n] == static_cast<long>(brute[n].size()));
}

TEST_CASE("fixed point is idempotent past convergence") {
  for (auto eq : {TreeEquation{TreeKind::polya, 0}, TreeEquation{TreeKind::phylo, 0},
                  TreeEquation{TreeKind::kary_mobile, 3}, TreeEquation{TreeKind::schroder_mobile, 0}}) {
    auto g = solve_tree_series<Rational>(eq, 25);
    auto again = detail::tree_step(eq, g, Rational(1));
    CHECK(again == g);
  }
  CHECK_THROWS_AS(solve_polya_series<Rational>(0), std::invalid_argument);
}

TEST_CASE("B series from the family match the class identities") {
  for (std::string id : {"polya", "phylo", "mobile:3", "mobile:4", "schroder-mobile"}) {
    auto spec = make_scheme(id);
    auto fam = spec.family;
    const int N = 12;
    auto a = fam->a_tilde_exact(N);
    oracle::Poly pa(a.coefficients().begin(), a.coefficients().end());
    auto want = oracle::b_from_a(id, pa);
    auto b = fam->b_exact(N);
    for (int n = 0; n <= N; ++n) CHECK_MESSAGE(b[n] == want[n], id << " n=" << n);
  }
}

TEST_CASE("singularities: corrected ratio estimate and stored rho") {
  auto polya = TreeFamily::get(TreeKind::polya);
  auto phylo = TreeFamily::get(TreeKind::phylo);
  CHECK(std::fabs(polya->rho() - 0.338) < 5e-4);
  CHECK(std::fabs(phylo->rho() - 0.403) < 5e-4);
  CHECK(std::fabs(polya->ratio_estimate(400) - polya->rho()) < 1e-4);
  CHECK(std::fabs(phylo->ratio_estimate(400) - phylo->rho()) < 1e-4);
  // Otter's constant
  CHECK(polya->rho() == doctest::Approx(0.3383218568992076951961126).epsilon(1e-14));
  CHECK(polya->rho_A() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(polya->B(polya->rho()) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(phylo->B(phylo->rho()) == doctest::Approx(0.5).epsilon(1e-12));
  auto sm = TreeFamily::get(TreeKind::schroder_mobile);
  CHECK(sm->B(sm->rho()) == doctest::Approx(1 - std::log(2.0)).epsilon(1e-12));
  for (unsigned k = 2; k <= 6; ++k) {
    auto m = TreeFamily::get(TreeKind::kary_mobile, k);
    CHECK(m->B(m->rho()) == doctest::Approx(1.0 - 1.0 / k).epsilon(1e-12));
  }
  CHECK_THROWS(TreeFamily::get(TreeKind::kary_mobile, 1));
}

TEST_CASE("A~(x) two ways agree; eval rejects x beyond rho") {
  for (auto kind : {TreeKind::polya, TreeKind::phylo}) {
    auto fam = TreeFamily::get(kind);
    for (double f : {0.3, 0.5, 0.65}) {
      double x = f * fam->rho();
      CHECK(fam->eval_series(x) == doctest::Approx(fam->eval_composed(x)).epsilon(1e-11));
    }
    CHECK(fam->eval(fam->rho()) == doctest::Approx(fam->a_tilde_at_rho()).epsilon(1e-10));
    CHECK_THROWS_AS(fam->eval(fam->rho() * 1.01), std::domain_error);
  }
}

TEST_CASE("EvalTable: decreasing values, tail bound, monotone cutoff") {
  auto fam = TreeFamily::get(TreeKind::polya);
  const double x = fam->rho();
  auto t = build_eval_table(fam, x);
  CHECK(t.tail_bound(t.cutoff()) < kDefaultTableEps);
  for (std::size_t j = 1; j < t.cutoff() + 5; ++j) CHECK(t.at(j + 1) < t.at(j));
  auto t10 = build_eval_table(fam, x, kDefaultTableEps / 10);
  CHECK(t10.cutoff() >= t.cutoff());
  for (std::size_t j = 1; j <= t.cutoff(); ++j) CHECK(std::fabs(t10.at(j) - t.at(j)) < kDefaultTableEps);
  auto small = build_eval_table(fam, 1e-6);
  for (std::size_t j = 1; j <= small.cutoff(); ++j) CHECK(small.at(j) < 2e-6);
  CHECK_THROWS_AS(build_eval_table(fam, 0.35), std::domain_error);
  CHECK_THROWS(build_eval_table(fam, 0.0));
}

TEST_CASE("boltzmann_moments: closed forms") {
  // Motzkin B(z) = z^2/(1-z)^2 at 1/3
  GfHandle b{"motzkin-B", 1.0, false, [](double x) { return x * x / ((1 - x) * (1 - x)); },
             [](double x) { return 2 * x / std::pow(1 - x, 3); },
             [](double x) { return (4 * x + 2) / std::pow(1 - x, 4); }};
  auto m = boltzmann_moments(b, 1.0 / 3);
  CHECK(m.mu == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(m.sigma * m.sigma == doctest::Approx(1.5).epsilon(1e-13));
  GfHandle seq{"seq", 1.0, false, [](double x) { return 1 / (1 - x); },
               [](double x) { return 1 / ((1 - x) * (1 - x)); },
               [](double x) { return 2 / std::pow(1 - x, 3); }};
  auto s = boltzmann_moments(seq, 0.5);
  CHECK(s.mu == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(boltzmann_moments(seq, 1.0), std::domain_error);

  // series route agrees within 10x its tail bound
  TruncatedSeries<double> scaled(400);
  const double x = 1.0 / 3;
  for (std::size_t n = 2; n <= 400; ++n) scaled[n] = static_cast<double>(n - 1) * std::pow(x, n);
  double tail = 0;
  auto ms = boltzmann_moments_scaled(scaled, x, "motzkin-B", &tail);
  CHECK(std::fabs(ms.mu - 3.0) <= 10 * tail + 1e-13);
  CHECK(std::fabs(ms.value - 0.25) <= 10 * tail + 1e-15);
}

TEST_CASE("scheme moments agree with a direct series computation") {
  for (std::string id : {"polya", "phylo", "mobile:3", "schroder-mobile"}) {
    auto spec = make_scheme(id);
    auto b = spec.family->b_scaled(2000);
    double v = 0, m1 = 0, m2 = 0;
    for (std::size_t n = 0; n <= 2000; ++n) {
      v += b[n];
      m1 += static_cast<double>(n) * b[n];
      m2 += static_cast<double>(n) * n * b[n];
    }
    CHECK_MESSAGE(spec.mu == doctest::Approx(m1 / v).epsilon(1e-9), id);
    CHECK_MESSAGE(spec.sigma == doctest::Approx(std::sqrt(m2 / v - (m1 / v) * (m1 / v))).epsilon(1e-8), id);
    CHECK(spec.B_rho == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("q_series: Motzkin examples and limits for every scheme") {
  auto q = q_series_exact(50);
  CHECK(q[0] == Rational(2, 3));
  CHECK(q[1] == Rational(2, 9));
  CHECK(std::fabs(to_double(q[50]) - 1.0 / 3) < 1e-6);
  for (std::string id : {"motzkin", "schroder", "polya", "phylo", "mobile:3", "mobile:4", "schroder-mobile"}) {
    auto spec = make_scheme(id);
    auto qs = q_series(spec, 300);
    for (double v : qs) {
      CHECK(v >= -1e-15);
      CHECK(v <= 1 + 1e-15);
    }
    // supported sizes converge to 1/mu, unsupported sizes have q = 0
    for (std::size_t n = 290; n <= 300; ++n) {
      if (spec.sampler->size_supported(n))
        CHECK_MESSAGE(std::fabs(qs[n] - 1 / spec.mu) < 1e-9, id << " n=" << n);
      else
        CHECK_MESSAGE(qs[n] == 0.0, id << " n=" << n);
    }
  }
  auto mq = q_series(make_scheme("motzkin"), 50);
  for (int n = 0; n <= 50; ++n) CHECK(mq[n] == doctest::Approx(to_double(q[n])).epsilon(1e-13));
}
