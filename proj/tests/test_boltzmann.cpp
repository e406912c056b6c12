#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "leapgen/boltzmann.hpp"
#include "leapgen/scheme.hpp"
#include "oracles.hpp"

using namespace leapgen;

namespace {

double q_to_double(const oracle::Q& q) { return q.get_d(); }

// empirical law of an integer statistic, each listed cell within 4 sigma
void check_cells(const std::map<std::uint64_t, std::uint64_t>& obs, std::uint64_t draws,
                 const std::map<std::uint64_t, double>& p) {
  for (auto& [k, pk] : p) {
    auto it = obs.find(k);
    std::uint64_t hits = it == obs.end() ? 0 : it->second;
    if (pk == 0.0) {
      CHECK_MESSAGE(hits == 0, "cell " << k);
      continue;
    }
    CHECK_MESSAGE(std::fabs(oracle::zscore(hits, draws, pk)) < 4.0, "cell " << k << " hits " << hits << " p " << pk);
  }
}

void check_mean(double sum, double sum2, std::uint64_t n, double expect) {
  double m = sum / static_cast<double>(n);
  double var = sum2 / static_cast<double>(n) - m * m;
  double se = std::sqrt(var / static_cast<double>(n));
  CHECK_MESSAGE(std::fabs(m - expect) < 4 * se, "mean " << m << " expected " << expect << " se " << se);
}

std::uint64_t atoms(const RootedTree& t, std::int32_t v, bool leaves) {
  std::uint64_t n = 0;
  std::vector<std::int32_t> st{v};
  while (!st.empty()) {
    auto u = st.back();
    st.pop_back();
    bool leaf = t.first_child(u) == RootedTree::kNone;
    if (!leaves || leaf) ++n;
    for (auto c = t.first_child(u); c != RootedTree::kNone; c = t.next_sibling(c)) st.push_back(c);
  }
  return n;
}

struct ClassCase {
  const char* id;
  TreeKind kind;
  unsigned arity;
  double b_rho;  // closed form of B(rho)
};

const std::vector<ClassCase>& tree_cases() {
  static const std::vector<ClassCase> v{
      {"polya", TreeKind::polya, 0, std::exp(-1.0)},
      {"phylo", TreeKind::phylo, 0, 0.5},
      {"mobile:3", TreeKind::kary_mobile, 3, 2.0 / 3},
      {"mobile:4", TreeKind::kary_mobile, 4, 3.0 / 4},
      {"schroder-mobile", TreeKind::schroder_mobile, 0, 1 - std::log(2.0)},
  };
  return v;
}

oracle::Poly brute_a(const ClassCase& c, int n) {
  switch (c.kind) {
    case TreeKind::polya: return oracle::counts_poly(oracle::rooted_trees(n));
    case TreeKind::phylo: return oracle::counts_poly(oracle::binary_trees(n));
    case TreeKind::kary_mobile: return oracle::counts_poly(oracle::mobiles(n, c.arity));
    case TreeKind::schroder_mobile: return oracle::counts_poly(oracle::mobiles(n, 0));
  }
  return {};
}

}  // namespace

TEST_CASE("primitives: trivial laws") {
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(draw_geometric(0.0, r) == 0);
    CHECK(draw_geometric(Ratio{0, 5}, r) == 0);
    CHECK(draw_bernoulli(1.0, r));
    CHECK(draw_bernoulli(Ratio{3, 3}, r));
    CHECK_FALSE(draw_bernoulli(0.0, r));
  }
  CHECK_THROWS(draw_geometric(1.0, r));
  CHECK_THROWS(draw_bernoulli(1.5, r));
  CHECK_THROWS(draw_poisson(-1.0, r));
  CHECK_THROWS(gamma_D_seq(1.0, r));
}

TEST_CASE("primitives: geometric pmf, exact and float thresholds") {
  Rng r(2);
  const std::uint64_t N = 600000;
  std::map<std::uint64_t, std::uint64_t> a, b;
  for (std::uint64_t i = 0; i < N; ++i) {
    ++a[draw_geometric(Ratio{1, 3}, r)];
    ++b[draw_geometric(0.4, r)];
  }
  std::map<std::uint64_t, double> pa, pb;
  for (std::uint64_t k = 0; k < 8; ++k) {
    pa[k] = std::pow(1.0 / 3, static_cast<double>(k)) * (2.0 / 3);
    pb[k] = std::pow(0.4, static_cast<double>(k)) * 0.6;
  }
  check_cells(a, N, pa);
  check_cells(b, N, pb);
}

TEST_CASE("primitives: Poisson >= 1 mean and pmf") {
  Rng r(3);
  for (double lam : {0.05, 0.7, 3.0}) {
    const std::uint64_t N = 1000000;
    double s = 0, s2 = 0;
    std::map<std::uint64_t, std::uint64_t> obs;
    for (std::uint64_t i = 0; i < N; ++i) {
      auto x = draw_poisson_ge1(lam, r);
      REQUIRE(x >= 1);
      s += static_cast<double>(x);
      s2 += static_cast<double>(x) * static_cast<double>(x);
      ++obs[x];
    }
    check_mean(s, s2, N, lam / (1 - std::exp(-lam)));
    std::map<std::uint64_t, double> p;
    double f = 1;
    for (std::uint64_t k = 1; k <= 6; ++k) {
      f *= lam / static_cast<double>(k);
      p[k] = std::exp(-lam) * f / (1 - std::exp(-lam));
    }
    INFO("lambda=" << lam);
    check_cells(obs, N, p);
  }
}

TEST_CASE("primitives: Poisson and binomial means") {
  Rng r(4);
  const std::uint64_t N = 400000;
  double s = 0, s2 = 0, t = 0, t2 = 0;
  for (std::uint64_t i = 0; i < N; ++i) {
    double x = static_cast<double>(draw_poisson(2.5, r));
    double y = static_cast<double>(draw_binomial(1000, 0.3, r));
    s += x, s2 += x * x, t += y, t2 += y * y;
  }
  check_mean(s, s2, N, 2.5);
  check_mean(t, t2, N, 300);
}

TEST_CASE("primitives: logarithmic law at the Schroeder-mobile parameters") {
  auto fam = TreeFamily::get(TreeKind::schroder_mobile);
  const double rho = fam->rho();
  Rng r(5);
  for (std::size_t d : {2u, 3u}) {
    const double th = fam->eval(std::pow(rho, static_cast<double>(d)));
    for (std::uint64_t m0 : {1u, 2u}) {
      double L = std::log(1 / (1 - th));
      for (std::uint64_t m = 1; m < m0; ++m) L -= std::pow(th, static_cast<double>(m)) / static_cast<double>(m);
      CHECK(logarithmic_mass(th, m0) == doctest::Approx(L).epsilon(1e-12));
      const std::uint64_t N = 1000000;
      std::map<std::uint64_t, std::uint64_t> obs;
      for (std::uint64_t i = 0; i < N; ++i) {
        auto m = draw_logarithmic(th, m0, r);
        REQUIRE(m >= m0);
        ++obs[m];
      }
      std::map<std::uint64_t, double> p;
      for (std::uint64_t m = m0; m < m0 + 6; ++m)
        p[m] = std::pow(th, static_cast<double>(m)) / (static_cast<double>(m) * L);
      INFO("d=" << d << " min=" << m0);
      check_cells(obs, N, p);
    }
  }
}

TEST_CASE("Max_Index: table against the product formula, empirical cdf at rho") {
  auto fam = TreeFamily::get(TreeKind::polya);
  const double x = fam->rho();
  TreeBoltzmann b(fam, x);
  auto tab = b.max_index_table(1, 1);
  // P(K <= k) = prod_{j>k} exp(-A~(x^j)/j), evaluated directly
  auto oracle_cdf = [&](std::size_t k) {
    double t = 0;
    for (std::size_t j = k + 1; j < 400; ++j) t += fam->eval(std::pow(x, static_cast<double>(j))) / static_cast<double>(j);
    return std::exp(-t);
  };
  for (std::size_t k = 0; k <= 6; ++k) CHECK(tab.cdf(k) == doctest::Approx(oracle_cdf(k)).epsilon(1e-10));
  double prev = 0;
  for (std::size_t k = 0; k <= tab.cutoff() + 3; ++k) {
    CHECK(tab.cdf(k) >= prev);
    prev = tab.cdf(k);
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));

  Rng r(6);
  const std::uint64_t N = 1000000;
  std::vector<std::uint64_t> le(4, 0);
  for (std::uint64_t i = 0; i < N; ++i) {
    auto K = draw_max_index(tab, r);
    for (std::size_t k = 1; k <= 3; ++k) le[k] += K <= k;
  }
  for (std::size_t k = 1; k <= 3; ++k)
    CHECK_MESSAGE(std::fabs(oracle::zscore(le[k], N, oracle_cdf(k))) < 4.0, "k=" << k);
}

TEST_CASE("Max_Index: x -> 0 leaves only the bare root") {
  auto fam = TreeFamily::get(TreeKind::polya);
  TreeBoltzmann b(fam, 1e-7);
  auto tab = b.max_index_table(1, 2);
  Rng r(7);
  for (int i = 0; i < 100000; ++i) CHECK(draw_max_index(tab, r) == 1);
}

TEST_CASE("EvalTable: decreasing entries, tail below eps, rejects x >= radius") {
  auto fam = TreeFamily::get(TreeKind::polya);
  auto t = build_eval_table(fam, fam->rho());
  for (std::size_t j = 1; j < t.cutoff(); ++j) CHECK(t.at(j + 1) < t.at(j));
  CHECK(t.tail_bound(t.cutoff()) < kDefaultTableEps);
  CHECK(t.at(1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS(build_eval_table(fam, fam->rho() * 1.01));
  auto loose = build_eval_table(fam, fam->rho(), 1e-6);
  CHECK(loose.cutoff() <= t.cutoff());
  for (std::size_t j = 1; j <= loose.cutoff(); ++j) CHECK(std::fabs(loose.at(j) - t.at(j)) < 1e-6);
}

TEST_CASE("Gamma A~ for Polya trees at x = 0.3") {
  auto fam = TreeFamily::get(TreeKind::polya);
  const double x = 0.3;
  TreeBoltzmann b(fam, x);
  auto brute = brute_a(tree_cases()[0], 8);
  const double A = fam->eval(x);
  // moments from the scaled series a_n x^n, geometric decay (x/rho)^n
  auto sc = fam->a_tilde_scaled(600, x);
  double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t n = 1; n <= sc.order(); ++n) {
    double w = sc[n], dn = static_cast<double>(n);
    m0 += w, m1 += dn * w, m2 += dn * dn * w;
  }
  CHECK(m0 == doctest::Approx(A).epsilon(1e-12));
  const double mean = m1 / m0;

  Rng r(8);
  const std::uint64_t N = 1000000;
  std::map<std::uint64_t, std::uint64_t> obs;
  double s = 0;
  std::uint64_t singles = 0;
  RootedTree pool;
  for (std::uint64_t i = 0; i < N; ++i) {
    pool.clear();
    auto res = b.gamma_tree_into(pool, r);
    REQUIRE(res.size == atoms(pool, res.root, false));
    ++obs[res.size];
    singles += res.size == 1;
    s += static_cast<double>(res.size);
  }
  CHECK(std::fabs(oracle::zscore(singles, N, x / A)) < 4.0);
  std::map<std::uint64_t, double> p;
  for (std::uint64_t n = 1; n <= 8; ++n) p[n] = q_to_double(brute[n]) * std::pow(x, static_cast<double>(n)) / A;
  check_cells(obs, N, p);
  const double var = m2 / m0 - mean * mean;
  CHECK(std::fabs(s / N - mean) < 4 * std::sqrt(var / N));
}

TEST_CASE("Gamma A~ shapes are uniform within a size") {
  auto fam = TreeFamily::get(TreeKind::polya);
  TreeBoltzmann b(fam, 0.3);
  Rng r(9);
  std::map<std::string, std::uint64_t> obs;
  std::uint64_t total = 0;
  while (total < 200000) {
    auto t = b.gamma_tree(r);
    if (t.node_count() != 5) continue;
    ++obs[oracle::shape(t)];
    ++total;
  }
  std::map<std::string, double> p;
  auto all = oracle::rooted_trees(5);
  for (auto& s : all[5]) p[s] = 1.0 / 9;
  CHECK(oracle::chi2_pvalue(obs, p) > 1e-3);
}

TEST_CASE("Gamma B at rho: size law n <= 10 against enumeration, mean, declared size") {
  for (auto& c : tree_cases()) {
    INFO(c.id);
    auto fam = TreeFamily::get(c.kind, c.arity);
    const double rho = fam->rho();
    TreeBoltzmann b(fam, rho);
    CHECK(b.B() == doctest::Approx(c.b_rho).epsilon(1e-9));
    auto a = brute_a(c, 10);
    auto bb = oracle::b_from_a(c.kind == TreeKind::polya            ? "polya"
                               : c.kind == TreeKind::phylo          ? "phylo"
                               : c.kind == TreeKind::kary_mobile    ? std::string("mobile:") + std::to_string(c.arity)
                                                                    : "schroder-mobile",
                               a);
    std::map<std::uint64_t, double> p;
    for (std::uint64_t n = 1; n <= 10; ++n) p[n] = q_to_double(bb[n]) * std::pow(rho, static_cast<double>(n)) / c.b_rho;
    // mean from the series of B(rho z)
    auto sc = fam->b_scaled(400);
    double m0 = 0, m1 = 0, m2 = 0;
    for (std::size_t n = 1; n <= sc.order(); ++n) {
      double dn = static_cast<double>(n);
      m0 += sc[n], m1 += dn * sc[n], m2 += dn * dn * sc[n];
    }
    CHECK(m0 == doctest::Approx(c.b_rho).epsilon(1e-9));

    Rng r(10);
    const std::uint64_t N = 400000;
    std::map<std::uint64_t, std::uint64_t> obs;
    double s = 0;
    std::uint64_t leaves = 0;
    RootedTree pool;
    const bool by_leaves = fam->counts_leaves();
    for (std::uint64_t i = 0; i < N; ++i) {
      pool.clear();
      auto res = b.gamma_B_into(pool, r);
      REQUIRE(!res.aborted);
      REQUIRE(res.size >= 1);
      REQUIRE(res.size == atoms(pool, res.root, by_leaves));
      if (c.kind == TreeKind::kary_mobile) REQUIRE(res.size % (c.arity - 1) == 1 % (c.arity - 1));
      ++obs[res.size];
      leaves += pool.first_child(res.root) == RootedTree::kNone;
      s += static_cast<double>(res.size);
    }
    check_cells(obs, N, p);
    CHECK(std::fabs(oracle::zscore(leaves, N, rho / c.b_rho)) < 4.0);
    const double mean = m1 / m0, var = m2 / m0 - mean * mean;
    CHECK(std::fabs(s / N - mean) < 4 * std::sqrt(var / N));
  }
}

TEST_CASE("Gamma B structure: Polya multiplicities, phylo doubling") {
  Rng r(11);
  {
    auto fam = TreeFamily::get(TreeKind::polya);
    TreeBoltzmann b(fam, fam->rho());
    for (int i = 0; i < 20000; ++i) {
      auto t = b.gamma_B(r);
      std::map<std::string, int> mult;
      for (auto c = t.first_child(t.root()); c != RootedTree::kNone; c = t.next_sibling(c)) ++mult[oracle::shape(t, c)];
      for (auto& [s, m] : mult) REQUIRE(m >= 2);
    }
  }
  {
    auto fam = TreeFamily::get(TreeKind::phylo);
    TreeBoltzmann b(fam, fam->rho());
    for (int i = 0; i < 20000; ++i) {
      auto t = b.gamma_B(r);
      if (t.is_leaf(t.root())) continue;
      REQUIRE(t.child_count(t.root()) == 2);
      auto c1 = t.first_child(t.root());
      auto c2 = t.next_sibling(c1);
      REQUIRE(oracle::shape(t, c1) == oracle::shape(t, c2));
      REQUIRE(t.leaf_count() % 2 == 0);
    }
  }
}

TEST_CASE("walk B-classes and the D run") {
  Rng r(12);
  const std::uint64_t N = 1000000;
  double rho_s = 3 - 2 * std::sqrt(2.0);
  std::map<std::uint64_t, std::uint64_t> mot, sch;
  double sm = 0, sm2 = 0, sd = 0, sd2 = 0, se = 0, se2 = 0;
  std::uint64_t d0 = 0;
  for (std::uint64_t i = 0; i < N; ++i) {
    auto a = gamma_B_motzkin(r);
    auto m = a.i + a.j + 2;
    ++mot[m];
    sm += static_cast<double>(m), sm2 += static_cast<double>(m * m);
    auto b = gamma_B_schroder(r);
    ++sch[b.i + b.j + 1];
    double d = static_cast<double>(gamma_D_seq(1.0 / 3, r));
    sd += d, sd2 += d * d;
    d0 += d == 0;
    double e = static_cast<double>(gamma_D_seq(rho_s, r));
    se += e, se2 += e * e;
  }
  CHECK(std::fabs(oracle::zscore(mot[2], N, 4.0 / 9)) < 4.0);
  CHECK(std::fabs(oracle::zscore(sch[1], N, (1 - rho_s) * (1 - rho_s))) < 4.0);
  check_mean(sm, sm2, N, 3.0);
  check_mean(sd, sd2, N, 0.5);
  check_mean(se, se2, N, rho_s / (1 - rho_s));
  CHECK(std::fabs(oracle::zscore(d0, N, 2.0 / 3)) < 4.0);
  // size laws n <= 10 by enumerating run pairs: B = (Z Seq Z)^2 and Z (Seq Z)^2
  std::map<std::uint64_t, double> pm, ps;
  for (std::uint64_t n = 1; n <= 10; ++n) {
    double wm = 0, ws = 0;
    for (std::uint64_t i = 0; i <= n; ++i)
      for (std::uint64_t j = 0; i + j <= n; ++j) {
        if (i + j + 2 == n) wm += std::pow(1.0 / 3, static_cast<double>(n));
        if (i + j + 1 == n) ws += std::pow(rho_s, static_cast<double>(n));
      }
    pm[n] = wm / 0.25;
    ps[n] = ws / 0.25;
  }
  check_cells(mot, N, pm);
  check_cells(sch, N, ps);
}

TEST_CASE("weighted Motzkin u=2: w-Boltzmann law of the B-component") {
  auto spec = make_motzkin(2.0);
  const double x = spec.rho;
  CHECK(x == doctest::Approx(0.25));
  // weighted enumeration: pair (i, j) of E-runs has weight u^{i+j} x^{i+j+2}
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> w;
  double Bu = 0;
  for (std::uint64_t i = 0; i < 200; ++i)
    for (std::uint64_t j = 0; i + j < 200; ++j) {
      double v = std::pow(2.0 * x, static_cast<double>(i + j)) * x * x;
      Bu += v;
      if (i + j + 2 <= 6) w[{i, j}] = v;
    }
  CHECK(Bu == doctest::Approx(spec.B_rho).epsilon(1e-12));
  Rng r(13);
  TrialWorkspace ws;
  const std::uint64_t N = 1000000;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> obs;
  for (std::uint64_t k = 0; k < N; ++k) {
    ws.clear();
    auto size = spec.sampler->draw_B(ws, r, UINT64_MAX);
    REQUIRE(ws.runs.size() == 1);
    REQUIRE(size == ws.runs[0].i + ws.runs[0].j + 2);
    ++obs[{ws.runs[0].i, ws.runs[0].j}];
  }
  for (auto& [key, v] : w) {
    auto it = obs.find(key);
    std::uint64_t hits = it == obs.end() ? 0 : it->second;
    CHECK_MESSAGE(std::fabs(oracle::zscore(hits, N, v / Bu)) < 4.0, key.first << "," << key.second);
  }
}

TEST_CASE("expected cost is linear in output size") {
  // random words consumed per atom, Polya trees at the singularity
  auto fam = TreeFamily::get(TreeKind::polya);
  TreeBoltzmann b(fam, fam->rho());
  Rng r(14);
  RootedTree pool;
  // bucket b holds sizes in [2^b, 2^{b+1})
  std::vector<double> cost(16, 0), size(16, 0);
  std::vector<std::uint64_t> cnt(16, 0);
  for (int i = 0; i < 400000; ++i) {
    pool.clear();
    auto before = r.draws();
    auto res = b.gamma_tree_into(pool, r, 1u << 15);
    if (res.aborted) continue;
    auto bk = static_cast<std::size_t>(std::log2(static_cast<double>(res.size)));
    cost[bk] += static_cast<double>(r.draws() - before);
    size[bk] += static_cast<double>(res.size);
    ++cnt[bk];
  }
  // least-squares slope of mean cost on mean size per bucket, then the
  // per-atom cost of the largest populated bucket stays near that slope
  std::vector<double> xs, ys;
  for (std::size_t k = 2; k < 16; ++k)
    if (cnt[k] >= 200) {
      xs.push_back(size[k] / static_cast<double>(cnt[k]));
      ys.push_back(cost[k] / static_cast<double>(cnt[k]));
    }
  REQUIRE(xs.size() >= 6);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= static_cast<double>(xs.size()), my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  const double slope = sxy / sxx;
  MESSAGE("cost slope per atom " << slope);
  CHECK(slope > 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double per_atom = ys[i] / xs[i];
    CHECK_MESSAGE(per_atom < 1.5 * slope + 10.0 / xs[i], "bucket mean size " << xs[i] << " per atom " << per_atom);
  }
}
