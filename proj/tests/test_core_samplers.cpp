#include <algorithm>
#include <chrono>
#include <map>

#include "doctest.h"
#include "leapgen/core_samplers.hpp"
#include "oracles.hpp"

using namespace leapgen;

namespace {

template <class F>
std::map<std::string, std::uint64_t> tally(int draws, F&& f) {
  std::map<std::string, std::uint64_t> m;
  for (int i = 0; i < draws; ++i) ++m[f()];
  return m;
}

std::map<std::string, double> normalize(const std::map<std::string, double>& w) {
  double s = 0;
  for (auto& [k, v] : w) s += v;
  std::map<std::string, double> p;
  for (auto& [k, v] : w) p[k] = v / s;
  return p;
}

bool arity_ok(const RootedTree& t, unsigned exact, unsigned min_deg) {
  for (std::size_t v = 0; v < t.node_count(); ++v) {
    auto c = t.child_count(static_cast<std::int32_t>(v));
    if (c == 0) continue;
    if (exact ? c != exact : c < min_deg) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("dyck_uniform: trivial sizes") {
  Rng r(1);
  CHECK(dyck_uniform(0, r).length() == 0);
  CHECK(dyck_uniform(1, r).str() == "UD");
}

TEST_CASE("dyck_uniform: uniform over all walks for k <= 6") {
  Rng r(2);
  for (unsigned k = 2; k <= 6; ++k) {
    std::map<std::string, double> p;
    for (auto& w : oracle::motzkin_walks(static_cast<int>(2 * k)))
      if (w.find('E') == std::string::npos) p[w] = 1;
    CHECK(oracle::Q(static_cast<long>(p.size())) == oracle::catalan(k));
    p = normalize(p);
    const int draws = k == 3 ? 1000000 : 200000;
    auto obs = tally(draws, [&] {
      auto w = dyck_uniform(k, r);
      REQUIRE(w.valid());
      return w.str();
    });
    CHECK_MESSAGE(oracle::chi2_pvalue(obs, p) > 1e-3, "k=" << k);
  }
}

TEST_CASE("cayley_uniform: k=1,2 and the 3/9 shape example") {
  Rng r(3);
  auto t1 = cayley_uniform(1, r);
  CHECK(t1.node_count() == 1);
  CHECK(t1.is_leaf(t1.root()));
  auto obs2 = tally(10000, [&] { return oracle::shape(cayley_uniform(2, r)); });
  CHECK(obs2.size() == 1);
  auto obs3 = tally(300000, [&] { return oracle::shape(cayley_uniform(3, r)); });
  std::map<std::string, double> p3{{"((()))", 6.0 / 9}, {"(()())", 3.0 / 9}};
  CHECK(oracle::chi2_pvalue(obs3, p3) > 1e-3);
  CHECK_THROWS_AS(cayley_uniform(0, r), SupportError);
}

TEST_CASE("cayley_uniform: labeled law uniform over k^(k-1) trees") {
  Rng r(4);
  for (int k : {2, 3, 4}) {
    std::map<std::string, double> p;
    oracle::for_each_rooted_labeled(k, [&](const std::vector<int>& par) {
      for (int v = 0; v < k; ++v)
        if (par[v] < 0) p[oracle::parent_shape(par, v, true)] = 1;
    });
    int expect = 1;
    for (int i = 0; i < k - 1; ++i) expect *= k;
    CHECK(static_cast<int>(p.size()) == expect);
    auto obs = tally(200000, [&] { return oracle::shape(cayley_uniform(k, r, true), true); });
    CHECK_MESSAGE(oracle::chi2_pvalue(obs, normalize(p)) > 1e-3, "k=" << k);
  }
}

TEST_CASE("cayley_uniform: shape law for k <= 6 is the push-forward of labeled trees") {
  Rng r(5);
  for (int k = 4; k <= 6; ++k) {
    std::map<std::string, double> w;
    oracle::for_each_rooted_labeled(k, [&](const std::vector<int>& par) {
      for (int v = 0; v < k; ++v)
        if (par[v] < 0) w[oracle::parent_shape(par, v, false)] += 1;
    });
    auto obs = tally(1000000, [&] { return oracle::shape(cayley_uniform(static_cast<std::size_t>(k), r)); });
    CHECK_MESSAGE(oracle::chi2_pvalue(obs, normalize(w)) > 1e-3, "k=" << k);
  }
}

TEST_CASE("cayley_edges reproduces cayley_uniform") {
  Rng a(9, 1), b(9, 1);
  auto t = cayley_uniform(500, a);
  RootedTree u;
  for (int i = 0; i < 500; ++i) u.add_node();
  u.set_root(cayley_edges(500, b, [&](std::int32_t p, std::int32_t c) { u.append_child(p, c); }));
  CHECK(t.to_parens() == u.to_parens());
}

TEST_CASE("phylo_uniform: labeled uniformity k=3,4 and shape law k<=6") {
  Rng r(6);
  CHECK(phylo_uniform(1, r).node_count() == 1);
  for (int k : {3, 4}) {
    std::vector<int> labels;
    for (int i = 1; i <= k; ++i) labels.push_back(i);
    std::map<std::string, double> p;
    for (auto& t : oracle::leaf_labeled_trees(labels, 2, 2)) p[t.labeled] = 1;
    CHECK(p.size() == (k == 3 ? 3u : 15u));
    auto obs = tally(1000000, [&] { return oracle::shape(phylo_uniform(static_cast<std::size_t>(k), r, true), true); });
    CHECK_MESSAGE(oracle::chi2_pvalue(obs, normalize(p)) > 1e-3, "k=" << k);
  }
  for (int k = 5; k <= 6; ++k) {
    std::vector<int> labels;
    for (int i = 1; i <= k; ++i) labels.push_back(i);
    std::map<std::string, double> w;
    for (auto& t : oracle::leaf_labeled_trees(labels, 2, 2)) w[t.shape] += 1;
    auto obs = tally(400000, [&] {
      auto t = phylo_uniform(static_cast<std::size_t>(k), r);
      REQUIRE(arity_ok(t, 2, 2));
      return oracle::shape(t);
    });
    CHECK_MESSAGE(oracle::chi2_pvalue(obs, normalize(w)) > 1e-3, "k=" << k);
  }
  CHECK_THROWS_AS(phylo_uniform(0, r), SupportError);
}

TEST_CASE("gw_core_uniform: Schroeder mobiles k=1 and k=3 (weights 2/5, 3/5)") {
  Rng r(7);
  CHECK(gw_core_uniform(OffspringSpec::schroder(), 1, r).node_count() == 1);
  // a_3 = [z^3](A^2/2 + A^3/3) with a_1 = 1, a_2 = 1/2: star 1/3, cherry+leaf 1/2
  const std::string leaf = "()";
  std::map<std::string, double> p{{oracle::join_sorted({leaf, leaf, leaf}), (1.0 / 3) / (5.0 / 6)},
                                  {oracle::join_sorted({leaf, oracle::join_sorted({leaf, leaf})}), 0.5 / (5.0 / 6)}};
  auto obs = tally(400000, [&] { return oracle::shape(gw_core_uniform(OffspringSpec::schroder(), 3, r)); });
  CHECK(oracle::chi2_pvalue(obs, p) > 1e-3);
}

TEST_CASE("gw_core_uniform: labeled mobile shape laws for k <= 6") {
  Rng r(8);
  for (unsigned arity : {0u, 3u, 4u}) {
    for (int k = 3; k <= 6; ++k) {
      if (arity && (k - 1) % static_cast<int>(arity - 1) != 0) continue;
      std::vector<int> labels;
      for (int i = 1; i <= k; ++i) labels.push_back(i);
      std::map<std::string, double> w;
      for (auto& t : oracle::leaf_labeled_trees(labels, arity, arity ? arity : 99)) w[t.shape] += t.cyclic_weight;
      auto spec = arity ? OffspringSpec::kary(arity) : OffspringSpec::schroder();
      auto obs = tally(300000, [&] {
        auto t = gw_core_uniform(spec, static_cast<std::size_t>(k), r);
        REQUIRE(t.leaf_count() == static_cast<std::size_t>(k));
        REQUIRE(arity_ok(t, arity, 2));
        return oracle::shape(t);
      });
      CHECK_MESSAGE(oracle::chi2_pvalue(obs, normalize(w)) > 1e-3, "arity=" << arity << " k=" << k);
    }
  }
}

TEST_CASE("gw_core_uniform: ternary support") {
  Rng r(9);
  auto t = gw_core_uniform(OffspringSpec::kary(3), 3, r);
  CHECK(t.leaf_count() == 3);
  CHECK(t.node_count() == 4);
  CHECK(t.child_count(t.root()) == 3);
  CHECK_THROWS_AS(gw_core_uniform(OffspringSpec::kary(3), 4, r), SupportError);
  CHECK_THROWS_AS(gw_core_uniform(OffspringSpec::kary(4), 5, r), SupportError);
  CHECK_THROWS_AS(gw_core_uniform(OffspringSpec::schroder(), 0, r), SupportError);
}

TEST_CASE("exact sizes and structural invariants at large k") {
  Rng r(10);
  for (std::size_t k : {1000u, 100001u}) {
    auto d = dyck_uniform(k, r);
    CHECK(d.length() == 2 * k);
    CHECK(d.valid());
    auto c = cayley_uniform(k, r);
    CHECK(c.node_count() == k);
    CHECK(c.reachable_count() == k);
    CHECK(c.acyclic_single_root());
    auto p = phylo_uniform(k, r);
    CHECK(p.leaf_count() == k);
    CHECK(p.acyclic_single_root());
    CHECK(arity_ok(p, 2, 2));
    auto m = gw_core_uniform(OffspringSpec::kary(3), k % 2 ? k : k + 1, r);
    CHECK(m.leaf_count() == (k % 2 ? k : k + 1));
    CHECK(arity_ok(m, 3, 3));
    auto s = gw_core_uniform(OffspringSpec::schroder(), k, r);
    CHECK(s.leaf_count() == k);
    CHECK(s.acyclic_single_root());
    CHECK(arity_ok(s, 0, 2));
  }
}

TEST_CASE("core samplers run in linear time") {
  using clk = std::chrono::steady_clock;
  auto timed = [](auto&& f, int reps) {
    auto t0 = clk::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double>(clk::now() - t0).count() / reps;
  };
  Rng r(11);
  struct Case {
    std::string name;
    std::function<void(std::size_t)> run;
  };
  std::vector<Case> cases{
      {"dyck", [&](std::size_t k) { dyck_uniform(k, r); }},
      {"cayley", [&](std::size_t k) { cayley_uniform(k, r); }},
      {"phylo", [&](std::size_t k) { phylo_uniform(k, r); }},
      {"schroder-mobile", [&](std::size_t k) { gw_core_uniform(OffspringSpec::schroder(), k, r); }},
  };
  for (auto& c : cases) {
    c.run(100000);  // warm-up at both sizes
    c.run(1000000);
    std::vector<double> ratios;
    for (int batch = 0; batch < 5; ++batch) {
      double small = timed([&] { c.run(100000); }, 40);
      double large = timed([&] { c.run(1000000); }, 4);
      ratios.push_back(large / small);
    }
    std::sort(ratios.begin(), ratios.end());
    double ratio = ratios[2];
    MESSAGE(c.name << " time ratio 1e6/1e5 = " << ratio);
    CHECK_MESSAGE(ratio >= 8, c.name);
    CHECK_MESSAGE(ratio <= 13, c.name);
  }
}
