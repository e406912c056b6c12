#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "leapgen/campaign.hpp"
#include "leapgen/exact.hpp"
#include "leapgen/tree_classes.hpp"
#include "oracles.hpp"

using namespace leapgen;

namespace {

Histogram strip_wall(Histogram h) {
  std::erase_if(h.meta, [](auto& kv) { return kv.first == "wall_time_s"; });
  return h;
}

// statistics straight off the parenthesis string
struct ParenStats {
  long height = 0, leaves = 0, cherries = 0;
  double mean_depth = 0;
};

ParenStats paren_stats(const std::string& s) {
  ParenStats r;
  long depth = -1, nodes = 0, depth_sum = 0;
  std::vector<std::pair<int, int>> open;  // (children, leaf children)
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') {
      ++depth;
      ++nodes;
      depth_sum += depth;
      r.height = std::max(r.height, depth);
      if (!open.empty()) ++open.back().first;
      open.emplace_back(0, 0);
    } else {
      auto [kids, leafkids] = open.back();
      open.pop_back();
      if (kids == 0) {
        ++r.leaves;
        if (!open.empty()) ++open.back().second;
      }
      if (kids == 2 && leafkids == 2) ++r.cherries;
      --depth;
    }
  }
  r.mean_depth = static_cast<double>(depth_sum) / static_cast<double>(nodes);
  return r;
}

double pvalue(const Histogram& h, const std::vector<double>& probs) {
  std::map<std::int64_t, double> m;
  for (std::size_t k = 0; k < probs.size(); ++k)
    if (probs[k] > 0) m[static_cast<std::int64_t>(k)] = probs[k];
  return oracle::chi2_pvalue(h.buckets, m);
}

}  // namespace

TEST_CASE("names round-trip and reject junk") {
  for (auto m : {Mode::leap, Mode::rej, Mode::single_pass}) CHECK(parse_mode(mode_name(m)) == m);
  CHECK(mode_name(Mode::single_pass) == "single-pass");
  for (auto s : {Statistic::core_size, Statistic::height, Statistic::leaves, Statistic::cherries,
                 Statistic::path_length, Statistic::deficit})
    CHECK(parse_statistic(statistic_name(s)) == s);
  CHECK_THROWS(parse_mode("fast"));
  CHECK_THROWS(parse_statistic("width"));
  CHECK(parse_format("csv") == Format::csv);
  CHECK(parse_format("json") == Format::json);
  CHECK_THROWS(parse_format("xml"));
}

TEST_CASE("invalid class/statistic/mode pairs") {
  auto bad = [](Campaign c) { CHECK_THROWS_AS(run_campaign(c), std::invalid_argument); };
  Campaign c;
  c.n = 20;
  c.count = 10;
  c.stat = Statistic::cherries;
  bad(c);
  c.stat = Statistic::leaves;
  bad(c);
  c.stat = Statistic::path_length;
  bad(c);
  c.stat = Statistic::deficit;
  bad(c);
  c.stat = Statistic::core_size;
  c.count = 0;
  bad(c);
  c.count = 10;
  c.mode = Mode::rej;
  c.accel_a = 1.0;
  bad(c);
  c.accel_a = 0.5;
  c.accel_order = 4;
  bad(c);
  Campaign s;
  s.cls = "schroder";
  s.n = 20;
  s.count = 10;
  s.mode = Mode::rej;
  s.accel_order = 2;
  bad(s);
  Campaign m;
  m.cls = "mobile:3";
  m.n = 4;
  m.count = 10;
  bad(m);
  CHECK_THROWS(run_campaign(Campaign{.cls = "trees"}));
  // legal pairs go through
  Campaign ok;
  ok.cls = "phylo";
  ok.n = 30;
  ok.count = 20;
  ok.stat = Statistic::cherries;
  CHECK(run_campaign(ok).total() == 20);
  ok.stat = Statistic::deficit;
  ok.mode = Mode::single_pass;
  CHECK(run_campaign(ok).total() == 20);
}

TEST_CASE("csv/json round trip, empty histogram, malformed input") {
  Campaign c;
  c.cls = "polya";
  c.n = 40;
  c.count = 500;
  c.stat = Statistic::height;
  auto h = run_campaign(c);
  for (auto f : {Format::csv, Format::json}) {
    std::ostringstream os;
    emit(h, f, os);
    CHECK(parse_histogram(os.str(), f) == h);
  }
  Histogram empty;
  empty.meta = {{"class", "x"}};
  for (auto f : {Format::csv, Format::json}) {
    std::ostringstream os;
    emit(empty, f, os);
    auto back = parse_histogram(os.str(), f);
    CHECK(back == empty);
    CHECK(back.total() == 0);
  }
  CHECK_THROWS(parse_histogram("1,2\n", Format::csv));
  CHECK_THROWS(parse_histogram("bucket,count\n12\n", Format::csv));
  CHECK_THROWS(parse_histogram("{\"meta\": []}", Format::json));
  CHECK(h.meta_value("class") == "polya");
  CHECK(h.meta_value("stat") == "height");
  CHECK(h.meta_value("accel_order") == "-");
  CHECK(h.meta_value("nothing").empty());
}

TEST_CASE("determinism and thread independence") {
  Campaign c;
  c.n = 60;
  c.count = 3 * kChunkSize + 17;
  c.seed = 11;
  auto a = strip_wall(run_campaign(c));
  CHECK(a.total() == c.count);
  auto b = strip_wall(run_campaign(c));
  CHECK(a == b);
  c.threads = 4;
  auto t4 = strip_wall(run_campaign(c));
  CHECK(t4 == a);
  std::ostringstream x, y;
  emit(a, Format::csv, x);
  emit(t4, Format::csv, y);
  CHECK(x.str() == y.str());
  c.seed = 12;
  CHECK(strip_wall(run_campaign(c)).buckets != a.buckets);
  // totals are summed over all chunks
  CampaignTotals tot;
  c.threads = 2;
  run_campaign(c, &tot);
  CHECK(tot.successes == c.count);
  CHECK(tot.trials >= c.count);
}

TEST_CASE("statistics agree with a naive recount on the parenthesis string") {
  Rng rng(5, 0);
  for (const char* id : {"polya", "phylo", "mobile:3", "schroder-mobile"}) {
    auto spec = make_scheme(id);
    for (std::uint64_t n : {1u, 9u, 40u, 201u}) {
      if (!spec.sampler->size_supported(n)) continue;
      auto out = leap_sample(spec, n, rng);
      auto ps = paren_stats(out.object.tree.to_parens());
      CHECK(statistic_value(Statistic::height, out.object) == ps.height);
      CHECK(statistic_value(Statistic::leaves, out.object) == ps.leaves);
      CHECK(statistic_value(Statistic::cherries, out.object) == ps.cherries);
      CHECK(statistic_value(Statistic::path_length, out.object) == static_cast<long>(std::floor(ps.mean_depth)));
      CHECK(statistic_value(Statistic::core_size, out.object) == static_cast<long>(out.object.core_size));
    }
  }
  auto spec = make_scheme("motzkin");
  for (int i = 0; i < 20; ++i) {
    auto out = leap_sample(spec, 50, rng);
    CHECK(statistic_value(Statistic::height, out.object) == oracle::walk_height(out.object.walk.str()));
  }
  CHECK_THROWS(statistic_value(Statistic::deficit, leap_sample(spec, 5, rng).object));
}

TEST_CASE("campaign histograms follow the exact leap laws") {
  Campaign c;
  c.n = 10;
  c.count = 200000;
  c.threads = 4;
  auto h = run_campaign(c);
  auto law = motzkin_core_law_leap(10);
  std::vector<double> exp;
  for (auto& p : law.prob) exp.push_back(p.get_d());
  double pv = pvalue(h, exp);
  MESSAGE("motzkin n=10 core size p=" << pv);
  CHECK(pv > 1e-4);

  c.stat = Statistic::height;
  c.n = 14;
  auto hh = run_campaign(c);
  auto tab = dyck_height_table(7, 7);
  HeightQuery lq;
  lq.dist = CoreDist::leap;
  auto hl = height_law(14, lq, tab);
  exp.clear();
  for (auto& p : hl.prob) exp.push_back(p.get_d());
  pv = pvalue(hh, exp);
  MESSAGE("motzkin n=14 height p=" << pv);
  CHECK(pv > 1e-4);

  for (const char* id : {"polya", "phylo"}) {
    Campaign g;
    g.cls = id;
    g.n = 12;
    g.count = 200000;
    g.threads = 4;
    auto gh = run_campaign(g);
    auto gl = generic_core_law(make_scheme(id), 12, CoreDist::leap);
    std::vector<double> ge;
    for (double p : gl.prob) ge.push_back(p);
    double gp = pvalue(gh, ge);
    MESSAGE(std::string(id) << " n=12 core size p=" << gp);
    CHECK(gp > 1e-4);
  }
}

TEST_CASE("bench: trials near 1/q_n, B draws near n/mu") {
  auto spec = make_scheme("motzkin");
  auto rows = bench(spec, {1000}, 4000, 3);
  REQUIRE(rows.size() == 1);
  double q = q_series_exact(1000)[1000].get_d();
  MESSAGE("trials " << rows[0].mean_trials << " vs " << 1 / q << ", b draws " << rows[0].mean_b_draws);
  CHECK(std::fabs(rows[0].mean_trials * q - 1) < 0.05);
  CHECK(std::fabs(rows[0].mean_b_draws - 1000 / spec.mu) < 0.05 * 1000 / spec.mu);
  CHECK(rows[0].mean_seconds > 0);
  CHECK_THROWS(bench(spec, {100, 10}, 1, 1));
  std::ostringstream os;
  emit_bench(rows, os);
  CHECK(os.str().rfind("n,mean_seconds,mean_trials,mean_b_draws_per_trial\n1000,", 0) == 0);
}

TEST_CASE("selftest passes, perturbed rho is caught") {
  auto items = selftest();
  CHECK(!items.empty());
  for (auto& it : items) CHECK_MESSAGE(it.pass, it.name << ": " << it.detail);
  SelftestOptions bad;
  bad.rho_perturbation = 1e-3;
  auto items2 = selftest(bad);
  bool any_fail = false;
  for (auto& it : items2) any_fail = any_fail || !it.pass;
  CHECK(any_fail);
}
