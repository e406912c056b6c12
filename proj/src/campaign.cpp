#include "leapgen/campaign.hpp"

#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include "json.hpp"
#include <sstream>
#include <stdexcept>
#include <thread>

#include "leapgen/boltzmann.hpp"
#include "leapgen/core_samplers.hpp"
#include "leapgen/exact.hpp"
#include "leapgen/kernels.hpp"
#include "leapgen/rng.hpp"
#include "leapgen/series.hpp"

#ifndef LEAPGEN_VERSION
#define LEAPGEN_VERSION "0.0.0"
#endif

namespace leapgen {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::leap: return "leap";
    case Mode::rej: return "rej";
    case Mode::single_pass: return "single-pass";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "leap") return Mode::leap;
  if (s == "rej") return Mode::rej;
  if (s == "single-pass") return Mode::single_pass;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

std::string statistic_name(Statistic s) {
  switch (s) {
    case Statistic::core_size: return "core-size";
    case Statistic::height: return "height";
    case Statistic::leaves: return "leaves";
    case Statistic::cherries: return "cherries";
    case Statistic::path_length: return "path-length";
    case Statistic::deficit: return "deficit";
  }
  return "?";
}

Statistic parse_statistic(const std::string& s) {
  if (s == "core-size") return Statistic::core_size;
  if (s == "height") return Statistic::height;
  if (s == "leaves") return Statistic::leaves;
  if (s == "cherries") return Statistic::cherries;
  if (s == "path-length") return Statistic::path_length;
  if (s == "deficit") return Statistic::deficit;
  throw std::invalid_argument("unknown statistic '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + s + "'");
}

void validate_campaign(const Campaign& c, const SchemeSpec& spec) {
  if (c.count < 1) throw std::invalid_argument("sample count must be >= 1");
  const bool walk = spec.sampler->is_walk();
  switch (c.stat) {
    case Statistic::core_size:
    case Statistic::height: break;
    case Statistic::leaves:
    case Statistic::path_length:
      if (walk) throw std::invalid_argument(statistic_name(c.stat) + " is defined for trees only");
      break;
    case Statistic::cherries:
      if (spec.cls != SchemeClass::phylo) throw std::invalid_argument("cherries is defined for phylo only");
      break;
    case Statistic::deficit:
      if (c.mode != Mode::single_pass) throw std::invalid_argument("deficit needs --mode single-pass");
      break;
  }
  if (!spec.sampler->size_supported(c.n) && c.mode != Mode::single_pass)
    throw std::invalid_argument("size " + std::to_string(c.n) + " is outside the support of " + spec.id);
  if (c.mode == Mode::rej) {
    if (!(c.accel_a > 0 && c.accel_a < 1)) throw std::invalid_argument("--accel-a must lie in (0,1)");
    if (c.accel_order < 0 || c.accel_order > 3) throw std::invalid_argument("--accel-order must be in 0..3");
    if (!spec.has_expansion(c.accel_order))
      throw std::invalid_argument(spec.id + ": acceleration order " + std::to_string(c.accel_order) +
                                  " needs expansion coefficients");
  }
}

std::int64_t statistic_value(Statistic s, const ComposedObject& obj) {
  switch (s) {
    case Statistic::core_size: return static_cast<std::int64_t>(obj.core_size);
    case Statistic::height: return obj.is_walk ? obj.walk.height() : tree_height(obj.tree);
    case Statistic::leaves: return static_cast<std::int64_t>(tree_leaves(obj.tree));
    case Statistic::cherries: return static_cast<std::int64_t>(tree_cherries(obj.tree));
    case Statistic::path_length: return static_cast<std::int64_t>(std::floor(tree_mean_depth(obj.tree)));
    case Statistic::deficit: break;
  }
  throw std::invalid_argument("statistic needs the sampling context");
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto& [k, v] : buckets) t += v;
  return t;
}

std::string Histogram::meta_value(const std::string& key) const {
  for (auto& [k, v] : meta)
    if (k == key) return v;
  return {};
}

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct ChunkResult {
  std::map<std::int64_t, std::uint64_t> buckets;
  CampaignTotals totals;
};

ChunkResult run_chunk(const Campaign& c, const SchemeSpec& spec, std::uint64_t chunk, std::uint64_t count) {
  ChunkResult res;
  Rng rng = chunk_stream(c.seed, chunk);
  LeapOptions opt;
  opt.build_object = c.stat != Statistic::core_size && c.stat != Statistic::deficit;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::int64_t v = 0;
    if (c.mode == Mode::single_pass) {
      auto out = single_pass_sample(spec, c.n, rng, opt);
      ++res.totals.trials;
      if (out.deficit == 0) ++res.totals.successes;
      if (c.stat == Statistic::deficit)
        v = static_cast<std::int64_t>(out.deficit);
      else if (c.stat == Statistic::core_size)
        v = static_cast<std::int64_t>(out.core_size);
      else
        v = statistic_value(c.stat, out.object);
    } else {
      LeapOutcome out = c.mode == Mode::leap ? leap_sample(spec, c.n, rng, opt)
                                             : rejection_leap_sample(spec, c.n, c.accel_order, c.accel_a, rng, opt);
      res.totals.trials += out.trials;
      res.totals.successes += out.leap_successes;
      res.totals.b_draws += out.b_draws;
      v = c.stat == Statistic::core_size ? static_cast<std::int64_t>(out.core_size)
                                         : statistic_value(c.stat, out.object);
    }
    ++res.buckets[v];
  }
  return res;
}

}  // namespace

Histogram run_campaign(const Campaign& c, CampaignTotals* totals) {
  return run_campaign(c, make_scheme(c.cls), totals);
}

Histogram run_campaign(const Campaign& c, const SchemeSpec& spec, CampaignTotals* totals) {
  validate_campaign(c, spec);
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t chunks = (c.count + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkResult> results(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= chunks) return;
      try {
        std::uint64_t cnt = std::min(kChunkSize, c.count - i * kChunkSize);
        results[i] = run_chunk(c, spec, i, cnt);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        next = chunks;
      }
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(chunks)));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  Histogram h;
  CampaignTotals tot;
  for (auto& r : results) {  // fixed chunk order
    for (auto& [k, v] : r.buckets) h.buckets[k] += v;
    tot.trials += r.totals.trials;
    tot.successes += r.totals.successes;
    tot.b_draws += r.totals.b_draws;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  h.meta = {{"class", spec.id},
            {"n", std::to_string(c.n)},
            {"samples", std::to_string(c.count)},
            {"seed", std::to_string(c.seed)},
            {"mode", mode_name(c.mode)},
            {"accel_order", c.mode == Mode::rej ? std::to_string(c.accel_order) : "-"},
            {"accel_a", c.mode == Mode::rej ? fmt_double(c.accel_a) : "-"},
            {"stat", statistic_name(c.stat)},
            {"rng", std::string(Rng::kName) + "/v" + std::to_string(Rng::kVersion)},
            {"chunk", std::to_string(kChunkSize)},
            {"trials", std::to_string(tot.trials)},
            {"b_draws", std::to_string(tot.b_draws)},
            {"version", LEAPGEN_VERSION},
            {"wall_time_s", fmt_double(wall)}};
  if (totals) *totals = tot;
  return h;
}

// ---------------------------------------------------------------------------
// emit / parse

void emit(const Histogram& h, Format f, std::ostream& os) {
  if (f == Format::csv) {
    for (auto& [k, v] : h.meta) os << "# " << k << "=" << v << "\n";
    os << "bucket,count\n";
    for (auto& [k, v] : h.buckets) os << k << "," << v << "\n";
    return;
  }
  nlohmann::ordered_json j;
  j["meta"] = nlohmann::ordered_json::array();
  for (auto& [k, v] : h.meta) j["meta"].push_back({{"key", k}, {"value", v}});
  j["buckets"] = nlohmann::ordered_json::array();
  for (auto& [k, v] : h.buckets) j["buckets"].push_back({{"bucket", k}, {"count", v}});
  os << j.dump(2) << "\n";
}

Histogram parse_histogram(const std::string& text, Format f) {
  Histogram h;
  if (f == Format::json) {
    auto j = nlohmann::ordered_json::parse(text);
    for (auto& m : j.at("meta")) h.meta.emplace_back(m.at("key").get<std::string>(), m.at("value").get<std::string>());
    for (auto& b : j.at("buckets")) h.buckets[b.at("bucket").get<std::int64_t>()] = b.at("count").get<std::uint64_t>();
    return h;
  }
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad metadata line: " + line);
      h.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!header) {
      if (line != "bucket,count") throw std::invalid_argument("missing bucket,count header");
      header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad histogram row: " + line);
    h.buckets[std::stoll(line.substr(0, comma))] = std::stoull(line.substr(comma + 1));
  }
  if (!header) throw std::invalid_argument("missing bucket,count header");
  return h;
}

// ---------------------------------------------------------------------------
// bench

std::vector<BenchRow> bench(const SchemeSpec& spec, const std::vector<std::uint64_t>& sizes, std::uint64_t samples,
                            std::uint64_t seed) {
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] < sizes[i - 1]) throw std::invalid_argument("bench: sizes must be ascending");
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Rng rng(seed, i);
    BenchRow row;
    row.n = sizes[i];
    double secs = 0;
    std::uint64_t trials = 0, draws = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      auto t0 = std::chrono::steady_clock::now();
      auto out = leap_sample(spec, sizes[i], rng);
      secs += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      trials += out.trials;
      draws += out.b_draws;
    }
    row.mean_seconds = secs / static_cast<double>(samples);
    row.mean_trials = static_cast<double>(trials) / static_cast<double>(samples);
    row.mean_b_draws = static_cast<double>(draws) / static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

void emit_bench(const std::vector<BenchRow>& rows, std::ostream& os) {
  os << "n,mean_seconds,mean_trials,mean_b_draws_per_trial\n";
  for (auto& r : rows)
    os << r.n << "," << fmt_double(r.mean_seconds) << "," << fmt_double(r.mean_trials) << ","
       << fmt_double(r.mean_b_draws) << "\n";
}

// ---------------------------------------------------------------------------
// selftest

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

double chi2_pvalue(const std::vector<double>& observed, const std::vector<double>& expected) {
  double stat = 0;
  std::size_t df = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) continue;
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    ++df;
  }
  if (df < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(df - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

SelftestItem check_philox() {
  auto z = Rng::block({0, 0, 0, 0}, {0, 0});
  auto f = Rng::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u});
  bool ok = z == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8} &&
            f == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd};
  return {"rng known-answer", ok, Rng::kName};
}

SelftestItem check_kernels(std::uint64_t seed) {
  Rng rng(seed, 99);
  const std::size_t n = 257;
  std::vector<double> a(n), b(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.uniform01();
    b[i] = rng.uniform01();
    e[i] = rng.uniform01() - 0.5;
  }
  const auto& ref = table_for(kernels::Isa::scalar);
  std::vector<double> c0(n, 0.0);
  ref.convolve_acc(a.data(), b.data(), c0.data(), n);
  double w0 = ref.weighted_abs_sum(a.data(), e.data(), n), d0 = ref.dot(a.data(), b.data(), n);
  double worst = 0;
  std::string names = "scalar";
  for (auto isa : {kernels::Isa::avx2, kernels::Isa::neon}) {
    if (!kernels::isa_available(isa)) continue;
    names += std::string(",") + std::string(kernels::isa_name(isa));
    const auto& t = table_for(isa);
    std::vector<double> c1(n, 0.0);
    t.convolve_acc(a.data(), b.data(), c1.data(), n);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::fabs(c1[i] - c0[i]) / std::max(1.0, c0[i]));
    worst = std::max(worst, std::fabs(t.weighted_abs_sum(a.data(), e.data(), n) - w0) / w0);
    worst = std::max(worst, std::fabs(t.dot(a.data(), b.data(), n) - d0) / d0);
  }
  return {"kernel equivalence", worst < 1e-12, names + " max rel diff " + fmt(worst)};
}

SelftestItem check_identities() {
  const std::size_t N = 120;
  auto t = motzkin_counts(N);
  auto M = motzkin_numbers(N);
  auto q = q_series_exact(N);
  bool ok = true;
  for (std::size_t n = 0; n <= N && ok; ++n) {
    ok = ok && t.c[n] == M[n];
    Rational norm = 0, qsum = 0;
    BigInt p3 = 1;
    for (std::size_t i = 0; i < n; ++i) p3 *= 3;
    BigInt p4 = 1;
    for (std::size_t k = 0; 2 * k <= n; ++k) {
      // (c_{n,k}/a_k) rho^n / (D(rho) B(rho)^k)
      Rational term(t.c_nk[n][k] * p4 * 2, t.a[k] * p3 * 3);
      term.canonicalize();
      qsum += term;
      if (n >= 1) {
        Rational w(t.c_nk[n][k], t.c[n]);
        w.canonicalize();
        norm += w * distortion(n, k);
      }
      p4 *= 4;
    }
    qsum.canonicalize();
    norm.canonicalize();
    ok = ok && qsum == q[n];
    if (n >= 1) ok = ok && norm == 1;
  }
  return {"motzkin exact identities n<=120", ok, ok ? "zero tolerance" : "mismatch"};
}

std::vector<SelftestItem> check_q_limits(double perturb) {
  std::vector<SelftestItem> out;
  for (const char* id : {"motzkin", "schroder", "polya", "phylo", "mobile:3", "schroder-mobile"}) {
    SchemeSpec s = make_scheme(id);
    s.rho *= 1.0 + perturb;
    std::size_t n = 201;
    auto q = q_series(s, n);
    double target = 1.0 / s.mu;  // periodic: limit on the support residue class
    double err = std::fabs(q[n] - target);
    out.push_back({std::string("q_n -> 1/mu (") + id + ")", err < 1e-6, "|q_201 - 1/mu| = " + fmt(err)});
  }
  return out;
}

SelftestItem check_dyck_uniform(std::uint64_t seed) {
  Rng rng(seed, 1);
  std::map<std::string, double> counts;
  const int T = 50000;
  for (int i = 0; i < T; ++i) counts[dyck_uniform(3, rng).str()] += 1;
  std::vector<double> o, e;
  for (auto& [k, v] : counts) {
    o.push_back(v);
    e.push_back(T / 5.0);
  }
  double p = counts.size() == 5 ? chi2_pvalue(o, e) : 0.0;
  return {"dyck k=3 uniform", p > 1e-3, "p=" + fmt(p)};
}

SelftestItem check_phylo_uniform(std::uint64_t seed) {
  Rng rng(seed, 2);
  std::map<std::string, double> counts;
  const int T = 60000;
  for (int i = 0; i < T; ++i) {
    auto t = phylo_uniform(4, rng, true);
    counts[t.canonical()] += 1;
  }
  std::vector<double> o, e;
  for (auto& [k, v] : counts) {
    o.push_back(v);
    e.push_back(T / 15.0);
  }
  double p = counts.size() == 15 ? chi2_pvalue(o, e) : 0.0;
  return {"phylo k=4 labeled uniform", p > 1e-3, std::to_string(counts.size()) + " trees, p=" + fmt(p)};
}

SelftestItem check_leap_law(std::uint64_t seed) {
  SchemeSpec s = make_motzkin();
  const std::uint64_t n = 8;
  auto law = motzkin_core_law_leap(n);
  Rng rng(seed, 3);
  std::vector<double> o(law.prob.size(), 0.0), e(law.prob.size());
  const int T = 50000;
  LeapOptions opt;
  opt.check_size = true;
  bool sizes_ok = true;
  for (int i = 0; i < T; ++i) {
    auto out = leap_sample(s, n, rng, opt);
    o[out.core_size] += 1;
    sizes_ok = sizes_ok && out.object.walk.valid() && out.object.walk.length() == n;
  }
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = T * to_double(law.prob[k]);
  double p = chi2_pvalue(o, e);
  return {"leap core law motzkin n=8", p > 1e-3 && sizes_ok, "p=" + fmt(p)};
}

SelftestItem check_boltzmann_polya(std::uint64_t seed) {
  auto fam = TreeFamily::get(TreeKind::polya);
  TreeBoltzmann tb(fam, fam->rho());
  Rng rng(seed, 4);
  const int T = 100000;
  int ones = 0;
  for (int i = 0; i < T; ++i) {
    RootedTree pool;
    if (tb.gamma_B_into(pool, rng).size == 1) ++ones;
  }
  double p = fam->rho() / fam->B(fam->rho());
  double sd = std::sqrt(p * (1 - p) / T);
  double z = (ones / static_cast<double>(T) - p) / sd;
  return {"polya B: P(size=1) = x/B(x)", std::fabs(z) < 4, "z=" + fmt(z)};
}

SelftestItem check_motzkin_moment(std::uint64_t seed) {
  Rng rng(seed, 5);
  const int T = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < T; ++i) {
    auto r = gamma_B_motzkin(rng);
    double v = static_cast<double>(r.i + r.j + 2);
    s += v;
    s2 += v * v;
  }
  double mean = s / T, var = s2 / T - mean * mean;
  double z = (mean - 3.0) / std::sqrt(var / T);
  return {"motzkin B mean size = 3", std::fabs(z) < 4, "z=" + fmt(z)};
}

SelftestItem check_series() {
  // A000081 and A001190 prefixes
  const std::vector<long> polya{0, 1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766};
  const std::vector<long> phylo{0, 1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451};
  auto a = solve_polya_series<Rational>(12);
  auto b = solve_phylo_series<Rational>(12);
  bool ok = true;
  for (std::size_t i = 0; i <= 12; ++i) ok = ok && a[i] == polya[i] && b[i] == phylo[i];
  return {"polya/phylo series n<=12", ok, ok ? "match" : "mismatch"};
}

SelftestItem check_determinism(std::uint64_t seed) {
  SchemeSpec s = make_scheme("polya");
  Rng r1(seed, 6), r2(seed, 6);
  auto a = leap_sample(s, 200, r1);
  auto b = leap_sample(s, 200, r2);
  bool ok = a.object.str() == b.object.str() && a.object.size == 200;
  return {"determinism (polya n=200)", ok, ok ? "identical" : "differs"};
}

SelftestItem check_expansion() {
  auto e = catalan_expansion(200, 10);
  double a1 = static_cast<double>(e.first);
  return {"catalan a^1 = -9/8", std::fabs(a1 + 1.125) < 1e-6, "a^1=" + fmt(a1)};
}

}  // namespace

std::vector<SelftestItem> selftest(const SelftestOptions& opt) {
  std::vector<SelftestItem> items;
  items.push_back(check_philox());
  items.push_back(check_kernels(opt.seed));
  items.push_back(check_series());
  items.push_back(check_identities());
  for (auto& it : check_q_limits(opt.rho_perturbation)) items.push_back(it);
  items.push_back(check_expansion());
  items.push_back(check_dyck_uniform(opt.seed));
  items.push_back(check_phylo_uniform(opt.seed));
  items.push_back(check_motzkin_moment(opt.seed));
  items.push_back(check_boltzmann_polya(opt.seed));
  items.push_back(check_leap_law(opt.seed));
  items.push_back(check_determinism(opt.seed));
  return items;
}

}  // namespace leapgen
