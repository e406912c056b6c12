#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "leapgen/campaign.hpp"
#include "leapgen/exact.hpp"
#include "leapgen/leap.hpp"
#include "leapgen/scheme.hpp"
#include "leapgen/series.hpp"
#include "leapgen/tree_classes.hpp"

using namespace leapgen;

namespace {

enum Exit { ok = 0, usage = 1, invariant = 2, io = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "1000", "1e6", "999,1000,1001", "200:1000:100"
std::vector<std::uint64_t> parse_sizes(const std::string& s) {
  auto one = [](const std::string& t) -> std::uint64_t {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size() || v < 0 || v != std::floor(v)) throw std::invalid_argument("bad size '" + t + "'");
    return static_cast<std::uint64_t>(v);
  };
  std::vector<std::uint64_t> out;
  try {
    if (s.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(s);
      std::string p;
      while (std::getline(ss, p, ':')) parts.push_back(p);
      if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:step");
      std::uint64_t a = one(parts[0]), b = one(parts[1]), st = one(parts[2]);
      if (st == 0) throw std::invalid_argument("range step must be positive");
      for (std::uint64_t x = a; x <= b; x += st) out.push_back(x);
    } else {
      std::stringstream ss(s);
      std::string p;
      while (std::getline(ss, p, ',')) out.push_back(one(p));
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad --size '" + s + "'");
  }
  if (out.empty()) throw std::invalid_argument("empty --size");
  return out;
}

class Output {
public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (file_.fail()) throw IoError("write failed for '" + path_ + "'");
    } else {
      std::cout.flush();
    }
  }

private:
  std::string path_;
  std::ofstream file_;
};

std::string hf_str(const HighFloat& x, int digits = 20) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string ld_str(long double x, int digits = 18) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// exact counting series of the composed class for walks: D(z) A(B(z))
std::vector<Rational> walk_counts(SchemeClass cls, std::size_t N) {
  TruncatedSeries<Rational> b(N), d(N), acc(N), pw(N);
  const std::size_t atom = cls == SchemeClass::motzkin ? 2 : 1;
  for (std::size_t i = 0; i <= N; ++i) {
    d[i] = 1;
    if (i + atom <= N) b[i + atom] = static_cast<long>(i + 1);
  }
  auto cat = catalan_numbers(N);
  pw[0] = 1;
  for (std::size_t k = 0; k <= N; ++k) {
    for (std::size_t i = 0; i <= N; ++i) acc[i] += Rational(cat[k]) * pw[i];
    pw = series_mul(pw, b);
  }
  auto c = series_mul(d, acc);
  return c.coefficients();
}

int cmd_sample(const Campaign& c, const std::string& fmt, const std::string& out_path) {
  SchemeSpec spec = make_scheme(c.cls);
  Campaign cc = c;
  cc.stat = Statistic::core_size;
  validate_campaign(cc, spec);
  Format f = parse_format(fmt);
  Output out(out_path);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  LeapOptions opt;
  opt.check_size = true;
  for (std::uint64_t i = 0; i < c.count; ++i) {
    Rng rng = chunk_stream(c.seed, i);
    std::string obj;
    std::uint64_t k = 0, trials = 1, size = 0;
    if (c.mode == Mode::single_pass) {
      auto r = single_pass_sample(spec, c.n, rng, opt);
      obj = r.object.str();
      k = r.core_size;
      size = r.size;
    } else {
      auto r = c.mode == Mode::leap ? leap_sample(spec, c.n, rng, opt)
                                    : rejection_leap_sample(spec, c.n, c.accel_order, c.accel_a, rng, opt);
      obj = r.object.str();
      k = r.core_size;
      trials = r.trials;
      size = r.object.size;
    }
    if (f == Format::csv) {
      out.os() << obj << "\n";
    } else {
      arr.push_back({{"size", size}, {"core_size", k}, {"trials", trials}, {"object", obj}});
    }
  }
  if (f == Format::json) {
    nlohmann::ordered_json j;
    j["class"] = spec.id;
    j["n"] = c.n;
    j["seed"] = c.seed;
    j["mode"] = mode_name(c.mode);
    j["samples"] = arr;
    out.os() << j.dump(2) << "\n";
  }
  out.close();
  return ok;
}

int cmd_hist(const Campaign& c, const std::string& fmt, const std::string& out_path) {
  Format f = parse_format(fmt);
  Histogram h = run_campaign(c);
  Output out(out_path);
  emit(h, f, out.os());
  out.close();
  return ok;
}

int cmd_tv(const std::string& cls, const std::string& sizes, Mode mode, int r, double a, const std::string& path,
           const std::string& out_path, bool height) {
  if (cls != "motzkin") throw std::invalid_argument("tv is available for --class motzkin only");
  if (mode == Mode::single_pass) throw std::invalid_argument("tv needs --mode leap or rej");
  if (path != "auto" && path != "rational" && path != "float") throw std::invalid_argument("--path must be auto, rational or float");
  auto ns = parse_sizes(sizes);
  for (auto n : ns)
    if (n < 1) throw std::invalid_argument("tv: sizes must be >= 1");
  Output out(out_path);
  auto& os = out.os();
  if (height) {
    if (path == "float") throw std::invalid_argument("tv-height has no float path");
    std::uint64_t nmax = 0;
    for (auto n : ns) nmax = std::max(nmax, n);
    auto table = dyck_height_table(nmax / 2, nmax / 2);
    os << "n,d_tv,n_times_dtv,arithmetic_path\n";
    for (auto n : ns) {
      HeightQuery q{mode == Mode::leap ? CoreDist::leap : CoreDist::rej, r, a};
      HighFloat d = tv_height(n, q, table);
      os << n << "," << hf_str(d) << "," << hf_str(d * n) << "," << (mode == Mode::leap ? "rational" : "highprec")
         << "\n";
    }
    out.close();
    return ok;
  }
  if (mode == Mode::leap) {
    os << "n,d_tv,sqrt_n_times_dtv,arithmetic_path\n";
    for (auto n : ns) {
      bool rational = path == "rational" || (path == "auto" && n <= 2500);
      if (rational) {
        HighFloat d = to_high(tv_exact(n));
        os << n << "," << hf_str(d) << "," << hf_str(d * sqrt(HighFloat(static_cast<double>(n)))) << ",rational\n";
      } else {
        long double d = tv_float(n);
        os << n << "," << ld_str(d) << "," << ld_str(d * std::sqrt(static_cast<long double>(n))) << ",float\n";
      }
    }
  } else {
    os << "n,d_tv,n_times_dtv_rej,arithmetic_path\n";
    for (auto n : ns) {
      bool rational = path == "rational" || (path == "auto" && n <= 2500);
      if (rational) {
        auto v = tv_rej_exact(n, r, a);
        os << n << "," << hf_str(v.value) << "," << hf_str(v.value * n) << ",rational\n";
      } else {
        long double d = tv_rej_float(n, r, a);
        os << n << "," << ld_str(d) << "," << ld_str(d * n) << ",float\n";
      }
    }
  }
  out.close();
  return ok;
}

int cmd_gf(const std::string& cls, std::uint64_t N, const std::string& which, const std::string& out_path) {
  SchemeSpec spec = make_scheme(cls);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto push_rat = [&](const std::vector<Rational>& v) {
    for (auto& x : v) arr.push_back(to_string(x));
  };
  auto push_dbl = [&](const std::vector<double>& v) {
    for (double x : v) {
      std::ostringstream os;
      os << std::setprecision(17) << x;
      arr.push_back(os.str());
    }
  };
  const bool walk = spec.sampler->is_walk();
  if (which == "C") {
    if (walk) {
      push_rat(walk_counts(spec.cls, N));
    } else {
      push_rat(spec.family->a_tilde_exact(N).coefficients());
    }
  } else if (which == "B") {
    if (walk) {
      std::vector<Rational> b(N + 1, Rational(0));
      const std::size_t atom = spec.cls == SchemeClass::motzkin ? 2 : 1;
      for (std::size_t i = 0; i + atom <= N; ++i) b[i + atom] = static_cast<long>(i + 1);
      push_rat(b);
    } else {
      push_rat(spec.family->b_exact(N).coefficients());
    }
  } else if (which == "A") {
    std::vector<Rational> a(N + 1, Rational(0));
    if (walk) {
      auto c = catalan_numbers(N);
      for (std::size_t k = 0; k <= N; ++k) a[k] = c[k];
    } else {
      for (std::size_t k = 0; k <= N; ++k) a[k] = spec.family->core_coeff_exact(k);
    }
    push_rat(a);
  } else if (which == "q") {
    if (spec.cls == SchemeClass::motzkin)
      push_rat(q_series_exact(N));
    else
      push_dbl(q_series(spec, N));
  } else {
    throw std::invalid_argument("--series must be one of C, A, B, q");
  }
  Output out(out_path);
  out.os() << arr.dump() << "\n";
  out.close();
  return ok;
}

int cmd_bench(const std::string& cls, const std::string& sizes, std::uint64_t count, std::uint64_t seed,
              const std::string& out_path) {
  SchemeSpec spec = make_scheme(cls);
  auto rows = bench(spec, parse_sizes(sizes), count, seed);
  Output out(out_path);
  emit_bench(rows, out.os());
  out.close();
  return ok;
}

int cmd_selftest(std::uint64_t seed, double perturb, const std::string& out_path) {
  SelftestOptions opt;
  opt.seed = seed;
  opt.rho_perturbation = perturb;
  auto items = selftest(opt);
  Output out(out_path);
  bool all = true;
  for (auto& it : items) {
    out.os() << (it.pass ? "PASS " : "FAIL ") << it.name << ": " << it.detail << "\n";
    all = all && it.pass;
  }
  out.os() << (all ? "selftest: all passed" : "selftest: FAILURES") << "\n";
  out.close();
  return all ? ok : invariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leap generators for supercritical composition schemes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LEAPGEN_VERSION);

  Campaign c;
  std::string size_s = "100", mode_s = "leap", stat_s = "core-size", fmt = "csv", out_path, path = "auto",
              series = "C";
  double perturb = 0;

  auto add_common = [&](CLI::App* s, bool sampling) {
    s->add_option("--class", c.cls, "motzkin, schroder, polya, phylo, mobile:k, schroder-mobile");
    s->add_option("--size", size_s, "size n (tv, tv-height, bench: list a,b,c or range a:b:step)");
    s->add_option("--out", out_path, "output file (default stdout)");
    if (sampling) {
      s->add_option("--count", c.count, "number of samples");
      s->add_option("--seed", c.seed, "seed");
      s->add_option("--mode", mode_s, "leap | rej | single-pass")->check(CLI::IsMember({"leap", "rej", "single-pass"}));
      s->add_option("--accel-order", c.accel_order, "acceleration order r (rej)");
      s->add_option("--accel-a", c.accel_a, "target acceptance a in (0,1) (rej)");
      s->add_option("--format", fmt, "csv | json")->check(CLI::IsMember({"csv", "json"}));
      s->add_option("--threads", c.threads, "worker threads");
    }
  };

  auto* sample = app.add_subcommand("sample", "draw objects of size n");
  add_common(sample, true);
  auto* hist = app.add_subcommand("hist", "histogram of a statistic over a campaign");
  add_common(hist, true);
  hist->add_option("--stat", stat_s, "core-size | height | leaves | cherries | path-length | deficit");
  auto* tv = app.add_subcommand("tv", "exact total variation distance (motzkin)");
  add_common(tv, false);
  tv->add_option("--mode", mode_s, "leap | rej")->check(CLI::IsMember({"leap", "rej"}));
  tv->add_option("--accel-order", c.accel_order, "acceleration order r");
  tv->add_option("--accel-a", c.accel_a, "target acceptance a");
  tv->add_option("--path", path, "auto | rational | float");
  auto* tvh = app.add_subcommand("tv-height", "exact distance between height laws (motzkin)");
  add_common(tvh, false);
  tvh->add_option("--mode", mode_s, "leap | rej")->check(CLI::IsMember({"leap", "rej"}));
  tvh->add_option("--accel-order", c.accel_order, "acceleration order r");
  tvh->add_option("--accel-a", c.accel_a, "target acceptance a");
  auto* gf = app.add_subcommand("gf", "series coefficients as a JSON array of decimal strings");
  add_common(gf, false);
  gf->add_option("--series", series, "C (composed class), A (core), B (components), q (success probabilities)");
  auto* bn = app.add_subcommand("bench", "timing table for leap sampling");
  add_common(bn, false);
  bn->add_option("--count", c.count, "samples per size");
  bn->add_option("--seed", c.seed, "seed");
  auto* st = app.add_subcommand("selftest", "run the invariant suite");
  st->add_option("--seed", c.seed, "seed");
  st->add_option("--out", out_path, "output file (default stdout)");
  st->add_option("--perturb-rho", perturb, "relative perturbation of rho (sensitivity fixture)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    c.mode = parse_mode(mode_s);
    if (*sample || *hist) {
      c.n = parse_sizes(size_s).at(0);
      c.stat = parse_statistic(stat_s);
      return *sample ? cmd_sample(c, fmt, out_path) : cmd_hist(c, fmt, out_path);
    }
    if (*tv) return cmd_tv(c.cls, size_s, c.mode, c.accel_order, c.accel_a, path, out_path, false);
    if (*tvh) return cmd_tv(c.cls, size_s, c.mode, c.accel_order, c.accel_a, "rational", out_path, true);
    if (*gf) return cmd_gf(c.cls, parse_sizes(size_s).at(0), series, out_path);
    if (*bn) return cmd_bench(c.cls, size_s, c.count, c.seed, out_path);
    if (*st) return cmd_selftest(c.seed, perturb, out_path);
  } catch (const IoError& e) {
    std::cerr << "leapgen: " << e.what() << "\n";
    return io;
  } catch (const std::invalid_argument& e) {
    std::cerr << "leapgen: " << e.what() << "\n";
    return usage;
  } catch (const std::out_of_range& e) {
    std::cerr << "leapgen: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "leapgen: " << e.what() << "\n";
    return invariant;
  }
  return usage;
}
