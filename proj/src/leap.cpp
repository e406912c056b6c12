#include "leapgen/leap.hpp"

#include <cmath>
#include <string>

namespace leapgen {

double p_inf(const SchemeSpec& spec, int i, double t) {
  const double s = spec.s, mu = spec.mu, sg = spec.sigma;
  switch (i) {
    case 1: return -(sg / std::sqrt(mu)) * (s - 1) * t;
    case 2: {
      if (!spec.has_expansion(2)) throw std::invalid_argument(spec.id + ": no expansion coefficients for order 2");
      return (s - 1) * s * sg * sg / (2 * mu) * t * t + spec.c_inf[0] - spec.a_inf[0] * mu;
    }
    case 3: {
      if (!spec.has_expansion(3)) throw std::invalid_argument(spec.id + ": no expansion coefficients for order 3");
      const double a1 = spec.a_inf[0], c1 = spec.c_inf[0];
      return s * (1 - s * s) * sg * sg * sg / (6 * std::pow(mu, 1.5)) * t * t * t +
             (sg * std::sqrt(mu) * s * a1 - (s - 1) * (sg / std::sqrt(mu)) * c1) * t;
    }
    default: throw std::invalid_argument("p_inf: order must be in 1..3");
  }
}

double y_poly(const SchemeSpec& spec, int r, double n, double t) {
  if (r < 0 || r > 3) throw std::invalid_argument("acceleration order must be in 0..3");
  double y = 1.0;
  for (int i = 1; i <= r; ++i) y += p_inf(spec, i, t) * std::pow(n, -0.5 * i);
  return y;
}

double rejection_t(const SchemeSpec& spec, double n, double k) {
  return (k - n / spec.mu) / (spec.sigma * std::sqrt(n / (spec.mu * spec.mu * spec.mu)));
}

double rejection_weight(const SchemeSpec& spec, int r, double a, double n, double k) {
  double y = y_poly(spec, r, n, rejection_t(spec, n, k));
  return y >= a ? a / y : 1.0;
}

namespace {

void check_request(const SchemeSpec& spec, std::uint64_t n) {
  if (!spec.sampler->size_supported(n))
    throw std::invalid_argument("size " + std::to_string(n) + " is outside the support of " + spec.id);
}

// one leap trial; returns true on S == n with k in support
bool leap_trial(const SchemeSpec& spec, std::uint64_t n, Rng& rng, TrialWorkspace& ws,
                LeapOutcome& out, std::uint64_t& k) {
  const SchemeSampler& smp = *spec.sampler;
  ws.clear();
  std::uint64_t S = 0;
  if (smp.has_D()) {
    ws.d_run = smp.draw_D(rng);
    S = ws.d_run;
  }
  k = 0;
  while (S < n) {
    std::uint64_t c = smp.draw_B(ws, rng, n - S);
    ++out.b_draws;
    S += c;
    ++k;
  }
  if (S == n && spec.support.contains(k)) return true;
  out.atoms_failed += S;
  return false;
}

LeapOutcome run_leap(const SchemeSpec& spec, std::uint64_t n, Rng& rng, const LeapOptions& opt,
                     int r, double a, bool reject) {
  check_request(spec, n);
  if (reject) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("acceptance target a must lie in (0,1)");
    if (r < 0 || r > 3) throw std::invalid_argument("acceleration order must be in 0..3");
    if (!spec.has_expansion(r))
      throw std::invalid_argument(spec.id + ": acceleration order " + std::to_string(r) +
                                  " needs expansion coefficients");
  }
  LeapOutcome out;
  thread_local TrialWorkspace ws;
  std::uint64_t k = 0;
  for (;;) {
    if (out.trials >= opt.max_trials)
      throw TrialCapExceeded("leap: no success within " + std::to_string(opt.max_trials) +
                             " trials for " + spec.id + " at n=" + std::to_string(n));
    ++out.trials;
    if (!leap_trial(spec, n, rng, ws, out, k)) continue;
    ++out.leap_successes;
    if (reject) {
      double w = rejection_weight(spec, r, a, static_cast<double>(n), static_cast<double>(k));
      if (!draw_bernoulli(w, rng)) {
        out.atoms_failed += n;
        continue;
      }
    }
    break;
  }
  out.core_size = k;
  if (opt.build_object) {
    spec.sampler->assemble(ws, k, rng, out.object, opt.keep_decomposition);
    if (opt.check_size && out.object.size != n)
      throw std::logic_error("leap: assembled size " + std::to_string(out.object.size) + " != " +
                             std::to_string(n));
  } else {
    out.object.cls = spec.cls;
    out.object.core_size = k;
    out.object.size = n;
  }
  return out;
}

}  // namespace

LeapOutcome leap_sample(const SchemeSpec& spec, std::uint64_t n, Rng& rng, const LeapOptions& opt) {
  return run_leap(spec, n, rng, opt, 0, 0.5, false);
}

LeapOutcome rejection_leap_sample(const SchemeSpec& spec, std::uint64_t n, int r, double a, Rng& rng,
                                  const LeapOptions& opt) {
  return run_leap(spec, n, rng, opt, r, a, true);
}

SinglePassOutcome single_pass_sample(const SchemeSpec& spec, std::uint64_t n, Rng& rng,
                                     const LeapOptions& opt) {
  if (n < 1) throw std::invalid_argument("single-pass: n must be >= 1");
  const SchemeSampler& smp = *spec.sampler;
  thread_local TrialWorkspace ws;
  std::uint64_t S = 0, k = 0;
  for (;;) {
    ws.clear();
    S = 0;
    if (smp.has_D()) {
      do ws.d_run = smp.draw_D(rng);
      while (ws.d_run > n);
      S = ws.d_run;
    }
    k = 0;
    for (;;) {
      if (S == n) break;
      // components that would overshoot are discarded, not recorded
      std::uint64_t c = smp.draw_B(ws, rng, n - S);
      if (c > n - S) break;
      S += c;
      ++k;
    }
    // periodic cores: drop trailing components down to the support
    while (k > 0 && !spec.support.contains(k)) {
      --k;
      if (smp.is_walk()) {
        S -= ws.runs.back().i + ws.runs.back().j + (spec.cls == SchemeClass::motzkin ? 2 : 1);
        ws.runs.pop_back();
      } else {
        ws.roots.pop_back();
      }
    }
    // an empty core outside the support restarts the pass
    if (spec.support.contains(k)) break;
  }
  SinglePassOutcome out;
  if (!smp.is_walk()) {
    // the pool still holds the cut-short draw; keep only retained components
    RootedTree pool;
    std::vector<std::int32_t> roots;
    for (auto r : ws.roots) roots.push_back(pool.copy_subtree(ws.pool, r));
    ws.pool = std::move(pool);
    ws.roots = std::move(roots);
  }
  out.core_size = k;
  if (opt.build_object || !smp.is_walk()) {
    smp.assemble(ws, k, rng, out.object, opt.keep_decomposition);
    S = out.object.size;
  }
  out.size = S;
  out.deficit = n - S;
  return out;
}

}  // namespace leapgen
