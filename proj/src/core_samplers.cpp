#include "leapgen/core_samplers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "leapgen/primitives.hpp"

namespace leapgen {

namespace {

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(v[i - 1], v[j]);
  }
}

// uniform arrangement of `ups` +1 and n-ups -1 steps, selection sampling
std::vector<std::int8_t> random_pm_word(std::size_t ups, std::size_t n, Rng& rng) {
  std::vector<std::int8_t> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool up = rng.below(n - i) < ups;
    w[i] = up ? 1 : -1;
    ups -= up;
  }
  return w;
}

// uniform arrangement of a multiset given as (value, count), frequent values
// first; sequential draws without replacement
void random_arrangement(std::vector<std::pair<std::uint32_t, std::uint64_t>> mult,
                        std::vector<std::uint32_t>& out, Rng& rng) {
  std::sort(mult.begin(), mult.end(), [](auto& x, auto& y) { return x.second > y.second; });
  std::uint64_t rem = 0;
  for (auto& [v, c] : mult) rem += c;
  out.resize(rem);
  for (std::size_t i = 0; rem > 0; ++i, --rem) {
    std::uint64_t u = rng.below(rem);
    std::size_t j = 0;
    while (u >= mult[j].second) u -= mult[j++].second;
    out[i] = mult[j].first;
    --mult[j].second;
  }
}

// plane tree from a Lukasiewicz word rotated to `start`, read in
// breadth-first order: sibling ids are contiguous and every write is sequential
template <class Deg>
RootedTree from_lukasiewicz(std::size_t n, std::size_t start, Deg&& deg) {
  RootedTree t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.add_node();
  auto c = static_cast<std::int32_t>(1);
  for (std::size_t i = 0, j = start; i < n; ++i, ++j) {
    if (j == n) j = 0;
    for (std::uint32_t d = deg(j); d > 0; --d) t.append_child(static_cast<std::int32_t>(i), c++);
  }
  t.set_root(0);
  return t;
}

// first index after which the rotated word has all proper prefix sums >= 0
std::size_t lukasiewicz_start(const std::vector<std::uint32_t>& deg) {
  std::int64_t s = 0, best = 1;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    s += static_cast<std::int64_t>(deg[i]) - 1;
    if (s < best) {
      best = s;
      arg = i + 1;
    }
  }
  return arg % deg.size();
}

// `balls` balls into `cells` uniform cells; binomial splits down to small
// blocks, filled left to right; luk_start (if given) receives
// lukasiewicz_start of the result, computed while each block is hot
void uniform_multinomial(std::uint64_t balls, std::size_t cells, Rng& rng, std::vector<std::uint32_t>& cnt,
                         std::size_t* luk_start = nullptr) {
  std::int64_t s = 0, best = 1;
  std::size_t arg = 0;
  constexpr std::size_t kBlock = 4096;
  cnt.assign(cells, 0);
  struct Range {
    std::size_t lo, hi;
    std::uint64_t balls;
  };
  std::vector<Range> todo{{0, cells, balls}};
  while (!todo.empty()) {
    Range r = todo.back();
    todo.pop_back();
    const std::size_t w = r.hi - r.lo;
    if (w <= kBlock) {
      for (std::uint64_t b = 0; b < r.balls; ++b) ++cnt[r.lo + rng.below(w)];
      if (luk_start)
        for (std::size_t i = r.lo; i < r.hi; ++i) {
          s += static_cast<std::int64_t>(cnt[i]) - 1;
          if (s < best) {
            best = s;
            arg = i + 1;
          }
        }
      continue;
    }
    const std::size_t mid = r.lo + w / 2;
    const std::uint64_t left =
        draw_binomial(r.balls, static_cast<double>(mid - r.lo) / static_cast<double>(w), rng);
    todo.push_back({mid, r.hi, r.balls - left});
    todo.push_back({r.lo, mid, left});
  }
  if (luk_start) *luk_start = cells ? arg % cells : 0;
}

}  // namespace

LatticeWalk dyck_uniform(std::size_t k, Rng& rng) {
  if (k == 0) return LatticeWalk{};
  std::vector<std::int8_t> seq = random_pm_word(k + 1, 2 * k + 1, rng);
  // start after the last minimum of the prefix sums S_0..S_{2k}
  std::int64_t s = 0, best = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < 2 * k; ++i) {
    s += seq[i];
    if (s <= best) {
      best = s;
      arg = i + 1;
    }
  }
  std::vector<Step> steps;
  steps.reserve(2 * k);
  const std::size_t n = seq.size();
  for (std::size_t i = 1; i < n; ++i)
    steps.push_back(seq[(arg + i) % n] > 0 ? Step::up : Step::down);
  return LatticeWalk(std::move(steps));
}

namespace {

template <class Edge>
std::int32_t cayley_edges_impl(std::size_t k, Rng& rng, Edge&& edge) {
  if (k == 0) throw SupportError("cayley_uniform: k must be >= 1");
  if (k == 1) return 0;
  // Poisson(1) Galton-Watson shape: k-1 children spread uniformly over k
  // vertices, rotated to a Lukasiewicz word, emitted breadth-first
  std::size_t j = 0;
  thread_local std::vector<std::uint32_t> deg;  // reused scratch
  uniform_multinomial(k - 1, k, rng, deg, &j);
  auto c = static_cast<std::int32_t>(1);
  for (std::size_t i = 0; i < k; ++i, ++j) {
    if (j == k) j = 0;
    for (std::uint32_t d = deg[j]; d > 0; --d) edge(static_cast<std::int32_t>(i), c++);
  }
  return 0;
}

}  // namespace

std::int32_t cayley_edges(std::size_t k, Rng& rng,
                          const std::function<void(std::int32_t, std::int32_t)>& edge) {
  return cayley_edges_impl(k, rng, edge);
}

RootedTree cayley_uniform(std::size_t k, Rng& rng, bool keep_labels) {
  if (k == 0) throw SupportError("cayley_uniform: k must be >= 1");
  RootedTree t;
  t.reserve(k);
  for (std::size_t i = 0; i < k; ++i) t.add_node();
  t.set_root(cayley_edges_impl(k, rng, [&](std::int32_t p, std::int32_t c) { t.append_child(p, c); }));
  if (keep_labels) {
    t.labels().resize(k);
    std::iota(t.labels().begin(), t.labels().end(), 1);
    shuffle(t.labels(), rng);
  }
  return t;
}

namespace {

// unordered shape only: uniform plane binary tree, Lukasiewicz word of
// k-1 binary nodes and k leaves, cycle lemma
RootedTree phylo_shape(std::size_t k, Rng& rng) {
  const std::size_t n = 2 * k - 1;
  std::vector<std::int8_t> seq = random_pm_word(k - 1, n, rng);
  std::int64_t s = 0, best = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s += seq[i];
    if (s < best) {
      best = s;
      start = i + 1;
    }
  }
  return from_lukasiewicz(n, start, [&](std::size_t j) { return seq[j] > 0 ? 2u : 0u; });
}

}  // namespace

RootedTree phylo_uniform(std::size_t k, Rng& rng, bool keep_labels) {
  if (k == 0) throw SupportError("phylo_uniform: k must be >= 1");
  if (!keep_labels) return phylo_shape(k, rng);
  const std::size_t total = 2 * k - 1;
  std::vector<std::int32_t> parent(total, -1), left(total, -1), right(total, -1), label(total, 0);
  std::int32_t root = 0, used = 1;
  label[0] = 1;
  for (std::size_t j = 1; j < k; ++j) {
    // 2j-1 nodes, each with the edge above it (phantom edge for the root)
    auto v = static_cast<std::int32_t>(rng.below(2 * j - 1));
    std::int32_t w = used++, leaf = used++;
    label[leaf] = static_cast<std::int32_t>(j + 1);
    std::int32_t p = parent[v];
    parent[w] = p;
    if (p < 0)
      root = w;
    else if (left[p] == v)
      left[p] = w;
    else
      right[p] = w;
    left[w] = v;
    right[w] = leaf;
    parent[v] = w;
    parent[leaf] = w;
  }
  RootedTree t;
  t.reserve(total);
  for (std::size_t i = 0; i < total; ++i) t.add_node();
  for (std::size_t i = 0; i < total; ++i) {
    if (left[i] >= 0) {
      t.append_child(static_cast<std::int32_t>(i), left[i]);
      t.append_child(static_cast<std::int32_t>(i), right[i]);
    }
  }
  t.set_root(root);
  if (keep_labels) t.labels() = label;
  return t;
}

RootedTree gw_core_uniform(const OffspringSpec& spec, std::size_t k, Rng& rng) {
  if (k == 0) throw SupportError("gw_core_uniform: k must be >= 1");
  std::vector<std::pair<std::uint32_t, std::uint64_t>> mult;  // (degree, count)
  if (spec.kind == OffspringSpec::Kind::kary) {
    const unsigned K = spec.arity;
    if (K < 2) throw std::invalid_argument("gw_core_uniform: arity must be >= 2");
    if ((k - 1) % (K - 1) != 0)
      throw SupportError("gw_core_uniform: " + std::to_string(k) + " leaves not supported by " +
                         std::to_string(K) + "-ary mobiles (need k = 1 mod " +
                         std::to_string(K - 1) + ")");
    std::size_t m = (k - 1) / (K - 1);
    mult = {{0u, k}, {K, m}};
  } else {
    if (k == 1) {
      RootedTree t;
      t.set_root(t.add_node());
      return t;
    }
    // offspring law p_0 = 2 - 2 ln 2, p_d = 2^{1-d}/d (d >= 2), critical
    const double p0 = 2.0 - 2.0 * std::log(2.0);
    // tail[d] = P(xi >= d | xi >= 2)
    std::vector<double> q{0.0, 0.0};
    for (unsigned d = 2; d < 1100; ++d) q.push_back(std::ldexp(1.0, 1 - static_cast<int>(d)) / d / (1 - p0));
    std::vector<double> tail(q.size() + 1, 0.0);
    for (std::size_t d = q.size(); d-- > 2;) tail[d] = tail[d + 1] + q[d];
    std::vector<std::uint64_t> counts;
    for (std::uint64_t attempt = 0;; ++attempt) {
      std::uint64_t m = draw_negative_binomial(k, p0, rng);
      counts.assign(q.size(), 0);
      std::uint64_t left = m, excess = 0;
      for (std::size_t d = 2; left > 0; ++d) {
        if (d + 1 >= q.size()) {
          counts[d] = left;
          excess += left * (d - 1);
          break;
        }
        std::uint64_t c = draw_binomial(left, std::min(1.0, q[d] / tail[d]), rng);
        counts[d] = c;
        excess += c * (d - 1);
        left -= c;
        if (excess > k - 1) break;
      }
      if (left == 0 && excess == k - 1) {
        mult = {{0u, k}};
        for (std::size_t d = 2; d < counts.size(); ++d)
          if (counts[d]) mult.emplace_back(static_cast<std::uint32_t>(d), counts[d]);
        break;
      }
    }
  }
  thread_local std::vector<std::uint32_t> deg;  // reused scratch
  random_arrangement(mult, deg, rng);
  return from_lukasiewicz(deg.size(), lukasiewicz_start(deg), [&](std::size_t j) { return deg[j]; });
}

}  // namespace leapgen
