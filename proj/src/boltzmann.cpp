#include "leapgen/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leapgen {

// ---------------------------------------------------------------------------
// EvalTable

EvalTable::EvalTable(std::shared_ptr<const TreeFamily> fam, double x, double eps)
    : fam_(std::move(fam)), x_(x), eps_(eps) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("eval table: x must lie in (0,1)");
  if (x > fam_->rho() * (1 + 1e-12))
    throw std::domain_error("eval table: x = " + std::to_string(x) +
                            " is beyond the radius of convergence of " + fam_->name() + " (" +
                            std::to_string(fam_->rho()) + ")");
  values_.push_back(0.0);
  for (std::size_t j = 1;; ++j) {
    values_.push_back(fam_->eval(std::pow(x, static_cast<double>(j))));
    if (j >= 2 && tail_bound(j) < eps) break;
    if (j > 100000) throw std::runtime_error("eval table: cutoff did not converge");
  }
}

double EvalTable::power(std::size_t j) const { return std::pow(x_, static_cast<double>(j)); }

double EvalTable::at(std::size_t j) const {
  if (j < values_.size()) return values_[j];
  double y = power(j);
  return y == 0.0 ? 0.0 : fam_->eval(y);
}

double EvalTable::tail_bound(std::size_t j) const {
  // A~(x y) <= x A~(y), so the tail is dominated by a geometric series
  double next = (j + 1 < values_.size()) ? values_[j + 1] : x_ * at(j);
  return next / (static_cast<double>(j + 1) * (1.0 - x_));
}

EvalTable build_eval_table(std::shared_ptr<const TreeFamily> fam, double x, double eps) {
  return EvalTable(std::move(fam), x, eps);
}

// ---------------------------------------------------------------------------
// MaxIndexTable

MaxIndexTable::MaxIndexTable(std::function<double(std::size_t)> lambda, std::size_t j0, double eps)
    : lambda_fn_(std::move(lambda)), j0_(j0) {
  if (j0_ < 1) throw std::invalid_argument("max index: first index must be >= 1");
  lambda_.assign(j0_, 0.0);
  for (std::size_t j = j0_;; ++j) {
    double l = lambda_fn_(j);
    lambda_.push_back(l);
    if (l < eps * 1e-3 || j > 100000) break;
  }
  const std::size_t J = lambda_.size() - 1;
  double rest = 0.0;
  for (std::size_t j = J + 1; j < J + 10000; ++j) {
    double l = lambda_fn_(j);
    rest += l;
    if (l <= rest * 1e-18 || l == 0.0) break;
  }
  tail_.assign(J + 1, 0.0);
  tail_[J] = rest;
  for (std::size_t k = J; k-- > j0_ - 1;) tail_[k] = tail_[k + 1] + lambda_[k + 1];
}

double MaxIndexTable::lambda(std::size_t j) const {
  if (j < j0_) return 0.0;
  return j < lambda_.size() ? lambda_[j] : lambda_fn_(j);
}

double MaxIndexTable::cdf(std::size_t k) const {
  if (k + 1 < j0_) return 0.0;
  if (k < tail_.size()) return std::exp(-tail_[k]);
  double t = 0.0;
  for (std::size_t j = k + 1; j < k + 10000; ++j) {
    double l = lambda_fn_(j);
    t += l;
    if (l <= t * 1e-18 || l == 0.0) break;
  }
  return std::exp(-t);
}

std::size_t MaxIndexTable::draw(Rng& rng) const {
  // K <= k  iff  E > tail_k  with E = -log U
  const double e = -std::log(rng.uniform_open());
  for (std::size_t k = j0_ - 1; k < tail_.size(); ++k)
    if (e > tail_[k]) return k;
  // beyond the table: recompute tails on demand
  for (std::size_t k = tail_.size();; ++k) {
    double t = 0.0;
    for (std::size_t j = k + 1; j < k + 10000; ++j) {
      double l = lambda_fn_(j);
      t += l;
      if (l <= t * 1e-18 || l == 0.0) break;
    }
    if (e > t) return k;
  }
}

std::size_t draw_max_index(const MaxIndexTable& table, Rng& rng) { return table.draw(rng); }

// ---------------------------------------------------------------------------
// walks

RunPair gamma_B_walk(const RunLaw& law, Rng& rng) {
  RunPair r;
  r.i = law.draw(rng);
  r.j = law.draw(rng);
  return r;
}

RunPair gamma_B_motzkin(Rng& rng) {
  static const RunLaw law{1.0 / 3.0, true, Ratio{1, 3}};
  return gamma_B_walk(law, rng);
}

RunPair gamma_B_schroder(Rng& rng) {
  static const RunLaw law{3.0 - 2.0 * std::sqrt(2.0), false, Ratio{}};
  return gamma_B_walk(law, rng);
}

std::uint64_t gamma_D_seq(double x, Rng& rng) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("gamma_D_seq: x must lie in (0,1)");
  return draw_geometric(x, rng);
}

// ---------------------------------------------------------------------------
// TreeBoltzmann

namespace {
constexpr std::size_t kMaxPrecomputed = 256;
constexpr double kNegligible = 1e-20;
}  // namespace

TreeBoltzmann::TreeBoltzmann(std::shared_ptr<const TreeFamily> fam, double x, double eps)
    : fam_(std::move(fam)), x_(x), table_(fam_, x, eps) {
  b_ = fam_->B(x);
  if (fam_->kind() == TreeKind::kary_mobile)
    for (unsigned d = 1; d <= fam_->arity(); ++d)
      if (fam_->arity() % d == 0) divisors_.push_back(d);
  // powers m whose A~(x^m) is not negligible get tables up front
  std::size_t M = 1;
  while (M < kMaxPrecomputed && table_.at(M + 1) > kNegligible) ++M;
  precomputed_ = M;
  if (fam_->kind() == TreeKind::polya) {
    polya_tables_.resize(M + 1);
    for (std::size_t m = 1; m <= M; ++m) polya_tables_[m] = max_index_table(m, 1);
    b_table_ = max_index_table(1, 2);
  } else {
    choices_.resize(M + 1);
    for (std::size_t m = 1; m <= M; ++m) choices_[m] = make_choice(m);
    // B choice: leaf, then options with their weights / B(x)
    b_choice_.leaf = x_ / b_;
    double cum = b_choice_.leaf;
    switch (fam_->kind()) {
      case TreeKind::phylo:
        cum += table_.at(2) / 2 / b_;
        b_choice_.cum.push_back(cum);
        break;
      case TreeKind::kary_mobile: {
        const unsigned K = fam_->arity();
        for (unsigned d : divisors_) {
          if (d == 1) continue;
          cum += euler_phi(d) * std::pow(table_.at(d), K / d) / K / b_;
          b_choice_.cum.push_back(cum);
        }
        break;
      }
      case TreeKind::schroder_mobile:
        for (std::size_t d = 2;; ++d) {
          double w = static_cast<double>(euler_phi(static_cast<unsigned>(d))) / d *
                     -std::log1p(-table_.at(d)) / b_;
          cum += w;
          b_choice_.cum.push_back(cum);
          if (w < eps * 1e-3) break;
        }
        break;
      default:
        break;
    }
  }
}

MaxIndexTable TreeBoltzmann::max_index_table(std::size_t m, std::size_t j0) const {
  const EvalTable* t = &table_;
  return MaxIndexTable(
      [t, m](std::size_t j) { return t->at(m * j) / static_cast<double>(j); }, j0,
      table_.eps());
}

double TreeBoltzmann::option_weight(std::size_t m, std::size_t option) const {
  // unnormalized weight of option (1-based) in A~(x^m)
  switch (fam_->kind()) {
    case TreeKind::phylo:
      if (option == 1) return table_.at(m) * table_.at(m) / 2;
      return table_.at(2 * m) / 2;
    case TreeKind::kary_mobile: {
      const unsigned K = fam_->arity();
      unsigned d = divisors_[option - 1];
      return euler_phi(d) * std::pow(table_.at(m * d), K / d) / K;
    }
    case TreeKind::schroder_mobile: {
      std::size_t d = option;
      double a = table_.at(m * d);
      if (d == 1) return logarithmic_mass(a, 2);
      return static_cast<double>(euler_phi(static_cast<unsigned>(d))) / d * -std::log1p(-a);
    }
    default:
      return 0.0;
  }
}

TreeBoltzmann::Choice TreeBoltzmann::make_choice(std::size_t m) const {
  Choice c;
  const double a = table_.at(m);
  const double y = table_.power(m);
  if (a <= 0.0 || y <= 1e-280) return c;  // leaf surely
  c.leaf = y / a;
  double cum = c.leaf;
  std::size_t options = 0;
  switch (fam_->kind()) {
    case TreeKind::phylo: options = 2; break;
    case TreeKind::kary_mobile: options = divisors_.size(); break;
    default: break;
  }
  if (options) {
    for (std::size_t i = 1; i <= options; ++i) {
      cum += option_weight(m, i) / a;
      c.cum.push_back(cum);
    }
  } else {
    for (std::size_t d = 1;; ++d) {
      double w = option_weight(m, d) / a;
      cum += w;
      c.cum.push_back(cum);
      if (d > 1 && w < table_.eps() * 1e-3) break;
    }
  }
  return c;
}

const TreeBoltzmann::Choice& TreeBoltzmann::choice(std::size_t m, Choice& scratch) const {
  if (m <= precomputed_) return choices_[m];
  scratch = make_choice(m);
  return scratch;
}

const MaxIndexTable& TreeBoltzmann::polya_table(std::size_t m, MaxIndexTable& scratch) const {
  if (m <= precomputed_) return polya_tables_[m];
  scratch = max_index_table(m, 1);
  return scratch;
}

std::size_t TreeBoltzmann::draw_choice(const Choice& c, std::size_t m, Rng& rng) const {
  double u = rng.uniform01();
  if (u < c.leaf) return 0;
  for (std::size_t i = 0; i < c.cum.size(); ++i)
    if (u < c.cum[i]) return i + 1;
  if (fam_->kind() != TreeKind::schroder_mobile) return c.cum.size();
  // unbounded index set: continue the cumulative sum
  const bool b_root = (&c == &b_choice_);
  const double norm = b_root ? b_ : table_.at(m);
  double cum = c.cum.empty() ? c.leaf : c.cum.back();
  for (std::size_t i = c.cum.size() + 1;; ++i) {
    std::size_t d = b_root ? i + 1 : i;
    double w = b_root ? static_cast<double>(euler_phi(static_cast<unsigned>(d))) / d *
                            -std::log1p(-table_.at(d)) / norm
                      : option_weight(m, d) / norm;
    if (w == 0.0) return draw_choice(c, m, rng);  // rounding gap; redraw
    cum += w;
    if (u < cum) return i;
  }
}

std::uint64_t TreeBoltzmann::count_size(const RootedTree& pool, std::int32_t v) const {
  std::uint64_t n = 0;
  std::vector<std::int32_t> st{v};
  const bool leaves = fam_->counts_leaves();
  while (!st.empty()) {
    auto u = st.back();
    st.pop_back();
    if (!leaves || pool.is_leaf(u)) ++n;
    for (auto c = pool.first_child(u); c != RootedTree::kNone; c = pool.next_sibling(c)) st.push_back(c);
  }
  return n;
}

void TreeBoltzmann::expand(const Task& t, RootedTree& pool, Rng& rng, std::vector<Task>& stack,
                           std::uint64_t& size) const {
  if (t.kind == Task::rep) {
    std::uint64_t s = count_size(pool, t.src);
    for (std::uint64_t r = 0; r < t.count; ++r) {
      auto dup = pool.duplicate(t.src);
      pool.append_child(t.node, dup);
    }
    size += s * t.count;
    return;
  }
  if (t.kind == Task::rep_kids) {
    std::vector<std::int32_t> kids;
    for (auto c = pool.first_child(t.node); c != RootedTree::kNone; c = pool.next_sibling(c))
      kids.push_back(c);
    std::uint64_t s = 0;
    for (auto c : kids) s += count_size(pool, c);
    for (std::uint64_t r = 0; r < t.count; ++r)
      for (auto c : kids) pool.append_child(t.node, pool.duplicate(c));
    size += s * t.count;
    return;
  }
  // gen: one A~(x^m) object under t.node (or as root), t.count copies total
  const std::size_t m = t.power;
  const auto v = pool.add_node();
  if (t.node != RootedTree::kNone) pool.append_child(t.node, v);
  if (t.count > 1) stack.push_back({Task::rep, t.node, v, 0, t.count - 1});
  auto gen = [&](std::uint64_t power, std::uint64_t copies) {
    stack.push_back({Task::gen, v, RootedTree::kNone, power, copies});
  };
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    return (a > (1ull << 40) || b > (1ull << 20)) ? (1ull << 60) : a * b;
  };
  switch (fam_->kind()) {
    case TreeKind::polya: {
      ++size;
      MaxIndexTable scratch;
      const auto& tab = polya_table(m, scratch);
      std::size_t K = tab.draw(rng);
      for (std::size_t j = 1; j <= K; ++j) {
        double lam = tab.lambda(j);
        std::uint64_t c = (j < K) ? draw_poisson(lam, rng) : draw_poisson_ge1(lam, rng);
        for (std::uint64_t i = 0; i < c; ++i) gen(mul(m, j), j);
      }
      break;
    }
    case TreeKind::phylo: {
      Choice scratch;
      std::size_t o = draw_choice(choice(m, scratch), m, rng);
      if (o == 0) {
        ++size;
      } else if (o == 1) {
        gen(m, 1);
        gen(m, 1);
      } else {
        gen(mul(m, 2), 2);
      }
      break;
    }
    case TreeKind::kary_mobile: {
      Choice scratch;
      std::size_t o = draw_choice(choice(m, scratch), m, rng);
      if (o == 0) {
        ++size;
        break;
      }
      unsigned d = divisors_[o - 1];
      if (d > 1) stack.push_back({Task::rep_kids, v, RootedTree::kNone, 0, d - 1});
      for (unsigned i = 0; i < fam_->arity() / d; ++i) gen(mul(m, d), 1);
      break;
    }
    case TreeKind::schroder_mobile: {
      Choice scratch;
      std::size_t d = draw_choice(choice(m, scratch), m, rng);
      if (d == 0) {
        ++size;
        break;
      }
      std::uint64_t pm = mul(m, d);
      std::uint64_t c = draw_logarithmic(table_.at(pm), d == 1 ? 2 : 1, rng);
      if (d > 1) stack.push_back({Task::rep_kids, v, RootedTree::kNone, 0, d - 1});
      for (std::uint64_t i = 0; i < c; ++i) gen(pm, 1);
      break;
    }
  }
}

void TreeBoltzmann::expand_root_B(std::int32_t v, Rng& rng, std::vector<Task>& stack,
                                  std::uint64_t& size) const {
  auto gen = [&](std::uint64_t power, std::uint64_t copies) {
    stack.push_back({Task::gen, v, RootedTree::kNone, power, copies});
  };
  switch (fam_->kind()) {
    case TreeKind::polya: {
      ++size;
      std::size_t K = b_table_.draw(rng);
      for (std::size_t j = 2; j <= K; ++j) {
        double lam = b_table_.lambda(j);
        std::uint64_t c = (j < K) ? draw_poisson(lam, rng) : draw_poisson_ge1(lam, rng);
        for (std::uint64_t i = 0; i < c; ++i) gen(j, j);
      }
      break;
    }
    case TreeKind::phylo: {
      if (draw_choice(b_choice_, 1, rng) == 0) {
        ++size;
      } else {
        gen(2, 2);
      }
      break;
    }
    case TreeKind::kary_mobile: {
      std::size_t o = draw_choice(b_choice_, 1, rng);
      if (o == 0) {
        ++size;
        break;
      }
      unsigned d = divisors_[o];  // divisors_[0] == 1 is excluded from B
      stack.push_back({Task::rep_kids, v, RootedTree::kNone, 0, d - 1});
      for (unsigned i = 0; i < fam_->arity() / d; ++i) gen(d, 1);
      break;
    }
    case TreeKind::schroder_mobile: {
      std::size_t o = draw_choice(b_choice_, 1, rng);
      if (o == 0) {
        ++size;
        break;
      }
      std::size_t d = o + 1;
      std::uint64_t c = draw_logarithmic(table_.at(d), 1, rng);
      stack.push_back({Task::rep_kids, v, RootedTree::kNone, 0, d - 1});
      for (std::uint64_t i = 0; i < c; ++i) gen(d, 1);
      break;
    }
  }
}

TreeBoltzmann::Result TreeBoltzmann::run(RootedTree& pool, Rng& rng, std::uint64_t cap,
                                         bool b_component) const {
  Result res;
  thread_local std::vector<Task> stack;
  stack.clear();
  if (b_component) {
    res.root = pool.add_node();
    expand_root_B(res.root, rng, stack, res.size);
  } else {
    stack.push_back({Task::gen, RootedTree::kNone, RootedTree::kNone, 1, 1});
    // the first gen creates the root: it is the next node id
    res.root = static_cast<std::int32_t>(pool.node_count());
  }
  while (!stack.empty()) {
    if (res.size > cap) {
      res.aborted = true;
      stack.clear();
      return res;
    }
    Task t = stack.back();
    stack.pop_back();
    expand(t, pool, rng, stack, res.size);
  }
  if (res.size > cap) res.aborted = true;
  return res;
}

TreeBoltzmann::Result TreeBoltzmann::gamma_tree_into(RootedTree& pool, Rng& rng, std::uint64_t cap) const {
  return run(pool, rng, cap, false);
}

TreeBoltzmann::Result TreeBoltzmann::gamma_B_into(RootedTree& pool, Rng& rng, std::uint64_t cap) const {
  return run(pool, rng, cap, true);
}

RootedTree TreeBoltzmann::gamma_tree(Rng& rng) const {
  RootedTree t;
  auto r = gamma_tree_into(t, rng);
  t.set_root(r.root);
  return t;
}

RootedTree TreeBoltzmann::gamma_B(Rng& rng) const {
  RootedTree t;
  auto r = gamma_B_into(t, rng);
  t.set_root(r.root);
  return t;
}

}  // namespace leapgen
