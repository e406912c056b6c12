#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "leapgen/objects.hpp"
#include "leapgen/primitives.hpp"
#include "leapgen/rng.hpp"
#include "leapgen/tree_classes.hpp"

namespace leapgen {

constexpr double kDefaultTableEps = 1e-12;

// A~(x^j) for j = 1..J; entries past J are evaluated on demand
class EvalTable {
public:
  EvalTable() = default;
  EvalTable(std::shared_ptr<const TreeFamily> fam, double x, double eps = kDefaultTableEps);

  double x() const { return x_; }
  std::size_t cutoff() const { return values_.size() - 1; }
  double eps() const { return eps_; }
  // A~(x^j), j >= 1
  double at(std::size_t j) const;
  // x^j, underflowing to 0
  double power(std::size_t j) const;
  // bound on sum_{i>j} A~(x^i)/i
  double tail_bound(std::size_t j) const;

private:
  std::shared_ptr<const TreeFamily> fam_;
  double x_ = 0, eps_ = kDefaultTableEps;
  std::vector<double> values_;  // index 0 unused
};

EvalTable build_eval_table(std::shared_ptr<const TreeFamily> fam, double x,
                           double eps = kDefaultTableEps);

// law of the largest index j >= j0 with a nonzero Poisson count, where the
// counts are independent Pois(lambda_j); value j0 - 1 means none.
// P(K <= k) = prod_{j > k} exp(-lambda_j)
class MaxIndexTable {
public:
  MaxIndexTable() = default;
  MaxIndexTable(std::function<double(std::size_t)> lambda, std::size_t j0, double eps);

  std::size_t first_index() const { return j0_; }
  std::size_t cutoff() const { return lambda_.size() - 1; }
  double lambda(std::size_t j) const;
  // P(K <= k) for k >= j0 - 1
  double cdf(std::size_t k) const;

  std::size_t draw(Rng& rng) const;

private:
  std::function<double(std::size_t)> lambda_fn_;
  std::size_t j0_ = 1;
  std::vector<double> lambda_;  // index j, valid for j >= j0
  std::vector<double> tail_;    // tail_[k] = sum_{j>k} lambda_j, k in [j0-1, J]
};

std::size_t draw_max_index(const MaxIndexTable& table, Rng& rng);

// --- walks -----------------------------------------------------------------

struct RunPair {
  std::uint64_t i = 0, j = 0;
};

// geometric parameter of the E-runs; exact ratio when available
struct RunLaw {
  double p = 0;
  bool exact = false;
  Ratio ratio{};
  std::uint64_t draw(Rng& rng) const { return exact ? draw_geometric(ratio, rng) : draw_geometric(p, rng); }
};

RunPair gamma_B_walk(const RunLaw& law, Rng& rng);
RunPair gamma_B_motzkin(Rng& rng);   // Geom(1/3) pair, size i+j+2
RunPair gamma_B_schroder(Rng& rng);  // Geom(3-2sqrt2) pair, size i+j+1
std::uint64_t gamma_D_seq(double x, Rng& rng);

// --- trees -----------------------------------------------------------------

// Boltzmann samplers for A~(x^m) and B(x) of one tree class.  Output goes
// into a caller-owned pool tree; generation is iterative and stops early
// once the size exceeds a cap.
class TreeBoltzmann {
public:
  TreeBoltzmann(std::shared_ptr<const TreeFamily> fam, double x, double eps = kDefaultTableEps);

  const TreeFamily& family() const { return *fam_; }
  std::shared_ptr<const TreeFamily> family_ptr() const { return fam_; }
  double x() const { return x_; }
  double B() const { return b_; }
  const EvalTable& table() const { return table_; }
  // Max_Index law used by Gamma A~(x^m) (j0 = 1) or Gamma B (m = 1, j0 = 2)
  MaxIndexTable max_index_table(std::size_t m, std::size_t j0) const;

  struct Result {
    std::int32_t root = RootedTree::kNone;
    std::uint64_t size = 0;
    bool aborted = false;
  };

  // size cap: generation stops as soon as the size exceeds it
  Result gamma_tree_into(RootedTree& pool, Rng& rng, std::uint64_t cap = UINT64_MAX) const;
  Result gamma_B_into(RootedTree& pool, Rng& rng, std::uint64_t cap = UINT64_MAX) const;

  RootedTree gamma_tree(Rng& rng) const;
  RootedTree gamma_B(Rng& rng) const;

private:
  struct Task {
    enum Kind : std::uint8_t { gen, rep, rep_kids } kind;
    std::int32_t node;        // parent for gen/rep, the node itself for rep_kids
    std::int32_t src;         // rep: subtree to copy
    std::uint64_t power;      // gen
    std::uint64_t count;      // gen: copies, rep/rep_kids: extra copies
  };
  struct Choice {  // categorical over {leaf, option_1, option_2, ...}
    double leaf = 1.0;
    std::vector<double> cum;  // cumulative probabilities after leaf
  };

  Result run(RootedTree& pool, Rng& rng, std::uint64_t cap, bool b_component) const;
  void expand(const Task& t, RootedTree& pool, Rng& rng, std::vector<Task>& stack,
              std::uint64_t& size) const;
  void expand_root_B(std::int32_t v, Rng& rng, std::vector<Task>& stack, std::uint64_t& size) const;
  const MaxIndexTable& polya_table(std::size_t m, MaxIndexTable& scratch) const;
  const Choice& choice(std::size_t m, Choice& scratch) const;
  Choice make_choice(std::size_t m) const;
  std::size_t draw_choice(const Choice& c, std::size_t m, Rng& rng) const;
  double option_weight(std::size_t m, std::size_t option) const;
  std::uint64_t count_size(const RootedTree& pool, std::int32_t v) const;

  std::shared_ptr<const TreeFamily> fam_;
  double x_, b_;
  EvalTable table_;
  std::size_t precomputed_ = 0;
  std::vector<MaxIndexTable> polya_tables_;  // index m
  MaxIndexTable b_table_;                    // polya Random_Forest (j >= 2)
  std::vector<Choice> choices_;              // index m, mobiles and phylo
  Choice b_choice_;
  std::vector<unsigned> divisors_;           // k-ary
};

}  // namespace leapgen
