#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace leapgen {

enum class Step : std::uint8_t { up, flat, down };

// walk over {NE, E, SE}, serialized as U/E/D
class LatticeWalk {
public:
  LatticeWalk() = default;
  explicit LatticeWalk(std::vector<Step> steps) : steps_(std::move(steps)) {}

  const std::vector<Step>& steps() const { return steps_; }
  std::vector<Step>& steps() { return steps_; }
  std::size_t length() const { return steps_.size(); }
  std::size_t count(Step s) const;

  bool valid() const;  // prefix condition and balance
  std::int64_t height() const;
  std::string str() const;
  static LatticeWalk parse(std::string_view s);

  bool operator==(const LatticeWalk& o) const { return steps_ == o.steps_; }

private:
  std::vector<Step> steps_;
};

// rooted tree with child lists; node ids are dense indices
class RootedTree {
public:
  static constexpr std::int32_t kNone = -1;

  RootedTree() = default;

  std::int32_t add_node();
  void append_child(std::int32_t parent, std::int32_t child);
  void set_root(std::int32_t r) { root_ = r; }
  void reserve(std::size_t n);
  void clear();

  std::int32_t root() const { return root_; }
  std::size_t node_count() const { return first_.size(); }
  std::int32_t first_child(std::int32_t v) const { return first_[v]; }
  std::int32_t next_sibling(std::int32_t v) const { return next_[v]; }
  bool is_leaf(std::int32_t v) const { return first_[v] == kNone; }
  std::size_t child_count(std::int32_t v) const;

  // copy the subtree of src rooted at v into this tree; returns new root id
  std::int32_t copy_subtree(const RootedTree& src, std::int32_t v);
  // copy of a subtree of this very tree
  std::int32_t duplicate(std::int32_t v);
  // standalone tree made of the subtree at v
  RootedTree extract(std::int32_t v) const;

  // optional labels (core samplers); empty when discarded
  std::vector<std::int32_t>& labels() { return labels_; }
  const std::vector<std::int32_t>& labels() const { return labels_; }

  std::string to_parens() const;
  static RootedTree from_parens(std::string_view s);
  // isomorphism class for unordered trees (children sorted); nonzero labels kept
  std::string canonical() const;

  std::size_t leaf_count() const;
  std::size_t reachable_count() const;
  bool acyclic_single_root() const;

private:
  std::vector<std::int32_t> first_, last_, next_;
  std::vector<std::int32_t> labels_;
  std::int32_t root_ = kNone;
};

// statistics (iterative, safe at 1e7 nodes)
std::int64_t tree_height(const RootedTree& t);
std::size_t tree_leaves(const RootedTree& t);
std::size_t tree_cherries(const RootedTree& t);
double tree_mean_depth(const RootedTree& t);

}  // namespace leapgen
