#include "leapgen/objects.hpp"

#include <algorithm>
#include <stdexcept>

namespace leapgen {

std::size_t LatticeWalk::count(Step s) const {
  return static_cast<std::size_t>(std::count(steps_.begin(), steps_.end(), s));
}

bool LatticeWalk::valid() const {
  std::int64_t y = 0;
  for (Step s : steps_) {
    if (s == Step::up) ++y;
    if (s == Step::down && --y < 0) return false;
  }
  return y == 0;
}

std::int64_t LatticeWalk::height() const {
  std::int64_t y = 0, h = 0;
  for (Step s : steps_) {
    if (s == Step::up)
      h = std::max(h, ++y);
    else if (s == Step::down)
      --y;
  }
  return h;
}

std::string LatticeWalk::str() const {
  std::string out;
  out.reserve(steps_.size());
  for (Step s : steps_) out.push_back(s == Step::up ? 'U' : s == Step::flat ? 'E' : 'D');
  return out;
}

LatticeWalk LatticeWalk::parse(std::string_view s) {
  std::vector<Step> v;
  v.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case 'U': v.push_back(Step::up); break;
      case 'E': v.push_back(Step::flat); break;
      case 'D': v.push_back(Step::down); break;
      case ' ': break;
      default: throw std::invalid_argument("walk: unexpected character");
    }
  }
  return LatticeWalk(std::move(v));
}

std::int32_t RootedTree::add_node() {
  auto id = static_cast<std::int32_t>(first_.size());
  first_.push_back(kNone);
  last_.push_back(kNone);
  next_.push_back(kNone);
  return id;
}

void RootedTree::append_child(std::int32_t parent, std::int32_t child) {
  if (last_[parent] == kNone)
    first_[parent] = child;
  else
    next_[last_[parent]] = child;
  last_[parent] = child;
}

void RootedTree::reserve(std::size_t n) {
  first_.reserve(n);
  last_.reserve(n);
  next_.reserve(n);
}

void RootedTree::clear() {
  first_.clear();
  last_.clear();
  next_.clear();
  labels_.clear();
  root_ = kNone;
}

std::size_t RootedTree::child_count(std::int32_t v) const {
  std::size_t c = 0;
  for (auto u = first_[v]; u != kNone; u = next_[u]) ++c;
  return c;
}

std::int32_t RootedTree::copy_subtree(const RootedTree& src, std::int32_t v) {
  // preorder copy with an explicit stack of (src node, new parent)
  std::int32_t new_root = add_node();
  std::vector<std::pair<std::int32_t, std::int32_t>> stack;
  stack.emplace_back(v, new_root);
  while (!stack.empty()) {
    auto [s, d] = stack.back();
    stack.pop_back();
    for (auto c = src.first_[s]; c != kNone; c = src.next_[c]) {
      std::int32_t nc = add_node();
      append_child(d, nc);
      stack.emplace_back(c, nc);
    }
  }
  return new_root;
}

std::int32_t RootedTree::duplicate(std::int32_t v) {
  // nodes are appended past the current end, so reading while writing is safe
  // as long as indices (not references) are used
  std::int32_t new_root = add_node();
  std::vector<std::pair<std::int32_t, std::int32_t>> stack;
  stack.emplace_back(v, new_root);
  while (!stack.empty()) {
    auto [s, d] = stack.back();
    stack.pop_back();
    for (auto c = first_[s]; c != kNone; c = next_[c]) {
      std::int32_t nc = add_node();
      append_child(d, nc);
      stack.emplace_back(c, nc);
    }
  }
  return new_root;
}

RootedTree RootedTree::extract(std::int32_t v) const {
  RootedTree t;
  t.set_root(t.copy_subtree(*this, v));
  return t;
}

std::string RootedTree::to_parens() const {
  std::string out;
  if (root_ == kNone) return out;
  out.reserve(2 * node_count());
  // stack entries: node id, or ~0 marker for close
  std::vector<std::int32_t> stack{root_};
  std::vector<std::int32_t> kids;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (v < 0) {
      out.push_back(')');
      continue;
    }
    out.push_back('(');
    stack.push_back(-1);
    kids.clear();
    for (auto c = first_[v]; c != kNone; c = next_[c]) kids.push_back(c);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

RootedTree RootedTree::from_parens(std::string_view s) {
  RootedTree t;
  std::vector<std::int32_t> stack;
  for (char c : s) {
    if (c == '(') {
      auto v = t.add_node();
      if (stack.empty()) {
        if (t.root_ != kNone) throw std::invalid_argument("tree: more than one root");
        t.root_ = v;
      } else {
        t.append_child(stack.back(), v);
      }
      stack.push_back(v);
    } else if (c == ')') {
      if (stack.empty()) throw std::invalid_argument("tree: unbalanced parentheses");
      stack.pop_back();
    } else if (c != ' ' && c != '\n') {
      throw std::invalid_argument("tree: unexpected character");
    }
  }
  if (!stack.empty() || t.root_ == kNone) throw std::invalid_argument("tree: unbalanced parentheses");
  return t;
}

std::string RootedTree::canonical() const {
  if (root_ == kNone) return {};
  // postorder: build each node's string from sorted child strings
  std::vector<std::string> repr(node_count());
  std::vector<std::pair<std::int32_t, bool>> stack{{root_, false}};
  std::vector<std::string> parts;
  while (!stack.empty()) {
    auto [v, done] = stack.back();
    stack.pop_back();
    if (!done) {
      stack.emplace_back(v, true);
      for (auto c = first_[v]; c != kNone; c = next_[c]) stack.emplace_back(c, false);
      continue;
    }
    parts.clear();
    for (auto c = first_[v]; c != kNone; c = next_[c]) parts.push_back(std::move(repr[c]));
    std::sort(parts.begin(), parts.end());
    std::string s;
    if (!labels_.empty() && labels_[v] != 0) s = std::to_string(labels_[v]);
    s += "(";
    for (auto& p : parts) s += p;
    s += ")";
    repr[v] = std::move(s);
  }
  return repr[root_];
}

std::size_t RootedTree::leaf_count() const { return tree_leaves(*this); }

std::size_t RootedTree::reachable_count() const {
  if (root_ == kNone) return 0;
  std::size_t n = 0;
  std::vector<std::int32_t> stack{root_};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    ++n;
    for (auto c = first_[v]; c != kNone; c = next_[c]) stack.push_back(c);
  }
  return n;
}

bool RootedTree::acyclic_single_root() const {
  if (root_ == kNone) return false;
  std::vector<std::uint8_t> seen(node_count(), 0);
  std::vector<std::int32_t> stack{root_};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (seen[v]) return false;
    seen[v] = 1;
    for (auto c = first_[v]; c != kNone; c = next_[c]) stack.push_back(c);
  }
  return true;
}

std::int64_t tree_height(const RootedTree& t) {
  if (t.root() == RootedTree::kNone) return -1;
  std::int64_t h = 0;
  std::vector<std::pair<std::int32_t, std::int64_t>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    h = std::max(h, d);
    for (auto c = t.first_child(v); c != RootedTree::kNone; c = t.next_sibling(c))
      stack.emplace_back(c, d + 1);
  }
  return h;
}

std::size_t tree_leaves(const RootedTree& t) {
  if (t.root() == RootedTree::kNone) return 0;
  std::size_t n = 0;
  std::vector<std::int32_t> stack{t.root()};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (t.is_leaf(v)) ++n;
    for (auto c = t.first_child(v); c != RootedTree::kNone; c = t.next_sibling(c)) stack.push_back(c);
  }
  return n;
}

std::size_t tree_cherries(const RootedTree& t) {
  if (t.root() == RootedTree::kNone) return 0;
  std::size_t n = 0;
  std::vector<std::int32_t> stack{t.root()};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    std::size_t kids = 0, leaf_kids = 0;
    for (auto c = t.first_child(v); c != RootedTree::kNone; c = t.next_sibling(c)) {
      ++kids;
      if (t.is_leaf(c)) ++leaf_kids;
      stack.push_back(c);
    }
    if (kids == 2 && leaf_kids == 2) ++n;
  }
  return n;
}

double tree_mean_depth(const RootedTree& t) {
  if (t.root() == RootedTree::kNone) return 0.0;
  double total = 0.0;
  std::size_t n = 0;
  std::vector<std::pair<std::int32_t, std::int64_t>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    total += static_cast<double>(d);
    ++n;
    for (auto c = t.first_child(v); c != RootedTree::kNone; c = t.next_sibling(c))
      stack.emplace_back(c, d + 1);
  }
  return total / static_cast<double>(n);
}

}  // namespace leapgen
