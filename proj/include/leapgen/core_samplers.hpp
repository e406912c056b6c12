#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "leapgen/objects.hpp"
#include "leapgen/rng.hpp"

namespace leapgen {

class SupportError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// uniform Dyck walk of semilength k, cycle lemma
LatticeWalk dyck_uniform(std::size_t k, Rng& rng);

// uniform rooted labeled tree on k vertices: the shape is a Poisson(1)
// Galton-Watson tree with k nodes (multinomial degrees + cycle lemma), node
// ids breadth-first; keep_labels attaches a uniform labeling 1..k
RootedTree cayley_uniform(std::size_t k, Rng& rng, bool keep_labels = false);
// same shape draw, edges reported as (parent, child); returns the root id
std::int32_t cayley_edges(std::size_t k, Rng& rng,
                          const std::function<void(std::int32_t, std::int32_t)>& edge);

// uniform leaf-labeled binary tree with k leaves: leaf insertion when labels
// are kept, else the shape alone (uniform plane binary tree, order forgotten)
RootedTree phylo_uniform(std::size_t k, Rng& rng, bool keep_labels = false);

struct OffspringSpec {
  enum class Kind { kary, schroder } kind = Kind::schroder;
  unsigned arity = 0;  // kary only

  static OffspringSpec kary(unsigned k) { return {Kind::kary, k}; }
  static OffspringSpec schroder() { return {Kind::schroder, 0}; }
};

// uniform labeled mobile with k leaves, as a plane tree: a critical
// Galton-Watson tree conditioned on its leaf count (degree counts by
// multinomial draws, then a uniform arrangement rotated by the cycle lemma)
RootedTree gw_core_uniform(const OffspringSpec& spec, std::size_t k, Rng& rng);

}  // namespace leapgen
