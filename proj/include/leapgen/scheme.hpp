#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "leapgen/boltzmann.hpp"
#include "leapgen/numeric.hpp"
#include "leapgen/objects.hpp"
#include "leapgen/rng.hpp"

namespace leapgen {

enum class SchemeClass { motzkin, schroder, polya, phylo, kary_mobile, schroder_mobile };

std::string class_name(SchemeClass c, unsigned arity = 0);

// core sizes k with a_k != 0: k >= minimum and k = offset mod period
struct SupportDescriptor {
  std::uint64_t offset = 0, period = 1, minimum = 0;
  bool contains(std::uint64_t k) const {
    return k >= minimum && (period <= 1 || k % period == offset % period);
  }
};

// per-trial scratch space shared by the sampler and the leap loop
struct TrialWorkspace {
  std::uint64_t d_run = 0;
  std::vector<RunPair> runs;         // walk components
  RootedTree pool;                   // tree components
  std::vector<std::int32_t> roots;   // component roots in pool
  void clear() {
    d_run = 0;
    runs.clear();
    pool.clear();
    roots.clear();
  }
};

// retained decomposition of a composed object
struct Decomposition {
  std::uint64_t d_run = 0;
  LatticeWalk core_walk;
  RootedTree core_tree;
  std::vector<RunPair> runs;
  std::vector<RootedTree> components;
};

struct ComposedObject {
  SchemeClass cls = SchemeClass::motzkin;
  bool is_walk = true;
  LatticeWalk walk;
  RootedTree tree;
  std::uint64_t size = 0;
  std::uint64_t core_size = 0;
  std::shared_ptr<Decomposition> decomposition;  // set when requested
  std::string str() const { return is_walk ? walk.str() : tree.to_parens(); }
};

// class-specific samplers behind the generic leap loop
class SchemeSampler {
public:
  virtual ~SchemeSampler() = default;
  virtual bool is_walk() const = 0;
  virtual bool has_D() const { return false; }
  virtual std::uint64_t draw_D(Rng&) const { return 0; }
  // appends one Gamma B(rho) component to ws and returns its size; a return
  // value above cap means the draw was cut short and nothing was recorded
  virtual std::uint64_t draw_B(TrialWorkspace& ws, Rng& rng, std::uint64_t cap) const = 0;
  // draws the core of size k = #components and substitutes; consumes ws
  virtual void assemble(TrialWorkspace& ws, std::uint64_t k, Rng& rng, ComposedObject& out,
                        bool keep_decomposition) const = 0;
  // a_k != 0, used for the support consistency check
  virtual bool core_nonzero(std::uint64_t k) const = 0;
  // size n attainable by the composed class
  virtual bool size_supported(std::uint64_t n) const = 0;
};

struct SchemeSpec {
  std::string id;
  SchemeClass cls = SchemeClass::motzkin;
  unsigned arity = 0;
  double rho = 0;
  HighFloat rho_high;
  double mu = 0, sigma = 0, s = -0.5;
  double B_rho = 0, D_rho = 1;  // D_rho = 1 when there is no D part
  SupportDescriptor support;
  double weight_u = 1.0;  // horizontal-step weight, walks only
  // asymptotic-expansion coefficients a^i, c^i (i = 1..3); NaN if unknown
  std::array<double, 3> a_inf{}, c_inf{};
  std::shared_ptr<const SchemeSampler> sampler;
  std::shared_ptr<const TreeFamily> family;  // trees only

  bool has_D() const { return sampler->has_D(); }
  bool has_expansion(int order) const;
};

// "motzkin", "schroder", "polya", "phylo", "mobile:k", "schroder-mobile";
// weight_u != 1 only for walks
SchemeSpec make_scheme(std::string_view id, double weight_u = 1.0);
SchemeSpec make_motzkin(double weight_u = 1.0);
SchemeSpec make_schroder();
SchemeSpec make_tree_scheme(TreeKind kind, unsigned arity = 0);

// rejects specs whose support descriptor disagrees with a_k != 0 on k <= 20
void validate_scheme(const SchemeSpec& spec);

// free-standing substitution; components are separate trees here
ComposedObject assemble(SchemeClass cls, std::uint64_t d_run, const LatticeWalk& core,
                        const std::vector<RunPair>& runs);
ComposedObject assemble(SchemeClass cls, const RootedTree& core,
                        const std::vector<RootedTree>& components);

}  // namespace leapgen
