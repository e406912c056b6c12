#include "leapgen/scheme.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "leapgen/core_samplers.hpp"

namespace leapgen {

std::string class_name(SchemeClass c, unsigned arity) {
  switch (c) {
    case SchemeClass::motzkin: return "motzkin";
    case SchemeClass::schroder: return "schroder";
    case SchemeClass::polya: return "polya";
    case SchemeClass::phylo: return "phylo";
    case SchemeClass::kary_mobile: return "mobile:" + std::to_string(arity);
    case SchemeClass::schroder_mobile: return "schroder-mobile";
  }
  return "?";
}

bool SchemeSpec::has_expansion(int order) const {
  if (order <= 1) return true;
  // p^2 and p^3 only use a^1 and c^1
  return !std::isnan(a_inf[0]) && !std::isnan(c_inf[0]);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void walk_substitute(std::uint64_t d_run, const LatticeWalk& core, const std::vector<RunPair>& runs,
                     LatticeWalk& out) {
  auto& st = out.steps();
  st.clear();
  st.insert(st.end(), d_run, Step::flat);
  const auto& cs = core.steps();
  if (cs.size() != 2 * runs.size()) throw std::invalid_argument("assemble: component count != core size");
  for (std::size_t m = 0; m < runs.size(); ++m) {
    st.push_back(cs[2 * m]);
    st.insert(st.end(), runs[m].i, Step::flat);
    st.push_back(cs[2 * m + 1]);
    st.insert(st.end(), runs[m].j, Step::flat);
  }
}

// core node -> component root in `out`; atoms are all vertices (polya) or leaves
void link_core(const RootedTree& core, bool leaf_atoms, const std::vector<std::int32_t>& roots,
               RootedTree& out) {
  const std::size_t nc = core.node_count();
  std::vector<std::int32_t> map(nc);
  std::size_t next = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto ci = static_cast<std::int32_t>(c);
    if (!leaf_atoms || core.is_leaf(ci)) {
      if (next >= roots.size()) throw std::invalid_argument("assemble: component count != core size");
      map[c] = roots[next++];
    } else {
      map[c] = out.add_node();
    }
  }
  if (next != roots.size()) throw std::invalid_argument("assemble: component count != core size");
  for (std::size_t c = 0; c < nc; ++c)
    for (auto ch = core.first_child(static_cast<std::int32_t>(c)); ch != RootedTree::kNone;
         ch = core.next_sibling(ch))
      out.append_child(map[c], map[ch]);
  out.set_root(map[core.root()]);
}

class WalkSampler final : public SchemeSampler {
public:
  WalkSampler(SchemeClass cls, RunLaw law, std::uint64_t atom_size)
      : cls_(cls), law_(law), atom_(atom_size) {}

  bool is_walk() const override { return true; }
  bool has_D() const override { return true; }
  std::uint64_t draw_D(Rng& rng) const override { return law_.draw(rng); }
  std::uint64_t draw_B(TrialWorkspace& ws, Rng& rng, std::uint64_t cap) const override {
    RunPair r = gamma_B_walk(law_, rng);
    std::uint64_t size = atom_ + r.i + r.j;
    if (size <= cap) ws.runs.push_back(r);
    return size;
  }
  void assemble(TrialWorkspace& ws, std::uint64_t k, Rng& rng, ComposedObject& out,
                bool keep) const override {
    LatticeWalk core = dyck_uniform(k, rng);
    out.cls = cls_;
    out.is_walk = true;
    walk_substitute(ws.d_run, core, ws.runs, out.walk);
    out.core_size = k;
    out.size = ws.d_run + k * atom_;
    for (auto& r : ws.runs) out.size += r.i + r.j;
    if (keep) {
      auto d = std::make_shared<Decomposition>();
      d->d_run = ws.d_run;
      d->core_walk = std::move(core);
      d->runs = ws.runs;
      out.decomposition = std::move(d);
    } else {
      out.decomposition.reset();
    }
  }
  bool core_nonzero(std::uint64_t) const override { return true; }
  bool size_supported(std::uint64_t n) const override { return n >= 1; }

private:
  SchemeClass cls_;
  RunLaw law_;
  std::uint64_t atom_;
};

class TreeSampler final : public SchemeSampler {
public:
  TreeSampler(SchemeClass cls, std::shared_ptr<const TreeFamily> fam)
      : cls_(cls), fam_(fam), boltz_(fam, fam->rho()) {}

  bool is_walk() const override { return false; }
  std::uint64_t draw_B(TrialWorkspace& ws, Rng& rng, std::uint64_t cap) const override {
    auto r = boltz_.gamma_B_into(ws.pool, rng, cap);
    if (r.aborted) return r.size > cap ? r.size : cap + 1;
    ws.roots.push_back(r.root);
    return r.size;
  }
  void assemble(TrialWorkspace& ws, std::uint64_t k, Rng& rng, ComposedObject& out,
                bool keep) const override {
    if (!keep && fam_->kind() == TreeKind::polya) {
      if (ws.roots.size() != k) throw std::invalid_argument("assemble: component count != core size");
      auto& pool = ws.pool;
      const auto& roots = ws.roots;
      pool.set_root(roots[cayley_edges(k, rng, [&](std::int32_t p, std::int32_t c) {
        pool.append_child(roots[p], roots[c]);
      })]);
      out.cls = cls_;
      out.is_walk = false;
      out.core_size = k;
      out.tree = std::move(ws.pool);
      ws.pool = RootedTree();
      out.size = out.tree.node_count();
      out.decomposition.reset();
      return;
    }
    RootedTree core = draw_core(k, rng);
    out.cls = cls_;
    out.is_walk = false;
    out.core_size = k;
    std::shared_ptr<Decomposition> d;
    if (keep) {
      d = std::make_shared<Decomposition>();
      d->components.reserve(ws.roots.size());
      for (auto r : ws.roots) d->components.push_back(ws.pool.extract(r));
    }
    link_core(core, fam_->counts_leaves(), ws.roots, ws.pool);
    out.tree = std::move(ws.pool);
    ws.pool = RootedTree();
    out.size = fam_->counts_leaves() ? out.tree.leaf_count() : out.tree.node_count();
    if (d) d->core_tree = std::move(core);
    out.decomposition = std::move(d);
  }
  bool core_nonzero(std::uint64_t k) const override { return fam_->core_support(k); }
  bool size_supported(std::uint64_t n) const override {
    if (n < 1) return false;
    const unsigned p = fam_->period();
    return p <= 1 || n % p == 1 % p;
  }

  RootedTree draw_core(std::uint64_t k, Rng& rng) const {
    switch (fam_->kind()) {
      case TreeKind::polya: return cayley_uniform(k, rng);
      case TreeKind::phylo: return phylo_uniform(k, rng);
      case TreeKind::kary_mobile: return gw_core_uniform(OffspringSpec::kary(fam_->arity()), k, rng);
      case TreeKind::schroder_mobile: return gw_core_uniform(OffspringSpec::schroder(), k, rng);
    }
    throw std::logic_error("unknown tree kind");
  }

private:
  SchemeClass cls_;
  std::shared_ptr<const TreeFamily> fam_;
  TreeBoltzmann boltz_;
};

}  // namespace

SchemeSpec make_motzkin(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("motzkin: weight must be positive");
  SchemeSpec s;
  s.cls = SchemeClass::motzkin;
  s.id = "motzkin";
  s.weight_u = u;
  const double rho = 1.0 / (2.0 + u);
  s.rho = rho;
  s.rho_high = HighFloat(1) / (HighFloat(2) + HighFloat(u));
  s.mu = 2.0 + u;
  s.sigma = std::sqrt(u * (2.0 + u) / 2.0);
  s.s = -0.5;
  s.B_rho = 0.25;
  s.D_rho = (2.0 + u) / 2.0;
  s.support = {0, 1, 0};
  RunLaw law;
  law.p = u / (2.0 + u);
  if (u == std::floor(u) && u < 1e6) {
    law.exact = true;
    law.ratio = Ratio{static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(u) + 2};
  }
  if (u == 1.0) {
    // Catalan and Motzkin-number expansions
    s.a_inf = {-9.0 / 8.0, 145.0 / 128.0, -1155.0 / 1024.0};
    s.c_inf = {-39.0 / 16.0, kNaN, kNaN};
  } else {
    s.id += ":u=" + std::to_string(u);
    s.a_inf = {-9.0 / 8.0, 145.0 / 128.0, -1155.0 / 1024.0};
    s.c_inf = {kNaN, kNaN, kNaN};
  }
  s.sampler = std::make_shared<WalkSampler>(SchemeClass::motzkin, law, 2);
  validate_scheme(s);
  return s;
}

SchemeSpec make_schroder() {
  SchemeSpec s;
  s.cls = SchemeClass::schroder;
  s.id = "schroder";
  s.rho_high = HighFloat(3) - 2 * boost::multiprecision::sqrt(HighFloat(2));
  s.rho = static_cast<double>(s.rho_high);
  s.mu = std::sqrt(2.0);
  s.sigma = std::sqrt(0.5);
  s.s = -0.5;
  s.B_rho = 0.25;
  s.D_rho = 1.0 / (1.0 - s.rho);
  s.support = {0, 1, 0};
  s.a_inf = {-9.0 / 8.0, 145.0 / 128.0, -1155.0 / 1024.0};
  s.c_inf = {kNaN, kNaN, kNaN};
  RunLaw law;
  law.p = s.rho;
  s.sampler = std::make_shared<WalkSampler>(SchemeClass::schroder, law, 1);
  validate_scheme(s);
  return s;
}

SchemeSpec make_tree_scheme(TreeKind kind, unsigned arity) {
  auto fam = TreeFamily::get(kind, arity);
  SchemeSpec s;
  switch (kind) {
    case TreeKind::polya: s.cls = SchemeClass::polya; break;
    case TreeKind::phylo: s.cls = SchemeClass::phylo; break;
    case TreeKind::kary_mobile: s.cls = SchemeClass::kary_mobile; break;
    case TreeKind::schroder_mobile: s.cls = SchemeClass::schroder_mobile; break;
  }
  s.arity = arity;
  s.id = fam->name();
  s.family = fam;
  s.rho = fam->rho();
  s.rho_high = fam->rho_high();
  s.mu = fam->mu();
  s.sigma = fam->sigma();
  s.s = fam->singular_exponent();
  s.B_rho = fam->rho_A();
  s.D_rho = 1.0;
  s.support = (kind == TreeKind::kary_mobile) ? SupportDescriptor{1, arity - 1u, 1}
                                              : SupportDescriptor{0, 1, 1};
  s.a_inf = {kNaN, kNaN, kNaN};
  s.c_inf = {kNaN, kNaN, kNaN};
  s.sampler = std::make_shared<TreeSampler>(s.cls, fam);
  validate_scheme(s);
  return s;
}

SchemeSpec make_scheme(std::string_view id, double u) {
  if (id == "motzkin") return make_motzkin(u);
  if (u != 1.0) throw std::invalid_argument("weights are only supported for motzkin");
  if (id == "schroder") return make_schroder();
  if (id == "polya") return make_tree_scheme(TreeKind::polya);
  if (id == "phylo") return make_tree_scheme(TreeKind::phylo);
  if (id == "schroder-mobile") return make_tree_scheme(TreeKind::schroder_mobile);
  if (id.substr(0, 7) == "mobile:") {
    unsigned k = 0;
    try {
      k = static_cast<unsigned>(std::stoul(std::string(id.substr(7))));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad mobile arity in '" + std::string(id) + "'");
    }
    if (k < 2 || k > 6) throw std::invalid_argument("mobile arity must be in [2,6]");
    return make_tree_scheme(TreeKind::kary_mobile, k);
  }
  throw std::invalid_argument("unknown class '" + std::string(id) + "'");
}

void validate_scheme(const SchemeSpec& spec) {
  if (!(spec.mu > 0) || !(spec.sigma > 0)) throw std::invalid_argument(spec.id + ": mu, sigma must be positive");
  if (spec.support.period < 1) throw std::invalid_argument(spec.id + ": period must be >= 1");
  if (!spec.sampler) throw std::invalid_argument(spec.id + ": no sampler");
  for (std::uint64_t k = 0; k <= 20; ++k)
    if (spec.support.contains(k) != spec.sampler->core_nonzero(k))
      throw std::invalid_argument(spec.id + ": support descriptor disagrees with a_" + std::to_string(k));
}

ComposedObject assemble(SchemeClass cls, std::uint64_t d_run, const LatticeWalk& core,
                        const std::vector<RunPair>& runs) {
  if (cls != SchemeClass::motzkin && cls != SchemeClass::schroder)
    throw std::invalid_argument("assemble: walk parts for a tree class");
  ComposedObject out;
  out.cls = cls;
  out.is_walk = true;
  walk_substitute(d_run, core, runs, out.walk);
  out.core_size = runs.size();
  const std::uint64_t atom = cls == SchemeClass::motzkin ? 2 : 1;
  out.size = d_run + atom * runs.size();
  for (auto& r : runs) out.size += r.i + r.j;
  return out;
}

ComposedObject assemble(SchemeClass cls, const RootedTree& core, const std::vector<RootedTree>& components) {
  if (cls == SchemeClass::motzkin || cls == SchemeClass::schroder)
    throw std::invalid_argument("assemble: tree parts for a walk class");
  ComposedObject out;
  out.cls = cls;
  out.is_walk = false;
  std::vector<std::int32_t> roots;
  roots.reserve(components.size());
  for (auto& c : components) roots.push_back(out.tree.copy_subtree(c, c.root()));
  const bool leaf_atoms = cls != SchemeClass::polya;
  link_core(core, leaf_atoms, roots, out.tree);
  out.core_size = components.size();
  out.size = leaf_atoms ? out.tree.leaf_count() : out.tree.node_count();
  return out;
}

}  // namespace leapgen
