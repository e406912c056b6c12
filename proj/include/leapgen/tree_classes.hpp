#pragma once

#include <memory>
#include <string>
#include <vector>

#include "leapgen/numeric.hpp"
#include "leapgen/series.hpp"

namespace leapgen {

// One unlabeled tree class C~ = A o B, where A is the labeled core class
// (Cayley, phylogenetic, labeled mobiles) and B the symmetric components.
class TreeFamily {
public:
  static std::shared_ptr<const TreeFamily> get(TreeKind kind, unsigned arity = 0);

  TreeKind kind() const { return eq_.kind; }
  unsigned arity() const { return eq_.arity; }
  const TreeEquation& equation() const { return eq_; }
  std::string name() const;
  // size counts vertices (polya) or leaves (others)
  bool counts_leaves() const { return eq_.kind != TreeKind::polya; }

  // ordinary counting series of A~ and B
  TruncatedSeries<Rational> a_tilde_exact(std::size_t N) const;
  TruncatedSeries<Rational> b_exact(std::size_t N) const;
  // coefficients of A~(x0 z) / B(x0 z) in double
  TruncatedSeries<double> a_tilde_scaled(std::size_t N, double x0) const;
  TruncatedSeries<double> b_scaled(std::size_t N) const;  // B(rho z)

  // labeled core coefficients a_k = |A_k| / k!
  Rational core_coeff_exact(std::size_t k) const;
  double log_core_coeff(std::size_t k) const;  // -inf off support
  bool core_support(std::size_t k) const;
  unsigned period() const { return eq_.kind == TreeKind::kary_mobile ? eq_.arity - 1 : 1; }

  double rho() const { return rho_; }
  const HighFloat& rho_high() const { return rho_high_; }
  double rho_A() const { return static_cast<double>(rho_A_high_); }
  const HighFloat& rho_A_high() const { return rho_A_high_; }
  double a_tilde_at_rho() const { return eq_.kind == TreeKind::schroder_mobile ? 0.5 : 1.0; }
  double singular_exponent() const { return -0.5; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  // corrected coefficient-ratio estimate (a_{n-1}/a_n)((n-1)/n)^{3/2}
  double ratio_estimate(std::size_t N) const;

  // A(u) for 0 <= u <= rho_A
  double outer(double u) const;
  // A~(y) for 0 <= y <= rho; series below 0.7 rho, A(B(y)) above
  double eval(double y) const;
  double eval_series(double y, double* tail_bound = nullptr) const;
  double eval_composed(double y) const;
  // derivative of A~ by series, y <= 0.7 rho
  double eval_series_derivative(double y) const;
  double B(double x) const;

private:
  TreeFamily(TreeKind kind, unsigned arity);
  void solve_rho();

  TreeEquation eq_;
  std::vector<double> coeffs_;       // unlabeled counts, double
  std::vector<double> core_scaled_;  // a_k rho_A^k for schroder mobiles
  HighFloat rho_high_, rho_A_high_;
  double rho_ = 0, mu_ = 0, sigma_ = 0;
};

}  // namespace leapgen
