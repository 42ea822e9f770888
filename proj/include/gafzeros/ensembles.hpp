#ifndef GAFZEROS_ENSEMBLES_HPP_
#define GAFZEROS_ENSEMBLES_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gafzeros/domain.hpp"

namespace gafzeros {

// Stopping rule for infinite families. The chosen order N* satisfies
//
//   sup_D sum_{j > N*} |psi_j|^2 <= epsilon^2 * inf_D sum_{j <= N*} |psi_j|^2
//
// on the working domain D.
struct TruncationPolicy {
  double epsilon = 1e-6;
  int max_order = 4096;
};

// A holomorphic curve Psi(z) = (psi_j(z))_j. Norms are always squared:
// ||Psi(z)||^2 = sum_j |psi_j(z)|^2 = K(z, z).
//
//   Planar      psi_j = z^j / sqrt(j!),        j >= 0, on a plane-window
//   Hyperbolic  psi_j = z^j,                   j >= 0, on the unit disk
//   Kostlan     psi_j = sqrt(C(N, j)) z^j,     0 <= j <= N
//   Explicit    psi_j = sum_k coeffs(j, k) z^k, one row per component
class CurveFamily {
 public:
  enum class Variant { kPlanar, kHyperbolic, kKostlan, kExplicit };

  static constexpr double kDefaultWindow = 1e8;

  static CurveFamily Planar(double window_radius);
  static CurveFamily Hyperbolic();
  static CurveFamily Kostlan(int degree, double window_radius = kDefaultWindow);
  // Rows must be linearly independent.
  static CurveFamily Explicit(Eigen::MatrixXcd coeffs,
                              double window_radius = kDefaultWindow);

  Variant variant() const { return variant_; }
  const Domain& domain() const { return domain_; }
  int kostlan_degree() const { return kostlan_degree_; }
  const Eigen::MatrixXcd& coefficients() const { return coeffs_; }

  bool IsFinite() const;
  bool HasClosedForm() const { return variant_ != Variant::kExplicit; }
  // Number of components for finite families.
  int Dimension() const;
  // True if every component vanishes at some common point (Explicit only);
  // such curves have log-singular norms.
  bool HasCommonZero() const { return has_common_zero_; }
  std::string Name() const;

  // Throws OutsideDomain for points the family is not defined on.
  void CheckPoint(Complex z) const;

  // For the diagonal families psi_j = s_j z^j: log(s_j).
  double LogBasisScale(int j) const;

 private:
  CurveFamily(Variant variant, Domain domain)
      : variant_(variant), domain_(domain) {}

  Variant variant_;
  Domain domain_;
  int kostlan_degree_ = 0;
  Eigen::MatrixXcd coeffs_;
  bool has_common_zero_ = false;
};

// ||Psi(z)||^2 from the closed form when available, otherwise the
// finite sum over Explicit components.
double SquaredNorm(const CurveFamily& family, Complex z);

// log ||Psi(z)||^2, without forming the norm for the closed-form families.
double LogSquaredNorm(const CurveFamily& family, Complex z);

// K(z, w) = sum_j psi_j(z) conj(psi_j(w)).
Complex Kernel(const CurveFamily& family, Complex z, Complex w);

// Partial sums over j <= order. Used for cross-validation of the closed
// forms and by the truncation policy.
double TruncatedSquaredNorm(const CurveFamily& family, Complex z, int order);
Complex TruncatedKernel(const CurveFamily& family, Complex z, Complex w,
                        int order);

// Minimal order meeting the policy on `domain`. Finite families return
// their own order (N for Kostlan, the polynomial degree for Explicit).
// Throws if the cap is hit (e.g. a hyperbolic domain reaching |z| = 1).
int TruncationOrder(const CurveFamily& family, const Domain& domain,
                    const TruncationPolicy& policy);

// A family restricted to a compact working domain with a fixed truncation.
// Immutable after construction.
class Ensemble {
 public:
  Ensemble(CurveFamily family, Domain domain, TruncationPolicy policy = {});

  const CurveFamily& family() const { return family_; }
  const Domain& domain() const { return domain_; }
  const TruncationPolicy& policy() const { return policy_; }
  // N* for infinite families.
  int order() const { return order_; }
  // Length of the coefficient vector omega.
  int NumCoefficients() const;
  // Highest monomial power of the realized polynomial.
  int PolynomialDegree() const;
  // Evaluation variable is z / EvaluationScale(); keeps the monomial
  // coefficients of large truncations in floating-point range.
  double EvaluationScale() const { return evaluation_scale_; }

  // Monomial coefficients of psi(z, omega) in the scaled variable
  // y = z / EvaluationScale(), ascending powers.
  std::vector<Complex> ScaledPolynomial(std::span<const Complex> omega) const;

 private:
  CurveFamily family_;
  Domain domain_;
  TruncationPolicy policy_;
  int order_ = 0;
  double evaluation_scale_ = 1.0;
  // Diagonal families: scaled basis coefficient s_j * scale^j.
  std::vector<double> scaled_basis_;
};

}  // namespace gafzeros

#endif  // GAFZEROS_ENSEMBLES_HPP_
