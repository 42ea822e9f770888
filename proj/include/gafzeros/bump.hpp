#ifndef GAFZEROS_BUMP_HPP_
#define GAFZEROS_BUMP_HPP_

#include "gafzeros/domain.hpp"

namespace gafzeros {

// Radial test function phi(z) = Phi(|z - center|) with Phi = 1 on [0, r],
// Phi = 0 on [R, inf) and the quintic smoothstep in between, so phi is
// C^2 across both joins.
class TestFunction {
 public:
  // Throws InvalidArgument unless 0 < r < R.
  static TestFunction Bump(double inner, double outer,
                           Complex center = {0.0, 0.0});

  double inner() const { return inner_; }
  double outer() const { return outer_; }
  Complex center() const { return center_; }

  double Profile(double t) const;
  double ProfileDerivative(double t) const;
  double ProfileSecondDerivative(double t) const;
  double operator()(Complex z) const { return Profile(std::abs(z - center_)); }

  // ||Laplacian phi||_{L^1(C)} = 2 pi int_r^R |t Phi'' + Phi'| dt, by
  // adaptive quadrature split at the sign changes of the integrand.
  double laplacian_l1() const { return laplacian_l1_; }
  // 2 pi int_r^R (t |Phi''| + |Phi'|) dt; never below laplacian_l1().
  double triangle_bound() const { return triangle_bound_; }

  Domain Support() const { return Domain::Disk(center_, outer_); }

 private:
  TestFunction() = default;

  double inner_ = 0.0;
  double outer_ = 1.0;
  Complex center_{0.0, 0.0};
  double laplacian_l1_ = 0.0;
  double triangle_bound_ = 0.0;
};

}  // namespace gafzeros

#endif  // GAFZEROS_BUMP_HPP_
